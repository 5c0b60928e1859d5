"""JSON file formats.

All indices in files are 1-based; rationals are strings in the form ``"p"``
or ``"p/q"`` (JSON integers are accepted too).  Matrices are row-major with
column ``c`` holding the image of basis vector ``e_c``.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .algebra import RotaBaxterOperator, ThreeLieAlgebra
from .cohomology import Cochain, CochainSpace
from .deformation import FormalDeformation, cochain_to_trilinear, trilinear_to_cochain
from .errors import InputError, ParseError
from .linalg import Matrix, format_rational, parse_rational
from .representation import RBRepresentation, Representation
from .structures import MatchedPairData


def _rat(x, where):
    if isinstance(x, bool) or not isinstance(x, (str, int)):
        raise ParseError(f"{where}: expected a rational string, got {x!r}")
    try:
        return parse_rational(x)
    except ParseError as exc:
        raise ParseError(f"{where}: {exc}") from None


def _int(x, where):
    if isinstance(x, bool) or not isinstance(x, int):
        raise ParseError(f"{where}: expected an integer, got {x!r}")
    return x


def _obj(data, keys, where):
    if not isinstance(data, dict):
        raise ParseError(f"{where}: expected a JSON object")
    missing = [k for k in keys if k not in data]
    if missing:
        raise ParseError(f"{where}: missing key(s) {', '.join(missing)}")
    return data


def load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def dump_json(data, path=None):
    text = json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    if path is None:
        return text
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
    return text


# matrices -----------------------------------------------------------------------

def parse_matrix(data, where="matrix", shape=None):
    if isinstance(data, dict) and "matrix" in data:
        data = data["matrix"]
    if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
        raise ParseError(f"{where}: expected a list of rows")
    rows = [[_rat(x, f"{where}[{i + 1}][{j + 1}]") for j, x in enumerate(r)] for i, r in enumerate(data)]
    if len({len(r) for r in rows}) > 1:
        raise InputError(f"{where}: ragged rows")
    m = Matrix(rows) if rows else Matrix.zeros(0, 0)
    if shape is not None and m.shape != tuple(shape):
        raise InputError(f"{where}: shape {m.shape}, expected {tuple(shape)}")
    return m


def matrix_to_json(m: Matrix):
    return m.to_strings()


# algebras and operators --------------------------------------------------------------

def parse_algebra(data, where="algebra") -> ThreeLieAlgebra:
    _obj(data, ("dim", "brackets"), where)
    n = _int(data["dim"], f"{where}.dim")
    if n < 0:
        raise InputError(f"{where}.dim must be nonnegative")
    if not isinstance(data["brackets"], list):
        raise ParseError(f"{where}.brackets must be a list")
    table = {}
    for t, entry in enumerate(data["brackets"]):
        w = f"{where}.brackets[{t}]"
        _obj(entry, ("i", "j", "k", "value"), w)
        i, j, k = (_int(entry[c], f"{w}.{c}") for c in "ijk")
        if not 1 <= i < j < k <= n:
            raise InputError(f"{w}: indices must satisfy 1 <= i < j < k <= {n}, got ({i},{j},{k})")
        if (i - 1, j - 1, k - 1) in table:
            raise InputError(f"{w}: duplicate bracket ({i},{j},{k})")
        value = entry["value"]
        if not isinstance(value, dict):
            raise ParseError(f"{w}.value must map basis indices to rationals")
        vec = [Fraction(0)] * n
        for key, x in value.items():
            try:
                l = int(key)
            except ValueError:
                raise ParseError(f"{w}.value: bad basis index {key!r}") from None
            if not 1 <= l <= n:
                raise InputError(f"{w}.value: basis index {l} out of range")
            vec[l - 1] = _rat(x, f"{w}.value[{key}]")
        table[(i - 1, j - 1, k - 1)] = vec
    return ThreeLieAlgebra.from_brackets(n, table)


def algebra_to_json(A: ThreeLieAlgebra):
    brackets = []
    for (i, j, k), vec in sorted(A.brackets().items()):
        value = {str(l + 1): format_rational(v) for l, v in enumerate(vec) if v}
        brackets.append({"i": i + 1, "j": j + 1, "k": k + 1, "value": value})
    return {"dim": A.dim, "brackets": brackets}


def parse_operator(data, n=None, where="operator") -> RotaBaxterOperator:
    _obj(data, ("weight", "matrix"), where)
    weight = _rat(data["weight"], f"{where}.weight")
    m = parse_matrix(data["matrix"], f"{where}.matrix")
    if m.rows != m.cols:
        raise InputError(f"{where}.matrix must be square")
    if n is not None and m.rows != n:
        raise InputError(f"{where}.matrix is {m.rows}x{m.cols}, algebra has dimension {n}")
    return RotaBaxterOperator(m, weight)


def operator_to_json(R: RotaBaxterOperator):
    return {"weight": format_rational(R.weight), "matrix": matrix_to_json(R.matrix)}


# representations ---------------------------------------------------------------------

def _parse_rho(entries, n, m, where):
    if not isinstance(entries, list):
        raise ParseError(f"{where} must be a list")
    pairs = {}
    for t, entry in enumerate(entries):
        w = f"{where}[{t}]"
        _obj(entry, ("i", "j", "matrix"), w)
        i, j = _int(entry["i"], f"{w}.i"), _int(entry["j"], f"{w}.j")
        if not 1 <= i < j <= n:
            raise InputError(f"{w}: indices must satisfy 1 <= i < j <= {n}, got ({i},{j})")
        if (i - 1, j - 1) in pairs:
            raise InputError(f"{w}: duplicate pair ({i},{j})")
        pairs[(i - 1, j - 1)] = parse_matrix(entry["matrix"], f"{w}.matrix", (m, m))
    return pairs


def _rho_to_json(rep: Representation):
    return [
        {"i": i + 1, "j": j + 1, "matrix": matrix_to_json(mat)}
        for (i, j), mat in sorted(rep.pairs().items())
    ]


def parse_representation(data, A: ThreeLieAlgebra, R: RotaBaxterOperator, where="representation") -> RBRepresentation:
    _obj(data, ("vdim", "rho"), where)
    m = _int(data["vdim"], f"{where}.vdim")
    if m < 0:
        raise InputError(f"{where}.vdim must be nonnegative")
    base = Representation.from_pairs(A, m, _parse_rho(data["rho"], A.dim, m, f"{where}.rho"))
    RV = parse_matrix(data["RV"], f"{where}.RV", (m, m)) if "RV" in data else Matrix.zeros(m)
    return RBRepresentation(base, RV, R)


def representation_to_json(rbrep: RBRepresentation):
    return {"vdim": rbrep.vdim, "rho": _rho_to_json(rbrep.base), "RV": matrix_to_json(rbrep.RV)}


# cochains -------------------------------------------------------------------------

def parse_cochain(data, n, m, variant="plain", where="cochain") -> Cochain:
    _obj(data, ("degree", "entries"), where)
    p = _int(data["degree"], f"{where}.degree")
    if p < 1:
        raise InputError(f"{where}.degree must be at least 1")
    space = CochainSpace(n, m, p, variant)
    if not isinstance(data["entries"], list):
        raise ParseError(f"{where}.entries must be a list")
    entries, seen = [], set()
    for t, entry in enumerate(data["entries"]):
        w = f"{where}.entries[{t}]"
        _obj(entry, ("pairs", "arg", "value"), w)
        pairs = entry["pairs"]
        if not isinstance(pairs, list) or not all(isinstance(q, list) and len(q) == 2 for q in pairs):
            raise ParseError(f"{w}.pairs must be a list of [i, j]")
        pairs0 = []
        for q in pairs:
            i, j = _int(q[0], f"{w}.pairs"), _int(q[1], f"{w}.pairs")
            if not 1 <= i < j <= n:
                raise InputError(f"{w}: pair ({i},{j}) must satisfy 1 <= i < j <= {n}")
            pairs0.append((i - 1, j - 1))
        arg = _int(entry["arg"], f"{w}.arg")
        if not 1 <= arg <= n:
            raise InputError(f"{w}.arg out of range")
        value = entry["value"]
        if not isinstance(value, list) or len(value) != m:
            raise InputError(f"{w}.value must be a list of {m} rationals")
        key = (tuple(pairs0), arg)
        if key in seen:
            raise InputError(f"{w}: duplicate basis tuple")
        seen.add(key)
        entries.append((pairs0, arg - 1, [_rat(x, f"{w}.value") for x in value]))
    return Cochain.from_entries(space, entries)


def cochain_to_json(c: Cochain):
    return {
        "degree": c.space.degree,
        "entries": [
            {
                "pairs": [[i + 1, j + 1] for i, j in pairs],
                "arg": arg + 1,
                "value": [format_rational(v) for v in vec],
            }
            for pairs, arg, vec in c.entries()
        ],
    }


# matched pairs ------------------------------------------------------------------------

def parse_matched_pair(data, where="matched pair") -> MatchedPairData:
    _obj(data, ("A", "B", "RA", "RB", "rho", "varrho"), where)
    A = parse_algebra(data["A"], f"{where}.A")
    B = parse_algebra(data["B"], f"{where}.B")
    RA = parse_operator(data["RA"], A.dim, f"{where}.RA")
    RB = parse_operator(data["RB"], B.dim, f"{where}.RB")
    rho = Representation.from_pairs(A, B.dim, _parse_rho(data["rho"], A.dim, B.dim, f"{where}.rho")).rho
    varrho = Representation.from_pairs(B, A.dim, _parse_rho(data["varrho"], B.dim, A.dim, f"{where}.varrho")).rho
    return MatchedPairData(A, B, RA, RB, rho, varrho)


def matched_pair_to_json(mp: MatchedPairData):
    return {
        "A": algebra_to_json(mp.A),
        "B": algebra_to_json(mp.B),
        "RA": operator_to_json(mp.RA),
        "RB": operator_to_json(mp.RB),
        "rho": _rho_to_json(Representation(mp.A, mp.rho)),
        "varrho": _rho_to_json(Representation(mp.B, mp.varrho)),
    }


# deformations ------------------------------------------------------------------------

def parse_deformation(data, A, R, where="deformation") -> FormalDeformation:
    """``pis[i]`` and ``rs[i]`` are the terms of order ``i + 1``."""
    _obj(data, ("order",), where)
    order = _int(data["order"], f"{where}.order")
    pis_raw, rs_raw = data.get("pis", []), data.get("rs", [])
    if not isinstance(pis_raw, list) or not isinstance(rs_raw, list):
        raise ParseError(f"{where}: pis and rs must be lists")
    pis = []
    for t, block in enumerate(pis_raw):
        c = parse_cochain(block, A.dim, A.dim, where=f"{where}.pis[{t}]")
        if c.space.degree != 2:
            raise InputError(f"{where}.pis[{t}] must have degree 2")
        pis.append(cochain_to_trilinear(c))
    rs = [parse_matrix(r, f"{where}.rs[{t}]", (A.dim, A.dim)) for t, r in enumerate(rs_raw)]
    return FormalDeformation(A, R, pis, rs, order)


def deformation_to_json(d: FormalDeformation):
    return {
        "order": d.order,
        "pis": [cochain_to_json(trilinear_to_cochain(p)) for p in d.pis],
        "rs": [matrix_to_json(r) for r in d.rs],
    }


def report_to_json(report):
    return report.to_dict()
