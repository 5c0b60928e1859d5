"""``rb3`` command line interface.

Exit codes: 0 when everything validates, 1 when a validator reports
violations, 2 on parse, shape or budget errors.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

import numpy as np

from . import io
from .algebra import (
    RotaBaxterOperator,
    ValidationReport,
    Violation,
    catalog,
    descendent_algebra,
    rb_batch_ok,
    validate_3lie,
    validate_rb,
)
from .cohomology import (
    Cochain,
    CochainSpace,
    RBCochain,
    cohomology_dims,
    is_coboundary,
    is_cocycle,
)
from .deformation import (
    infinitesimal_is_cocycle,
    trivial_deformation_check,
    validate_deformation_orders,
)
from .errors import BudgetExceededError, InputError, PreconditionError, RB3Error
from .linalg import Matrix, format_rational, parse_rational
from .representation import (
    adjoint_rep,
    dual_rep,
    induced_rep_bar,
    induced_rep_tilde,
    validate_rb_representation,
    validate_representation,
)
from .structures import (
    bowtie,
    deformed_bracket_N,
    central_extension,
    double_algebra,
    extension_cocycle_verdict,
    induced_bracket_K,
    induced_rep_K,
    matched_pair_verdicts,
    validate_manin_triple,
    validate_matched_pair,
    validate_nijenhuis,
    validate_o_operator,
)

DEFAULT_BUDGET = 10**7
CHUNK = 1 << 15


class _Done(Exception):
    """Carries an exit code out of a subcommand."""

    def __init__(self, code):
        self.code = code


# loading -----------------------------------------------------------------------

def _load_algebra(args):
    if args.algebra and args.catalog:
        raise InputError("give either --algebra or --catalog, not both")
    if args.algebra:
        return io.parse_algebra(io.load_json(args.algebra)), None
    if args.catalog:
        return catalog(args.catalog)
    raise InputError("an algebra is required (--algebra FILE or --catalog NAME)")


def _load_operator(args, A, default, required=True):
    if args.rb:
        R = io.parse_operator(io.load_json(args.rb), A.dim)
    else:
        R = default
    if R is not None and args.weight is not None and R.weight != parse_rational(args.weight):
        raise InputError("--weight disagrees with the operator's weight")
    if R is None and required:
        raise InputError("a Rota-Baxter operator is required (--rb FILE)")
    return R


def _load_rep(args, A, R, adjoint_default=True):
    if args.rep:
        return io.parse_representation(io.load_json(args.rep), A, R)
    if adjoint_default:
        return adjoint_rep(A, R)
    raise InputError("a representation is required (--rep FILE)")


def _setup(args, need_rep=False):
    A, default = _load_algebra(args)
    R = _load_operator(args, A, default)
    reports = [validate_3lie(A), validate_rb(A, R)]
    rep = None
    if need_rep:
        rep = _load_rep(args, A, R)
        reports.append(validate_rb_representation(rep))
    return A, R, rep, reports


def _matrix_file(path, flag):
    if not path:
        raise InputError(f"{flag} FILE is required")
    return io.parse_matrix(io.load_json(path), flag.lstrip("-"))


# output ------------------------------------------------------------------------------

def _emit(args, payload, reports, lines=()):
    """Write the payload, print the result and return the exit code."""
    ok = all(r.ok for r in reports)
    payload = dict(payload)
    payload["report"] = {"valid": ok, "checks": [r.to_dict() for r in reports]}
    if args.out:
        io.dump_json(payload, args.out)
    if args.format == "json":
        sys.stdout.write(io.dump_json(payload))
    else:
        for r in reports:
            print(r.summary())
        for line in lines:
            print(line)
        if args.out:
            print(f"wrote {args.out}")
    return 0 if ok else 1


def _stop_if_invalid(args, reports):
    if not all(r.ok for r in reports):
        raise _Done(_emit(args, {}, reports))


# subcommands -------------------------------------------------------------------------

def cmd_verify(args):
    A, default = _load_algebra(args)
    reports = [validate_3lie(A)]
    payload = {"algebra": io.algebra_to_json(A)}
    R = _load_operator(args, A, default, required=False)
    if R is not None:
        reports.append(validate_rb(A, R))
        payload["operator"] = io.operator_to_json(R)
    if args.rep:
        if R is None:
            base = io.parse_representation(io.load_json(args.rep), A, RotaBaxterOperator(Matrix.zeros(A.dim), 0)).base
            reports.append(validate_representation(base))
        else:
            rep = io.parse_representation(io.load_json(args.rep), A, R)
            reports.append(validate_rb_representation(rep))
            payload["representation"] = io.representation_to_json(rep)
    return _emit(args, payload, reports)


def cmd_derived(args):
    A, R, _, reports = _setup(args)
    _stop_if_invalid(args, reports)
    AR, _ = descendent_algebra(A, R, check=False)
    reports += [validate_3lie(AR), validate_rb(AR, R)]
    return _emit(args, {"algebra": io.algebra_to_json(AR), "operator": io.operator_to_json(R)}, reports)


def cmd_dual_rep(args):
    A, R, rep, reports = _setup(args, need_rep=True)
    _stop_if_invalid(args, reports)
    dual = dual_rep(rep)
    reports.append(validate_rb_representation(dual))
    return _emit(args, {"representation": io.representation_to_json(dual)}, reports)


def _induced(args, build):
    A, R, rep, reports = _setup(args, need_rep=True)
    _stop_if_invalid(args, reports)
    new = build(rep, R, check=False)
    reports += [
        validate_representation(new.base),
        validate_rb_representation(new),
    ]
    payload = {
        "algebra": io.algebra_to_json(new.algebra),
        "operator": io.operator_to_json(R),
        "representation": io.representation_to_json(new),
    }
    return _emit(args, payload, reports)


def cmd_tilde_rep(args):
    return _induced(args, induced_rep_tilde)


def cmd_bar_rep(args):
    return _induced(args, induced_rep_bar)


def _format_table(tables):
    lines = []
    for name, rows in tables.items():
        lines.append(f"{name} complex")
        lines.append(f"  {'p':>2} {'C':>8} {'Z':>8} {'B':>8} {'H':>8}")
        for row in rows:
            d = row.to_dict()
            lines.append(f"  {d['p']:>2} {d['C']:>8} {d['Z']:>8} {d['B']:>8} {d['H']:>8}")
    return lines


def cmd_cohomology(args):
    A, R, rep, reports = _setup(args, need_rep=True)
    _stop_if_invalid(args, reports)
    tables = cohomology_dims(A, R, rep, args.max_degree)
    payload = {"cohomology": {k: [r.to_dict() for r in rows] for k, rows in tables.items()}}
    return _emit(args, payload, reports, _format_table(tables))


def cmd_cocycle(args):
    A, R, rep, reports = _setup(args, need_rep=True)
    _stop_if_invalid(args, reports)
    if not args.cochain:
        raise InputError("--cochain FILE is required")
    n, m = A.dim, rep.vdim
    if args.complex == "rb":
        f = io.parse_cochain(io.load_json(args.cochain), n, m)
        if f.space.degree == 1:
            if args.g:
                raise InputError("degree-1 Rota-Baxter cochains have no second component")
            c = RBCochain(f, None)
        else:
            if args.g:
                g = io.parse_cochain(io.load_json(args.g), n, m, "descendent", where="g")
            else:
                g = Cochain.zero(CochainSpace(n, m, f.space.degree - 1, "descendent"))
            c = RBCochain(f, g)
    else:
        if args.g:
            raise InputError("--g only applies to --complex rb")
        c = io.parse_cochain(io.load_json(args.cochain), n, m, args.complex)
    closed, image = is_cocycle(c, rep, R)
    exact, witness = is_coboundary(c, rep, R) if closed else (False, None)
    report = ValidationReport(f"{args.complex} cocycle")
    if not closed:
        report.violations.append(Violation("coboundary is nonzero", (), f"{sum(1 for x in image.tolist() if x)} nonzero coordinate(s)"))
    payload = {
        "cocycle": closed,
        "coboundary": exact,
        "image": [format_rational(x) for x in image.tolist()],
    }
    if witness:
        payload["witness"] = [format_rational(x) for x in witness]
    lines = [f"cocycle: {'yes' if closed else 'no'}", f"coboundary: {'yes' if exact else 'no'}"]
    return _emit(args, payload, reports + [report], lines)


def cmd_extend(args):
    A, R, _, reports = _setup(args)
    _stop_if_invalid(args, reports)
    if not args.rep:
        raise InputError("--rep FILE describing (V, R_V) with zero action is required")
    rep = io.parse_representation(io.load_json(args.rep), A, R)
    if not rep.rho.is_zero():
        raise PreconditionError("central extensions need the zero action on V")
    n, m = A.dim, rep.vdim
    if args.psi:
        psi = io.parse_cochain(io.load_json(args.psi), n, m, where="psi")
    else:
        psi = Cochain.zero(CochainSpace(n, m, 2))
    if args.chi:
        chi = io.parse_cochain(io.load_json(args.chi), n, m, where="chi")
    else:
        chi = Cochain.zero(CochainSpace(n, m, 1))
    if psi.space.degree != 2 or chi.space.degree != 1:
        raise InputError("psi must have degree 2 and chi degree 1")
    ext = central_extension(A, R, rep.RV, psi, chi)
    reports += [validate_3lie(ext.algebra), validate_rb(ext.algebra, ext.operator)]
    cocycle = extension_cocycle_verdict(A, R, rep.RV, psi, chi)
    payload = {
        "algebra": io.algebra_to_json(ext.algebra),
        "operator": io.operator_to_json(ext.operator),
        "base_dim": n,
        "vdim": m,
        "cocycle": cocycle,
    }
    return _emit(args, payload, reports, [f"(psi, chi) is a 2-cocycle: {'yes' if cocycle else 'no'}"])


def cmd_matched_pair(args):
    if not args.pair:
        raise InputError("--pair FILE is required")
    mp = io.parse_matched_pair(io.load_json(args.pair))
    report = validate_matched_pair(mp)
    D, op = bowtie(mp)
    _, bowtie_ok = matched_pair_verdicts(mp)
    payload = {
        "algebra": io.algebra_to_json(D),
        "operator": io.operator_to_json(op),
        "bowtie_rota_baxter": bowtie_ok,
    }
    return _emit(args, payload, [report], [f"bowtie is a Rota-Baxter 3-Lie algebra: {'yes' if bowtie_ok else 'no'}"])


def cmd_manin(args):
    A, R, _, reports = _setup(args)
    _stop_if_invalid(args, reports)
    Astar = io.parse_algebra(io.load_json(args.dual), "dual") if args.dual else None
    if Astar is not None and Astar.dim != A.dim:
        raise InputError("the dual algebra must have the same dimension")
    D, op, form, mp = double_algebra(A, R, Astar)
    mp_report = validate_matched_pair(mp)
    manin = validate_manin_triple(D, op, A.dim, form)
    payload = {
        "algebra": io.algebra_to_json(D),
        "operator": io.operator_to_json(op),
        "form": io.matrix_to_json(form),
        "matched_pair": io.matched_pair_to_json(mp),
    }
    return _emit(args, payload, reports + [mp_report, manin])


def cmd_nijenhuis(args):
    A, R, _, reports = _setup(args)
    _stop_if_invalid(args, reports)
    N = _matrix_file(args.n_matrix, "--n-matrix")
    report = validate_nijenhuis(A, R, N)
    payload = {"matrix": io.matrix_to_json(N)}
    if report.ok:
        payload["algebra"] = io.algebra_to_json(deformed_bracket_N(A, N))
    return _emit(args, payload, reports + [report])


def cmd_o_operator(args):
    A, R, rep, reports = _setup(args, need_rep=True)
    _stop_if_invalid(args, reports)
    K = _matrix_file(args.k_matrix, "--k-matrix")
    report = validate_o_operator(K, rep, R)
    reports.append(report)
    payload = {"matrix": io.matrix_to_json(K)}
    if report.ok:
        VK, RV = induced_bracket_K(K, rep)
        varrho = induced_rep_K(K, rep, R)
        reports += [validate_3lie(VK), validate_rb(VK, RV), validate_rb_representation(varrho)]
        payload.update(
            algebra=io.algebra_to_json(VK),
            operator=io.operator_to_json(RV),
            representation=io.representation_to_json(varrho),
        )
    return _emit(args, payload, reports)


def cmd_deform(args):
    A, R, _, reports = _setup(args)
    _stop_if_invalid(args, reports)
    if not args.deformation:
        raise InputError("--deformation FILE is required")
    d = io.parse_deformation(io.load_json(args.deformation), A, R)
    failures = validate_deformation_orders(d)
    report = ValidationReport("deformation")
    for eq, k in failures:
        report.violations.append(Violation(f"{eq} equation at order {k}", ()))
    cocycle = infinitesimal_is_cocycle(d)
    payload = {"deformation": io.deformation_to_json(d), "infinitesimal_cocycle": cocycle}
    lines = [f"valid to order {d.order}" if report.ok else "not a deformation",
             f"infinitesimal is a 2-cocycle: {'yes' if cocycle else 'no'}"]
    reports.append(report)
    if args.trivializer:
        N = _matrix_file(args.trivializer, "--trivializer")
        trivial = trivial_deformation_check(d, N)
        payload["trivial"] = trivial
        lines.append(f"trivialized by I + tN: {'yes' if trivial else 'no'}")
    return _emit(args, payload, reports, lines)


# search ---------------------------------------------------------------------------------

def parse_entries(text):
    if text is None:
        raise InputError("--entries is required")
    vals = sorted({parse_rational(s.strip()) for s in text.split(",") if s.strip()})
    if not vals:
        raise InputError("--entries must list at least one rational")
    return vals


def parse_mask(data, n):
    if isinstance(data, dict) and "mask" in data:
        data = data["mask"]
    if not isinstance(data, list) or len(data) != n or any(not isinstance(r, list) or len(r) != n for r in data):
        raise InputError(f"mask must be a {n}x{n} array of 0/1")
    if any(x not in (0, 1) or isinstance(x, bool) for r in data for x in r):
        raise InputError("mask entries must be 0 (forced zero) or 1 (free)")
    return np.array(data, dtype=bool)


def budget_from_env():
    raw = os.environ.get("RB3_BUDGET")
    if raw is None or raw.strip() == "":
        return DEFAULT_BUDGET
    try:
        value = int(raw)
    except ValueError:
        raise InputError(f"RB3_BUDGET must be an integer, got {raw!r}") from None
    if value < 1:
        raise InputError("RB3_BUDGET must be positive")
    return value


def search_operators(A, weight, entries, mask=None, budget=None):
    """All matrices with entries from ``entries`` (zero outside ``mask``) that are Rota-Baxter of ``weight``.

    Results are sorted lexicographically by their row-major entries.
    """
    n = A.dim
    budget = budget_from_env() if budget is None else budget
    entries = sorted(set(Fraction(e) for e in entries))
    if not entries:
        raise InputError("entry set must be nonempty")
    mask = np.ones((n, n), dtype=bool) if mask is None else np.asarray(mask, dtype=bool)
    if mask.shape != (n, n):
        raise InputError(f"mask must be {n}x{n}")
    free = np.flatnonzero(mask.ravel())
    k = len(entries)
    required = k ** len(free)
    if required > budget:
        raise BudgetExceededError(required, budget)
    den = int(np.lcm.reduce([e.denominator for e in entries]))
    ints = np.array([int(e * den) for e in entries], dtype=np.int64)
    found = []
    for start in range(0, required, CHUNK):
        idx = np.arange(start, min(start + CHUNK, required), dtype=np.int64)
        digits = np.empty((len(idx), len(free)), dtype=np.int64)
        rest = idx.copy()
        for pos in range(len(free) - 1, -1, -1):
            digits[:, pos] = rest % k
            rest //= k
        mats = np.zeros((len(idx), n * n), dtype=np.int64)
        mats[:, free] = ints[digits]
        mats = mats.reshape(-1, n, n)
        ok = rb_batch_ok(A, mats, den, weight)
        for m in mats[ok]:
            found.append(tuple(Fraction(int(x), den) for x in m.ravel()))
    found.sort()
    return [Matrix([list(f[r * n:(r + 1) * n]) for r in range(n)]) for f in found]


def cmd_search(args):
    A, _ = _load_algebra(args)
    if args.weight is None:
        raise InputError("--weight is required")
    weight = parse_rational(args.weight)
    entries = parse_entries(args.entries)
    mask = parse_mask(io.load_json(args.mask), A.dim) if args.mask else None
    reports = [validate_3lie(A)]
    _stop_if_invalid(args, reports)
    found = search_operators(A, weight, entries, mask)
    payload = {
        "weight": format_rational(weight),
        "count": len(found),
        "operators": [io.operator_to_json(RotaBaxterOperator(M, weight)) for M in found],
    }
    lines = [f"{len(found)} Rota-Baxter operator(s) of weight {format_rational(weight)}"]
    for M in found:
        lines.append("  " + "; ".join(" ".join(r) for r in M.to_strings()))
    return _emit(args, payload, reports, lines)


# parser --------------------------------------------------------------------------------

COMMANDS = {
    "verify": (cmd_verify, "validate an algebra and, if given, an operator and representation"),
    "derived": (cmd_derived, "descendent algebra A_R"),
    "dual-rep": (cmd_dual_rep, "dual Rota-Baxter representation"),
    "tilde-rep": (cmd_tilde_rep, "induced representation of A_R (tilde)"),
    "bar-rep": (cmd_bar_rep, "induced representation of A_R (bar)"),
    "cohomology": (cmd_cohomology, "dimension table of C, Z, B, H"),
    "cocycle": (cmd_cocycle, "test whether a cochain is a cocycle or coboundary"),
    "extend": (cmd_extend, "central extension by (psi, chi)"),
    "matched-pair": (cmd_matched_pair, "validate a matched pair and build the bowtie algebra"),
    "manin": (cmd_manin, "double A + A* and its Manin triple checks"),
    "nijenhuis": (cmd_nijenhuis, "validate a Nijenhuis operator and emit the deformed bracket"),
    "o-operator": (cmd_o_operator, "validate an O-operator and emit the induced structures"),
    "deform": (cmd_deform, "validate a truncated formal deformation"),
    "search": (cmd_search, "exhaustive Rota-Baxter operator search"),
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--algebra", metavar="FILE")
    common.add_argument("--catalog", metavar="NAME", help="built-in example, e.g. A3, A3-rbm1(1,2,3,4), N4")
    common.add_argument("--rb", metavar="FILE", help="Rota-Baxter operator file")
    common.add_argument("--rep", metavar="FILE", help="representation file (default: adjoint)")
    common.add_argument("--max-degree", type=int, default=3, metavar="INT")
    common.add_argument("--weight", metavar="RAT")
    common.add_argument("--entries", metavar="CSV")
    common.add_argument("--mask", metavar="FILE")
    common.add_argument("--out", metavar="FILE")
    common.add_argument("--format", choices=("text", "json"), default="text")

    parser = argparse.ArgumentParser(prog="rb3", description="Rota-Baxter 3-Lie algebra toolkit")
    sub = parser.add_subparsers(dest="command", required=True)
    parsers = {}
    for name, (_, help_text) in COMMANDS.items():
        parsers[name] = sub.add_parser(name, parents=[common], help=help_text)
    parsers["cocycle"].add_argument("--cochain", metavar="FILE")
    parsers["cocycle"].add_argument("--g", metavar="FILE", help="second component for --complex rb")
    parsers["cocycle"].add_argument("--complex", choices=("plain", "descendent", "rb"), default="plain")
    parsers["extend"].add_argument("--psi", metavar="FILE")
    parsers["extend"].add_argument("--chi", metavar="FILE")
    parsers["matched-pair"].add_argument("--pair", metavar="FILE")
    parsers["manin"].add_argument("--dual", metavar="FILE", help="algebra structure on A* (default abelian)")
    parsers["nijenhuis"].add_argument("--n-matrix", metavar="FILE")
    parsers["o-operator"].add_argument("--k-matrix", metavar="FILE")
    parsers["deform"].add_argument("--deformation", metavar="FILE")
    parsers["deform"].add_argument("--trivializer", metavar="FILE")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.max_degree < 1:
        parser.error("--max-degree must be at least 1")
    func = COMMANDS[args.command][0]
    try:
        return func(args)
    except _Done as done:
        return done.code
    except BudgetExceededError as exc:
        print(f"error: {exc}; raise RB3_BUDGET to at least {exc.required}", file=sys.stderr)
        return 2
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (InputError, RB3Error) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
