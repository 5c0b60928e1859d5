"""3-Lie algebras, Rota-Baxter operators of weight lambda, and the descendent bracket.

Structure constants are held as a fully skew tensor ``C`` of shape
``(n, n, n, n)`` with ``[e_i, e_j, e_k] = sum_l C[i, j, k, l] e_l``.  It is
built from canonical ``i < j < k`` entries only, so it cannot be
inconsistent.  All indices are 0-based in the API and 1-based in reports and
files.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from .errors import InputError, PreconditionError, SkewSymmetryError
from .linalg import Matrix, QTensor, as_rational, einsum

_PERM_SIGNS = {
    (0, 1, 2): 1, (1, 2, 0): 1, (2, 0, 1): 1,
    (1, 0, 2): -1, (0, 2, 1): -1, (2, 1, 0): -1,
}


@dataclass(frozen=True)
class Violation:
    check: str
    indices: tuple  # 1-based basis indices
    detail: str = ""

    def __str__(self):
        idx = ",".join(str(i) for i in self.indices)
        where = f" at ({idx})" if self.indices else ""
        return f"{self.check} fails{where}" + (f": {self.detail}" if self.detail else "")


@dataclass
class ValidationReport:
    """Outcome of a validator: empty ``violations`` means the identity holds."""

    subject: str
    violations: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations

    def __bool__(self):
        return self.ok

    def extend(self, other):
        self.violations.extend(other.violations)
        return self

    def summary(self, limit=10):
        if self.ok:
            return f"{self.subject}: valid"
        lines = [f"{self.subject}: {len(self.violations)} violation(s)"]
        lines += [f"  {v}" for v in self.violations[:limit]]
        if len(self.violations) > limit:
            lines.append(f"  ... {len(self.violations) - limit} more")
        return "\n".join(lines)

    def to_dict(self):
        return {
            "subject": self.subject,
            "valid": self.ok,
            "violations": [
                {"check": v.check, "indices": list(v.indices), "detail": v.detail}
                for v in self.violations
            ],
        }


def _report_nonzero(report, check, residual, keep):
    """Append a violation for every nonzero index tuple of ``residual`` accepted by ``keep``."""
    if residual.is_zero():
        return report
    axes = residual.ndim - 1
    nz = np.nonzero(residual.num.reshape(residual.shape).any(axis=-1))
    seen = set()
    for idx in zip(*(a.tolist() for a in nz)):
        if not keep(idx) or idx in seen:
            continue
        seen.add(idx)
        report.violations.append(Violation(check, tuple(i + 1 for i in idx[:axes])))
    return report


class ThreeLieAlgebra:
    """A finite-dimensional algebra with a totally skew trilinear bracket.

    Construction only enforces skew symmetry; the fundamental identity is
    checked by :func:`validate_3lie` so that invalid tables can be diagnosed.
    """

    def __init__(self, dim, tensor: QTensor):
        dim = int(dim)
        if dim < 0:
            raise InputError("dimension must be nonnegative")
        if tensor.shape != (dim,) * 4:
            raise InputError(f"structure tensor must have shape {(dim,) * 4}, got {tensor.shape}")
        num = tensor.num
        for perm, sign in _PERM_SIGNS.items():
            if not np.array_equal(num.transpose(*perm, 3), num if sign > 0 else -num):
                raise SkewSymmetryError("structure constants are not totally skew-symmetric")
        self.dim = dim
        self.tensor = tensor

    @classmethod
    def from_brackets(cls, dim, brackets):
        """Build from ``{(i, j, k): vector}`` with 0-based indices.

        Triples may be given in any order; each entry is sign-extended to all
        permutations.  Conflicting entries, or nonzero values on a repeated
        index, raise :class:`SkewSymmetryError`.
        """
        dim = int(dim)
        canon = {}
        for key, vec in brackets.items():
            i, j, k = (int(t) for t in key)
            if not all(0 <= t < dim for t in (i, j, k)):
                raise InputError(f"bracket index out of range: {(i + 1, j + 1, k + 1)}")
            vec = _coerce_vector(vec, dim)
            if len({i, j, k}) < 3:
                if any(vec):
                    raise SkewSymmetryError(f"nonzero bracket on repeated index {(i + 1, j + 1, k + 1)}")
                continue
            order = sorted(range(3), key=lambda t: (i, j, k)[t])
            sign = _PERM_SIGNS[tuple(order)]
            sorted_key = tuple(sorted((i, j, k)))
            signed = tuple(sign * v for v in vec)
            if sorted_key in canon and canon[sorted_key] != signed:
                raise SkewSymmetryError(
                    f"inconsistent values for the bracket on {tuple(t + 1 for t in sorted_key)}"
                )
            canon[sorted_key] = signed
        full = np.zeros((dim,) * 4, dtype=object)
        full[...] = Fraction(0)
        for (i, j, k), vec in canon.items():
            for perm, sign in _PERM_SIGNS.items():
                a, b, c = ((i, j, k)[p] for p in perm)
                full[a, b, c] = [sign * v for v in vec]
        return cls(dim, QTensor.from_values(full))

    @classmethod
    def abelian(cls, dim):
        return cls(dim, QTensor.zeros((dim,) * 4))

    def brackets(self):
        """Canonical nonzero brackets ``{(i, j, k): tuple}`` with ``i < j < k``."""
        out = {}
        for i, j, k in combinations(range(self.dim), 3):
            vec = self.tensor[i, j, k].to_fractions().tolist()
            if any(vec):
                out[(i, j, k)] = tuple(vec)
        return out

    def bracket(self, x, y, z):
        return bracket_eval(self, x, y, z)

    def basis(self, i):
        return tuple(Fraction(int(t == i)) for t in range(self.dim))

    def __eq__(self, other):
        return isinstance(other, ThreeLieAlgebra) and self.dim == other.dim and self.tensor == other.tensor

    def __hash__(self):
        return hash((self.dim, self.tensor))

    def __repr__(self):
        return f"ThreeLieAlgebra(dim={self.dim}, nonzero={len(self.brackets())})"


@dataclass(frozen=True, eq=True)
class RotaBaxterOperator:
    """Linear operator ``R`` with weight ``lambda``; column ``c`` is ``R(e_c)``."""

    matrix: Matrix
    weight: Fraction

    def __post_init__(self):
        if not isinstance(self.matrix, Matrix):
            object.__setattr__(self, "matrix", Matrix(self.matrix))
        object.__setattr__(self, "weight", as_rational(self.weight))
        if self.matrix.rows != self.matrix.cols:
            raise InputError("operator matrix must be square")

    @property
    def dim(self):
        return self.matrix.rows

    def __call__(self, x):
        return self.matrix @ x


def _coerce_vector(vec, dim):
    vec = tuple(as_rational(v) for v in vec)
    if len(vec) != dim:
        raise InputError(f"vector of length {len(vec)} in dimension {dim}")
    return vec


def _vec_tensor(x, dim):
    return QTensor.from_values(list(_coerce_vector(x, dim)))


def bracket_eval(A: ThreeLieAlgebra, x, y, z):
    """Evaluate ``[x, y, z]`` on coordinate vectors; returns a tuple of Fractions."""
    xs = [_vec_tensor(v, A.dim) for v in (x, y, z)]
    return tuple(einsum("abcl,a,b,c->l", A.tensor, *xs).tolist())


def transformed(C: QTensor, X=None, Y=None, Z=None):
    """Tensor ``T[i,j,k,l] = [X e_i, Y e_j, Z e_k]_l``; ``None`` means identity."""
    out = C
    if X is not None:
        out = einsum("abcl,ai->ibcl", out, X)
    if Y is not None:
        out = einsum("ibcl,bj->ijcl", out, Y)
    if Z is not None:
        out = einsum("ijcl,ck->ijkl", out, Z)
    return out


def apply_last(M: QTensor, T: QTensor):
    """Apply the linear map ``M`` to the value index (last axis) of ``T``."""
    idx = "abcdefgh"[: T.ndim - 1]
    return einsum(f"lm,{idx}m->{idx}l", M, T)


def descendent_tensor(C: QTensor, R: Matrix, weight) -> QTensor:
    """Structure tensor of the descendent bracket ``[x,y,z]_R``."""
    lam = as_rational(weight)
    two = transformed(C, R, R, None) + transformed(C, R, None, R) + transformed(C, None, R, R)
    one = transformed(C, R, None, None) + transformed(C, None, R, None) + transformed(C, None, None, R)
    return two + one.scale(lam) + C.scale(lam * lam)


def validate_3lie(A: ThreeLieAlgebra) -> ValidationReport:
    """Check the fundamental identity on every basis 5-tuple.

    Both sides are skew in (x1, x2) and in (y1, y2, y3), so violations are
    reported for ``a < b`` and ``c < d < e`` only.
    """
    report = ValidationReport("fundamental identity")
    C = A.tensor
    if A.dim < 3:
        return report
    lhs = einsum("cdem,abml->abcdel", C, C)
    rhs = (
        einsum("abcm,mdel->abcdel", C, C)
        + einsum("abdm,cmel->abcdel", C, C)
        + einsum("abem,cdml->abcdel", C, C)
    )
    return _report_nonzero(
        report, "fundamental identity", lhs - rhs,
        lambda t: t[0] < t[1] and t[2] < t[3] < t[4],
    )


def rb_residual(C: QTensor, R: RotaBaxterOperator) -> QTensor:
    lhs = transformed(C, R.matrix, R.matrix, R.matrix)
    rhs = apply_last(R.matrix, descendent_tensor(C, R.matrix, R.weight))
    return lhs - rhs


def validate_rb(A: ThreeLieAlgebra, R: RotaBaxterOperator) -> ValidationReport:
    """Check the weighted Rota-Baxter identity on basis triples ``i < j < k``.

    Both sides are trilinear and totally skew, so basis triples with
    distinct increasing indices suffice.
    """
    if R.dim != A.dim:
        raise InputError(f"operator of size {R.dim} on an algebra of dimension {A.dim}")
    report = ValidationReport(f"Rota-Baxter identity (weight {R.weight})")
    return _report_nonzero(
        report, "Rota-Baxter identity", rb_residual(A.tensor, R),
        lambda t: t[0] < t[1] < t[2],
    )


def rb_batch_ok(A: ThreeLieAlgebra, mats, den, weight):
    """Vectorized Rota-Baxter test for a batch of operators ``mats / den``.

    ``mats`` is an integer array of shape ``(B, n, n)``.  Returns a boolean
    array of length ``B``.  The identity is scaled by ``q^2 den^3`` (weight
    ``p/q``) so everything stays integral.
    """
    mats = np.asarray(mats)
    lam = as_rational(weight)
    p, q, D = lam.numerator, lam.denominator, int(den)
    C = A.tensor.num
    n = A.dim
    big = int(np.abs(mats).max()) if mats.size else 0
    cmax = int(np.abs(C).max()) if C.size else 0
    bound = 16 * cmax * n ** 4 * max(big, 1) ** 4 * max(abs(p), q, 1) ** 2 * D ** 3
    dtype = np.int64 if bound < 2**62 else object
    X = mats.astype(dtype)
    Cx = C.astype(dtype)
    eye = np.broadcast_to(np.eye(n, dtype=dtype), X.shape)

    def T(a, b, c):
        return np.einsum("abcl,Bai,Bbj,Bck->Bijkl", Cx, a, b, c, optimize=True)

    def Rapply(t):
        return np.einsum("Blm,Bijkm->Bijkl", X, t, optimize=True)

    lhs = T(X, X, X)
    two = T(X, X, eye) + T(X, eye, X) + T(eye, X, X)
    one = T(X, eye, eye) + T(eye, X, eye) + T(eye, eye, X)
    zero = np.broadcast_to(Cx, (len(X),) + Cx.shape)
    res = q * q * (lhs - Rapply(two)) - p * q * D * Rapply(one) - p * p * D * D * Rapply(zero)
    return ~res.reshape(len(X), -1).astype(bool).any(axis=1)


def descendent_algebra(A: ThreeLieAlgebra, R: RotaBaxterOperator, check=True):
    """Return ``(A_R, R)`` where ``A_R`` carries the descendent bracket."""
    if check and not validate_rb(A, R):
        raise PreconditionError("operator is not a Rota-Baxter operator on this algebra")
    return ThreeLieAlgebra(A.dim, descendent_tensor(A.tensor, R.matrix, R.weight)), R


# catalog -----------------------------------------------------------------

def a3():
    """The 3-dimensional algebra with single nonzero bracket [e1,e2,e3] = e1."""
    return ThreeLieAlgebra.from_brackets(3, {(0, 1, 2): (1, 0, 0)})


def a3_rb_family(diagonal, weight, a, b, c, d):
    p, q, r = diagonal
    m = Matrix([[p, a, b], [0, q, c], [0, d, r]])
    return RotaBaxterOperator(m, as_rational(weight))


def heisenberg4():
    """4-dimensional algebra with [e1,e2,e3] = e4 and all other brackets zero."""
    return ThreeLieAlgebra.from_brackets(4, {(0, 1, 2): (0, 0, 0, 1)})


N4_OPERATOR = [[1, 1, 0, 0], [0, 2, 1, 0], [0, 0, 3, 0], [1, 0, 2, 1]]

# For R = [[p,a,b],[0,q,c],[0,d,r]] on A3 the identity reduces to
# p(lambda+p)(lambda+q+r) = 0 on (e1,e2,e3), so the diag(4,1,3) family is
# Rota-Baxter of weight -4 (and not of weight -2).
RBM2_WEIGHT = Fraction(-4)

_CATALOG_RE = re.compile(r"^\s*([A-Za-z0-9_-]+?)\s*(?:\((.*)\))?\s*$")


def catalog_names():
    return ["A3", "A3-rbm1(a,b,c,d)", "A3-rbm2(a,b,c,d)", "abelian(n)", "N4"]


def catalog(name: str):
    """Look up a named example; returns ``(algebra, operator or None)``.

    ``A3-rbm1(a,b,c,d)`` is the weight -1 family on A3 with unit diagonal,
    ``A3-rbm2(a,b,c,d)`` the diag(4,1,3)-shaped family, ``abelian(n)`` the
    zero bracket in dimension n, and ``N4`` the 4-dimensional algebra with
    [e1,e2,e3] = e4 carrying a weight -1 operator.
    """
    m = _CATALOG_RE.match(name or "")
    if m is None:
        raise InputError(f"unknown catalog entry {name!r}")
    base, args = m.group(1), m.group(2)
    params = [] if args is None or not args.strip() else [s.strip() for s in args.split(",")]
    if base == "A3" and not params:
        return a3(), None
    if base in ("A3-rbm1", "A3-rbm2"):
        if len(params) != 4:
            raise InputError(f"{base} takes four rational parameters")
        vals = [as_rational(p) for p in params]
        if base == "A3-rbm1":
            return a3(), a3_rb_family((1, 1, 1), -1, *vals)
        return a3(), a3_rb_family((4, 1, 3), RBM2_WEIGHT, *vals)
    if base == "abelian" and len(params) == 1:
        try:
            n = int(params[0])
        except ValueError:
            raise InputError(f"abelian(n) needs an integer, got {params[0]!r}") from None
        if n < 0:
            raise InputError("dimension must be nonnegative")
        return ThreeLieAlgebra.abelian(n), None
    if base == "N4" and not params:
        return heisenberg4(), RotaBaxterOperator(Matrix(N4_OPERATOR), Fraction(-1))
    raise InputError(f"unknown catalog entry {name!r}; known: {', '.join(catalog_names())}")


def catalog_instances():
    """Concrete Rota-Baxter pairs used for whole-catalog checks."""
    out = []
    for name in ("A3-rbm1(0,0,0,0)", "A3-rbm1(1,2,3,4)", "A3-rbm1(0,0,0,1)",
                 "A3-rbm2(0,0,0,0)", "A3-rbm2(1,-2,1/2,3)", "N4"):
        A, R = catalog(name)
        out.append((name, A, R))
    for n, lam in ((3, 0), (4, -1)):
        A, _ = catalog(f"abelian({n})")
        out.append((f"abelian({n})", A, RotaBaxterOperator(Matrix.zeros(n), lam)))
    return out
