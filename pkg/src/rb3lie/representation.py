"""Representations of 3-Lie algebras and of Rota-Baxter 3-Lie algebras.

A representation stores ``rho`` as a tensor of shape ``(n, n, m, m)``:
``rho[i, j]`` is the ``m x m`` matrix of ``rho(e_i, e_j)`` (column convention)
and the tensor is skew in its first two axes.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import numpy as np

from .algebra import (
    RotaBaxterOperator,
    ThreeLieAlgebra,
    ValidationReport,
    _report_nonzero,
    descendent_algebra,
)
from .errors import InputError, PreconditionError, SkewSymmetryError
from .linalg import Matrix, QTensor, einsum, as_rational


class Representation:
    """A skew bilinear map ``rho: A x A -> gl(V)`` (axioms checked separately)."""

    def __init__(self, algebra: ThreeLieAlgebra, rho: QTensor):
        n = algebra.dim
        if rho.ndim != 4 or rho.shape[:2] != (n, n) or rho.shape[2] != rho.shape[3]:
            raise InputError(f"rho must have shape ({n}, {n}, m, m), got {rho.shape}")
        if not np.array_equal(rho.num, -rho.num.transpose(1, 0, 2, 3)):
            raise SkewSymmetryError("rho is not skew-symmetric in its algebra arguments")
        self.algebra = algebra
        self.rho = rho

    @property
    def vdim(self):
        return self.rho.shape[2]

    @classmethod
    def from_pairs(cls, algebra, vdim, pairs):
        """Build from ``{(i, j): matrix}`` with 0-based ``i != j``; skew-extended."""
        n, m = algebra.dim, int(vdim)
        full = np.empty((n, n, m, m), dtype=object)
        full[...] = Fraction(0)
        filled = {}
        for (i, j), mat in pairs.items():
            i, j = int(i), int(j)
            if not (0 <= i < n and 0 <= j < n):
                raise InputError(f"pair index out of range: {(i + 1, j + 1)}")
            mat = mat if isinstance(mat, Matrix) else Matrix(mat)
            if mat.shape != (m, m):
                raise InputError(f"rho matrix for {(i + 1, j + 1)} has shape {mat.shape}, expected {(m, m)}")
            vals = mat.to_fractions()
            if i == j:
                if any(v for v in vals.flat):
                    raise SkewSymmetryError(f"nonzero rho on repeated pair {(i + 1, j + 1)}")
                continue
            key, sign = ((i, j), 1) if i < j else ((j, i), -1)
            if key in filled and not np.array_equal(filled[key], sign * vals):
                raise SkewSymmetryError(f"inconsistent rho values on {(key[0] + 1, key[1] + 1)}")
            filled[key] = sign * vals
        for (i, j), vals in filled.items():
            full[i, j] = vals
            full[j, i] = -vals
        return cls(algebra, QTensor.from_values(full))

    @classmethod
    def zero(cls, algebra, vdim):
        return cls(algebra, QTensor.zeros((algebra.dim, algebra.dim, vdim, vdim)))

    def matrix(self, i, j):
        return Matrix.from_tensor(self.rho[i, j])

    def pairs(self):
        """Nonzero ``{(i, j): Matrix}`` for ``i < j``."""
        return {
            (i, j): self.matrix(i, j)
            for i, j in combinations(range(self.algebra.dim), 2)
            if not self.rho[i, j].is_zero()
        }

    def act(self, x, y, v):
        """``rho(x, y) v`` on coordinate vectors."""
        xs = [QTensor.from_values(list(t)) for t in (x, y, v)]
        return tuple(einsum("abuv,a,b,v->u", self.rho, *xs).tolist())

    def __eq__(self, other):
        return isinstance(other, Representation) and self.algebra == other.algebra and self.rho == other.rho

    def __repr__(self):
        return f"Representation(n={self.algebra.dim}, m={self.vdim})"


class RBRepresentation:
    """A representation together with ``R_V``; the weight comes from the operator."""

    def __init__(self, base: Representation, RV, operator: RotaBaxterOperator):
        RV = RV if isinstance(RV, Matrix) else Matrix(RV)
        if RV.shape != (base.vdim, base.vdim):
            raise InputError(f"R_V has shape {RV.shape}, expected {(base.vdim, base.vdim)}")
        if operator.dim != base.algebra.dim:
            raise InputError("operator and representation live on different algebras")
        self.base = base
        self.RV = RV
        self.operator = operator

    @property
    def algebra(self):
        return self.base.algebra

    @property
    def rho(self):
        return self.base.rho

    @property
    def vdim(self):
        return self.base.vdim

    @property
    def weight(self):
        return self.operator.weight

    def __eq__(self, other):
        return (
            isinstance(other, RBRepresentation)
            and self.base == other.base
            and self.RV == other.RV
            and self.operator == other.operator
        )

    def __repr__(self):
        return f"RBRepresentation(n={self.algebra.dim}, m={self.vdim}, weight={self.weight})"


def _pair_transform(rho, X=None, Y=None):
    """``out[i, j] = rho(X e_i, Y e_j)``; ``None`` is the identity."""
    out = rho
    if X is not None:
        out = einsum("abuv,ai->ibuv", out, X)
    if Y is not None:
        out = einsum("ibuv,bj->ijuv", out, Y)
    return out


def _right(T, M):
    return einsum("ijuv,vw->ijuw", T, M)


def _left(M, T):
    return einsum("uv,ijvw->ijuw", M, T)


def bracket_rho(algebra, rho):
    """``out[a, b, c, d] = rho([e_a, e_b, e_c], e_d)``."""
    return einsum("abcl,lduv->abcduv", algebra.tensor, rho)


def validate_representation(rep: Representation) -> ValidationReport:
    """Check both representation axioms on all basis 4-tuples."""
    report = ValidationReport("representation axioms")
    rho = rep.rho
    P = einsum("abuv,cdvw->abcduw", rho, rho)
    B = bracket_rho(rep.algebra, rho)
    first = P - P.transpose(2, 3, 0, 1, 4, 5) - (B - B.transpose(0, 1, 3, 2, 4, 5))
    second = B - (P + P.transpose(2, 0, 1, 3, 4, 5) + P.transpose(1, 2, 0, 3, 4, 5))
    flat = lambda t: t.reshape(*t.shape[:4], t.shape[4] * t.shape[5])
    _report_nonzero(report, "commutator axiom", flat(first), lambda t: t[0] < t[1] and t[2] < t[3])
    _report_nonzero(report, "bracket axiom", flat(second), lambda t: t[0] < t[1] < t[2])
    return report


def _insertion_sum(rho, R: RotaBaxterOperator):
    """``rho(Rx, y) + rho(x, Ry) + lambda rho(x, y)`` as a pair tensor."""
    return (
        _pair_transform(rho, R.matrix, None)
        + _pair_transform(rho, None, R.matrix)
        + rho.scale(R.weight)
    )


def validate_rb_representation(rbrep: RBRepresentation, R: RotaBaxterOperator | None = None) -> ValidationReport:
    """Check the compatibility of ``rho``, ``R`` and ``R_V`` on basis pairs ``i < j``."""
    R = rbrep.operator if R is None else R
    if R.dim != rbrep.algebra.dim:
        raise InputError("operator does not match the representation's algebra")
    report = ValidationReport(f"Rota-Baxter representation identity (weight {R.weight})")
    rho, RV = rbrep.rho, rbrep.RV
    rr = _pair_transform(rho, R.matrix, R.matrix)
    S = _insertion_sum(rho, R)
    residual = _right(rr, RV) - _left(RV, rr) - _left(RV, _right(S, RV)) - _left(RV, S).scale(R.weight)
    m = rbrep.vdim
    return _report_nonzero(
        report, "Rota-Baxter representation identity",
        residual.reshape(*residual.shape[:2], m * m), lambda t: t[0] < t[1],
    )


def adjoint_rep(A: ThreeLieAlgebra, R: RotaBaxterOperator) -> RBRepresentation:
    """``ad(x, y) = [x, y, .]`` with ``R_V = R``."""
    rho = A.tensor.transpose(0, 1, 3, 2)
    return RBRepresentation(Representation(A, rho), R.matrix, R)


def dual_rep(rbrep: RBRepresentation) -> RBRepresentation:
    """Dual representation: ``rho* = -rho^T`` and ``R_V* = -lambda I - R_V^T``."""
    rho = -rbrep.rho.transpose(0, 1, 3, 2)
    m = rbrep.vdim
    RV = Matrix.identity(m).scale(-rbrep.weight) - rbrep.RV.T
    return RBRepresentation(Representation(rbrep.algebra, rho), Matrix.from_tensor(RV), rbrep.operator)


def _descendent(rbrep, R, check):
    R = rbrep.operator if R is None else R
    if check:
        rep_ok = validate_representation(rbrep.base)
        rb_ok = validate_rb_representation(rbrep, R)
        if not (rep_ok and rb_ok):
            raise PreconditionError("input is not a representation of the Rota-Baxter 3-Lie algebra")
    AR, _ = descendent_algebra(rbrep.algebra, R, check=check)
    return R, AR


def tilde_rho(rho, RV, R):
    return _pair_transform(rho, R.matrix, R.matrix) - _left(RV, _insertion_sum(rho, R))


def bar_rho(rho, RV, R):
    S = _insertion_sum(rho, R)
    return _pair_transform(rho, R.matrix, R.matrix) + _right(S, RV) + S.scale(R.weight)


def induced_rep_tilde(rbrep: RBRepresentation, R: RotaBaxterOperator | None = None, check=True) -> RBRepresentation:
    """Representation of the descendent algebra with ``rho(Rx,Ry) - R_V(...)``."""
    R, AR = _descendent(rbrep, R, check)
    rho = tilde_rho(rbrep.rho, rbrep.RV, R)
    return RBRepresentation(Representation(AR, rho), rbrep.RV, R)


def induced_rep_bar(rbrep: RBRepresentation, R: RotaBaxterOperator | None = None, check=True) -> RBRepresentation:
    """Representation of the descendent algebra with ``rho(Rx,Ry) + (...)R_V + lambda(...)``."""
    R, AR = _descendent(rbrep, R, check)
    rho = bar_rho(rbrep.rho, rbrep.RV, R)
    return RBRepresentation(Representation(AR, rho), rbrep.RV, R)


def trivial_rb_rep(A: ThreeLieAlgebra, R: RotaBaxterOperator, vdim, RV=None) -> RBRepresentation:
    RV = Matrix.zeros(vdim) if RV is None else RV
    return RBRepresentation(Representation.zero(A, vdim), RV, R)
