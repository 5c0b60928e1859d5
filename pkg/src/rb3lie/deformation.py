"""Truncated one-parameter deformations of a Rota-Baxter 3-Lie algebra.

A deformation of order ``N`` is ``pi_t = sum_{i<=N} t^i pi_i`` and
``R_t = sum_{i<=N} t^i R_i`` with ``pi_0`` the original bracket and
``R_0`` the original operator.  Conditions are compared coefficient by
coefficient in ``t``; terms beyond the truncation are taken to be zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product

import numpy as np

from .algebra import (
    RotaBaxterOperator,
    ThreeLieAlgebra,
    apply_last,
    transformed,
)
from .cohomology import Cochain, CochainSpace, RBCochain, coboundary_RB, pair_basis
from .errors import InputError, SkewSymmetryError
from .linalg import Matrix, QTensor, einsum
from .representation import adjoint_rep

_PERMS = ((0, 1, 2, 3, 1), (1, 0, 2, 3, -1), (0, 2, 1, 3, -1), (2, 1, 0, 3, -1), (1, 2, 0, 3, 1), (2, 0, 1, 3, 1))


def _check_skew(t: QTensor, label):
    for *perm, sign in _PERMS:
        other = t.num.transpose(*perm)
        if not np.array_equal(other, t.num if sign > 0 else -t.num):
            raise SkewSymmetryError(f"{label} is not totally skew-symmetric")


@dataclass
class FormalDeformation:
    """Base algebra and operator plus the higher terms ``pis[i-1] = pi_i`` and ``rs[i-1] = R_i``."""

    algebra: ThreeLieAlgebra
    operator: RotaBaxterOperator
    pis: list = field(default_factory=list)
    rs: list = field(default_factory=list)
    order: int | None = None

    def __post_init__(self):
        n = self.algebra.dim
        if self.order is None:
            self.order = max(len(self.pis), len(self.rs), 1)
        if self.order < 1:
            raise InputError("deformation order must be at least 1")
        if len(self.pis) > self.order or len(self.rs) > self.order:
            raise InputError("more deformation terms than the stated order")
        zero_pi, zero_r = QTensor.zeros((n,) * 4), Matrix.zeros(n)
        self.pis = list(self.pis) + [zero_pi] * (self.order - len(self.pis))
        self.rs = [r if isinstance(r, Matrix) else Matrix(r) for r in self.rs]
        self.rs += [zero_r] * (self.order - len(self.rs))
        for i, p in enumerate(self.pis, start=1):
            if p.shape != (n,) * 4:
                raise InputError(f"pi_{i} must have shape {(n,) * 4}")
            _check_skew(p, f"pi_{i}")
        for i, r in enumerate(self.rs, start=1):
            if r.shape != (n, n):
                raise InputError(f"R_{i} must be {n}x{n}")

    def pi(self, i):
        if i == 0:
            return self.algebra.tensor
        return self.pis[i - 1] if i <= self.order else None

    def r(self, i):
        if i == 0:
            return self.operator.matrix
        return self.rs[i - 1] if i <= self.order else None

    def truncate(self, order):
        if not 1 <= order <= self.order:
            raise InputError("can only truncate to a smaller positive order")
        return FormalDeformation(self.algebra, self.operator, self.pis[:order], self.rs[:order], order)


def _compositions(total, parts):
    for combo in product(range(total + 1), repeat=parts - 1):
        last = total - sum(combo)
        if last >= 0:
            yield combo + (last,)


def bracket_residual(d: FormalDeformation, k: int) -> QTensor:
    """Coefficient of ``t^k`` in the fundamental identity for ``pi_t``, indexed ``[v, w, x, y, z, l]``."""
    n = d.algebra.dim
    total = QTensor.zeros((n,) * 6)
    for i, j in _compositions(k, 2):
        Pi, Pj = d.pi(i), d.pi(j)
        total = (
            total
            + einsum("vwxm,myzl->vwxyzl", Pj, Pi)
            + einsum("vwym,xmzl->vwxyzl", Pj, Pi)
            + einsum("vwzm,xyml->vwxyzl", Pj, Pi)
            - einsum("xyzm,vwml->vwxyzl", Pj, Pi)
        )
    return total


def operator_residual(d: FormalDeformation, order: int) -> QTensor:
    """Coefficient of ``t^order`` in the Rota-Baxter identity for ``(pi_t, R_t)``."""
    n = d.algebra.dim
    lam = d.operator.weight
    lhs = QTensor.zeros((n,) * 4)
    rhs = QTensor.zeros((n,) * 4)
    for i, j, k, l in _compositions(order, 4):
        lhs = lhs + transformed(d.pi(i), d.r(j), d.r(k), d.r(l))
        P, Rk, Rl = d.pi(j), d.r(k), d.r(l)
        inner = transformed(P, Rk, Rl, None) + transformed(P, None, Rk, Rl) + transformed(P, Rk, None, Rl)
        rhs = rhs + apply_last(d.r(i), inner)
    for i, j, k in _compositions(order, 3):
        P, Rk = d.pi(j), d.r(k)
        inner = transformed(P, Rk, None, None) + transformed(P, None, Rk, None) + transformed(P, None, None, Rk)
        rhs = rhs + apply_last(d.r(i), inner).scale(lam)
    for i, j in _compositions(order, 2):
        rhs = rhs + apply_last(d.r(i), d.pi(j)).scale(lam * lam)
    return lhs - rhs


def validate_deformation_orders(d: FormalDeformation, order: int | None = None):
    """List of violated ``(equation, order)`` pairs, ``equation`` in ``{"bracket", "operator"}``.

    An empty list means the deformation satisfies both conditions at every
    order ``0..order``.
    """
    order = d.order if order is None else order
    out = []
    for k in range(order + 1):
        if not bracket_residual(d, k).is_zero():
            out.append(("bracket", k))
        if not operator_residual(d, k).is_zero():
            out.append(("operator", k))
    return out


def trilinear_to_cochain(pi: QTensor) -> Cochain:
    """Degree-2 adjoint cochain ``f(x ^ y, z) = pi(x, y, z)``."""
    n = pi.shape[0]
    idx_i = [p[0] for p in pair_basis(n)]
    idx_j = [p[1] for p in pair_basis(n)]
    vals = QTensor(pi.num[idx_i, idx_j], pi.den) if idx_i else QTensor.zeros((0, n, n))
    return Cochain(CochainSpace(n, n, 2), vals)


def cochain_to_trilinear(c: Cochain) -> QTensor:
    """Inverse of :func:`trilinear_to_cochain`; the result must be totally skew."""
    n = c.space.n
    out = np.zeros((n, n, n, n), dtype=c.values.num.dtype)
    for s, (i, j) in enumerate(pair_basis(n)):
        out[i, j] = c.values.num[s]
        out[j, i] = -c.values.num[s]
    t = QTensor(out, c.values.den)
    _check_skew(t, "cochain")
    return t


def linear_to_cochain(M: Matrix, variant="descendent") -> Cochain:
    """Degree-1 adjoint cochain ``f(z) = M z``."""
    n = M.rows
    return Cochain(CochainSpace(n, n, 1, variant), M.T)


def infinitesimal(d: FormalDeformation) -> RBCochain:
    return RBCochain(trilinear_to_cochain(d.pi(1)), linear_to_cochain(d.r(1)))


def infinitesimal_is_cocycle(d: FormalDeformation) -> bool:
    """Whether ``(pi_1, R_1)`` is a 2-cocycle of the Rota-Baxter complex with adjoint coefficients."""
    A, R = d.algebra, d.operator
    dRB = coboundary_RB(2, A, R, adjoint_rep(A, R))
    return dRB.apply(infinitesimal(d).vector()).is_zero()


def deformation_from_rb_cochain(A, R, c: RBCochain) -> FormalDeformation:
    """Order-1 deformation with ``(pi_1, R_1)`` read from a degree-2 Rota-Baxter cochain."""
    pi1 = cochain_to_trilinear(c.f)
    R1 = Matrix.from_tensor(c.g.values.transpose(1, 0))
    return FormalDeformation(A, R, [pi1], [R1], 1)


def _insert_N(C: QTensor, N: Matrix, positions):
    mats = [N if p in positions else None for p in range(3)]
    return transformed(C, *mats)


def trivial_deformation_check(d: FormalDeformation, N: Matrix) -> bool:
    """Whether ``K_t = I + tN`` trivializes ``d`` up to its order.

    Requires ``NR = RN`` and, for each ``j <= order``, equality of the
    ``t^j`` coefficients of ``K_t pi_t(x, y, z)`` and
    ``[K_t x, K_t y, K_t z]`` (original bracket), i.e.
    ``pi_j + N pi_{j-1}`` against the sum of ``[ , , ]`` with ``N`` applied in
    ``j`` of the three slots.
    """
    N = N if isinstance(N, Matrix) else Matrix(N)
    R = d.operator.matrix
    if N.shape != R.shape:
        raise InputError("N must match the algebra's dimension")
    if N @ R != R @ N:
        return False
    C = d.algebra.tensor
    n = d.algebra.dim
    for j in range(d.order + 1):
        lhs = d.pi(j)
        if j >= 1:
            lhs = lhs + apply_last(N, d.pi(j - 1))
        rhs = QTensor.zeros((n,) * 4)
        if j <= 3:
            for pos in combinations(range(3), j):
                rhs = rhs + _insert_N(C, N, pos)
        if lhs != rhs:
            return False
    return True


def nijenhuis_deformation(A: ThreeLieAlgebra, R: RotaBaxterOperator, N: Matrix, order=1) -> FormalDeformation:
    """Deformation trivialized by ``I + tN`` (``R_i = 0``), solved order by order."""
    N = N if isinstance(N, Matrix) else Matrix(N)
    C = A.tensor
    pis = []
    prev = C
    for j in range(1, order + 1):
        rhs = QTensor.zeros(C.shape)
        if j <= 3:
            for pos in combinations(range(3), j):
                rhs = rhs + _insert_N(C, N, pos)
        cur = rhs - apply_last(N, prev)
        pis.append(cur)
        prev = cur
    return FormalDeformation(A, R, pis, [], order)
