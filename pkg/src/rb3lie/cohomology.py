"""Cochain complexes of a Rota-Baxter 3-Lie algebra as exact matrices.

A degree-``p`` cochain takes ``p - 1`` arguments from the pair space
``L = A ^ A`` followed by one argument from ``A`` and returns a vector of
``V``.  Coordinates are stored as a tensor of shape ``(P,) * (p - 1) + (n, m)``
where ``P = n(n-1)/2`` indexes the basis pairs ``e_i ^ e_j`` (``i < j``, in
lexicographic order).  Distinct pair slots are independent tensor factors.
Flattening is row-major, and each coboundary is a matrix whose column ``c``
is the image of the ``c``-th basis cochain.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product

import numpy as np

from .algebra import RotaBaxterOperator, ThreeLieAlgebra, descendent_tensor
from .errors import InputError
from .linalg import Matrix, QTensor, block, concat, einsum, kernel_basis, kron, rank, solve
from .representation import RBRepresentation, Representation, tilde_rho

_SLOT_LETTERS = "bcdefghijkopqrst"


@lru_cache(maxsize=None)
def pair_basis(n):
    """Basis pairs ``(i, j)``, ``i < j``, in lexicographic order."""
    return tuple(combinations(range(n), 2))


@lru_cache(maxsize=None)
def _pair_arrays(n):
    pairs = pair_basis(n)
    I = np.array([p[0] for p in pairs], dtype=np.intp)
    J = np.array([p[1] for p in pairs], dtype=np.intp)
    return I, J


@lru_cache(maxsize=None)
def wedge_tensor(n):
    """``W[a, b, u]``: coefficient of the ``u``-th basis pair in ``e_a ^ e_b``."""
    P = len(pair_basis(n))
    W = np.zeros((n, n, P), dtype=np.int64)
    for u, (i, j) in enumerate(pair_basis(n)):
        W[i, j, u] = 1
        W[j, i, u] = -1
    return QTensor(W)


def cochain_space_dim(n, m, p):
    if p < 1:
        raise InputError("cochain degree must be at least 1")
    return (n * (n - 1) // 2) ** (p - 1) * n * m


@dataclass(frozen=True)
class CochainSpace:
    """``C^p`` with ambient dimension ``n`` and coefficient dimension ``m``.

    ``variant`` is ``"plain"`` for ``C^p(A, V)`` and ``"descendent"`` for
    ``C^p(A_R, V~)``; the two have the same coordinates.
    """

    n: int
    m: int
    degree: int
    variant: str = "plain"

    def __post_init__(self):
        if self.degree < 1:
            raise InputError("cochain degree must be at least 1")
        if self.variant not in ("plain", "descendent"):
            raise InputError(f"unknown cochain variant {self.variant!r}")

    @property
    def npairs(self):
        return self.n * (self.n - 1) // 2

    @property
    def shape(self):
        return (self.npairs,) * (self.degree - 1) + (self.n, self.m)

    @property
    def dim(self):
        return cochain_space_dim(self.n, self.m, self.degree)

    def next(self):
        return CochainSpace(self.n, self.m, self.degree + 1, self.variant)

    def pair_index(self, i, j):
        """Index and sign of ``e_i ^ e_j`` (0-based) in the pair basis."""
        if i == j:
            return None, 0
        sign = 1 if i < j else -1
        a, b = min(i, j), max(i, j)
        return pair_basis(self.n).index((a, b)), sign


class Cochain:
    """Element of a :class:`CochainSpace`, stored as a rational tensor."""

    def __init__(self, space: CochainSpace, values: QTensor):
        if values.shape != space.shape:
            values = values.reshape(*space.shape) if values.size == space.dim else None
            if values is None:
                raise InputError(f"cochain values do not fit the space of shape {space.shape}")
        self.space = space
        self.values = values

    @classmethod
    def zero(cls, space):
        return cls(space, QTensor.zeros(space.shape))

    @classmethod
    def from_vector(cls, space, vec):
        if isinstance(vec, QTensor):
            return cls(space, vec.reshape(*space.shape))
        vec = list(vec)
        if len(vec) != space.dim:
            raise InputError(f"vector of length {len(vec)} for a space of dimension {space.dim}")
        return cls(space, QTensor.from_values(vec).reshape(*space.shape))

    @classmethod
    def from_entries(cls, space, entries):
        """Build from ``[(pairs, arg, value)]`` with 0-based indices.

        ``pairs`` is a list of ``(i, j)`` with ``i < j``, one per pair slot;
        ``value`` is a length-``m`` vector.  Missing basis tuples are zero.
        """
        arr = np.empty(space.shape, dtype=object)
        arr[...] = Fraction(0)
        for pairs, arg, value in entries:
            if len(pairs) != space.degree - 1:
                raise InputError(f"degree-{space.degree} cochain entry needs {space.degree - 1} pairs")
            idx = []
            for i, j in pairs:
                if not (0 <= i < j < space.n):
                    raise InputError(f"cochain pair ({i + 1},{j + 1}) must satisfy 1 <= i < j <= {space.n}")
                idx.append(pair_basis(space.n).index((i, j)))
            if not 0 <= arg < space.n:
                raise InputError(f"cochain argument {arg + 1} out of range")
            value = list(value)
            if len(value) != space.m:
                raise InputError(f"cochain value of length {len(value)}, expected {space.m}")
            arr[tuple(idx) + (arg,)] = value
        return cls(space, QTensor.from_values(arr))

    def entries(self):
        """Nonzero basis tuples as ``(pairs, arg, value)`` with 0-based indices."""
        out = []
        pairs = pair_basis(self.space.n)
        flat = self.values.to_fractions()
        for idx in np.ndindex(*self.space.shape[:-1]):
            vec = flat[idx].tolist()
            if any(vec):
                out.append(([pairs[s] for s in idx[:-1]], idx[-1], vec))
        return out

    def vector(self):
        return self.values.reshape(self.space.dim)

    def evaluate(self, pair_args, z):
        """Value on basis arguments: ``pair_args`` is a list of 0-based ``(i, j)``."""
        sign, idx = 1, []
        for i, j in pair_args:
            s, sg = self.space.pair_index(i, j)
            if sg == 0:
                return (Fraction(0),) * self.space.m
            sign *= sg
            idx.append(s)
        vec = self.values[tuple(idx) + (z,)].to_fractions().tolist()
        return tuple(sign * v for v in vec)

    def __add__(self, other):
        return Cochain(self.space, self.values + other.values)

    def __sub__(self, other):
        return Cochain(self.space, self.values - other.values)

    def scale(self, q):
        return Cochain(self.space, self.values.scale(q))

    def is_zero(self):
        return self.values.is_zero()

    def __eq__(self, other):
        return isinstance(other, Cochain) and self.space == other.space and self.values == other.values

    def __repr__(self):
        return f"Cochain(degree={self.space.degree}, n={self.space.n}, m={self.space.m})"


@dataclass
class RBCochain:
    """Pair ``(f, g)`` in ``C^p(A, V) x C^{p-1}(A_R, V~)``; ``g`` is None for ``p = 1``."""

    f: Cochain
    g: Cochain | None = None

    def __post_init__(self):
        p = self.f.space.degree
        if p == 1:
            if self.g is not None:
                raise InputError("degree-1 Rota-Baxter cochains have no second component")
        elif self.g is None or self.g.space.degree != p - 1:
            raise InputError(f"degree-{p} Rota-Baxter cochain needs a degree-{p - 1} second component")

    @property
    def degree(self):
        return self.f.space.degree

    def vector(self):
        parts = [self.f.vector()]
        if self.g is not None:
            parts.append(self.g.vector())
        return concat(parts)

    @classmethod
    def from_vector(cls, n, m, p, vec):
        vec = vec if isinstance(vec, QTensor) else QTensor.from_values(list(vec))
        d1 = cochain_space_dim(n, m, p)
        f = Cochain.from_vector(CochainSpace(n, m, p), vec[:d1])
        g = None
        if p > 1:
            g = Cochain.from_vector(CochainSpace(n, m, p - 1, "descendent"), vec[d1:])
        return cls(f, g)

    def is_zero(self):
        return self.f.is_zero() and (self.g is None or self.g.is_zero())


@dataclass(frozen=True)
class CoboundaryMatrix:
    """A linear map between cochain spaces, given by its exact matrix."""

    source: object
    target: object
    matrix: Matrix

    def __matmul__(self, other):
        if isinstance(other, CoboundaryMatrix):
            return CoboundaryMatrix(other.source, self.target, self.matrix @ other.matrix)
        return self.matrix @ other

    def apply(self, vec: QTensor) -> QTensor:
        """Image of a coordinate vector (a 1-D QTensor)."""
        return einsum("ij,j->i", self.matrix, vec)

    def is_zero(self):
        return self.matrix.is_zero()


# structure tensors in the pair basis ---------------------------------------

def _take(t: QTensor, idx, axis):
    return QTensor(np.take(t.num, idx, axis=axis), t.den)


def leibniz_bracket(C: QTensor, n):
    """``FB[s, t, u]``: coefficient of pair ``u`` in ``[E_s, E_t]_F``.

    ``[x1^x2, y1^y2]_F = [x1,x2,y1]^y2 + y1^[x1,x2,y2]``.
    """
    I, J = _pair_arrays(n)
    W = wedge_tensor(n)
    CP = _pair_rows(C, n)  # CP[s, c, l] = C[I_s, J_s, c, l]
    first = einsum("stl,ltu->stu", _take(CP, I, 1), _take(W, J, 1))
    second = einsum("stl,tlu->stu", _take(CP, J, 1), _take(W, I, 0))
    return first + second


def _pair_rows(C: QTensor, n):
    I, J = _pair_arrays(n)
    return QTensor(C.num[I, J], C.den)


def _coboundary_batch(C: QTensor, rho: QTensor, n, m, p):
    """Matrix of the 3-Lie coboundary ``C^p -> C^{p+1}`` for bracket ``C`` and action ``rho``."""
    I, J = _pair_arrays(n)
    P = len(I)
    src = CochainSpace(n, m, p)
    tgt = src.next()
    N = src.dim
    if N == 0 or tgt.dim == 0:
        return Matrix.zeros(tgt.dim, N)
    F = QTensor(np.eye(N, dtype=np.int64).reshape((N,) + src.shape))
    FB = leibniz_bracket(C, n)
    BR = _pair_rows(C, n)                        # (P, n, n): [E_s, e_z] = sum_a BR[s,z,a] e_a
    RHO = _pair_rows(rho, n)                     # (P, m, m)
    T = _SLOT_LETTERS[:p]
    out = "A" + T + "zv"
    terms = []

    def drop(i):
        return "".join(T[j] for j in range(p) if j != i)

    for i in range(p):
        sign = -1 if (i + 1) % 2 else 1          # (-1)^i with 1-based i
        for k in range(i + 1, p):
            fsub = "".join("u" if j == k else T[j] for j in range(p) if j != i)
            terms.append(einsum(f"{T[i]}{T[k]}u,A{fsub}zv->{out}", FB, F).scale(sign))
        terms.append(einsum(f"{T[i]}za,A{drop(i)}av->{out}", BR, F).scale(sign))
        terms.append(einsum(f"{T[i]}vw,A{drop(i)}zw->{out}", RHO, F).scale(-sign))

    sign = 1 if (p + 1) % 2 == 0 else -1
    head, last = T[:-1], T[-1]
    rho_y = QTensor(rho.num[J], rho.den)         # rho(e_{J_t}, e_z)
    rho_x = QTensor(rho.num[:, I].transpose(1, 0, 2, 3), rho.den)  # rho(e_z, e_{I_t})
    FI = _take(F, I, axis=p)                     # f(..., x_p)
    FJ = _take(F, J, axis=p)                     # f(..., y_p)
    terms.append(einsum(f"{last}zvw,A{head}{last}w->{out}", rho_y, FI).scale(sign))
    terms.append(einsum(f"{last}zvw,A{head}{last}w->{out}", rho_x, FJ).scale(sign))

    total = terms[0]
    for t in terms[1:]:
        total = total + t
    return Matrix.from_tensor(total.reshape(N, tgt.dim).transpose(1, 0))


def coboundary_from_structure(C: QTensor, rho: QTensor, p, variant="plain"):
    n, m = C.shape[0], rho.shape[2]
    src = CochainSpace(n, m, p, variant)
    return CoboundaryMatrix(src, src.next(), _coboundary_batch(C, rho, n, m, p))


def coboundary(space: CochainSpace, rep) -> CoboundaryMatrix:
    """``d: C^p(A, V) -> C^{p+1}(A, V)`` for a representation (or RB representation)."""
    rep = rep.base if isinstance(rep, RBRepresentation) else rep
    if not isinstance(rep, Representation):
        raise InputError("coboundary needs a representation")
    if (space.n, space.m) != (rep.algebra.dim, rep.vdim):
        raise InputError(f"cochain space ({space.n}, {space.m}) does not match the representation")
    return coboundary_from_structure(rep.algebra.tensor, rep.rho, space.degree, space.variant)


def descendent_structure(rbrep: RBRepresentation, R: RotaBaxterOperator | None = None):
    """Bracket tensor of ``A_R`` and the action ``rho~`` on ``V``."""
    R = rbrep.operator if R is None else R
    CR = descendent_tensor(rbrep.algebra.tensor, R.matrix, R.weight)
    return CR, tilde_rho(rbrep.rho, rbrep.RV, R)


def coboundary_R(space: CochainSpace, rbrep: RBRepresentation, R: RotaBaxterOperator | None = None) -> CoboundaryMatrix:
    """``d_R: C^p(A_R, V~) -> C^{p+1}(A_R, V~)``: the same formula with ``[,,]_R`` and ``rho~``."""
    if (space.n, space.m) != (rbrep.algebra.dim, rbrep.vdim):
        raise InputError("cochain space does not match the representation")
    CR, rt = descendent_structure(rbrep, R)
    return coboundary_from_structure(CR, rt, space.degree, "descendent")


# the cochain map ------------------------------------------------------------

def _pair_operator(X: QTensor | None, Y: QTensor | None, n):
    """Matrix on the pair space of ``e_i ^ e_j -> (X e_i) ^ (Y e_j)``."""
    I, J = _pair_arrays(n)
    W = wedge_tensor(n)
    eye = Matrix.identity(n)
    X = eye if X is None else X
    Y = eye if Y is None else Y
    XI = _take(X, I, 1)                          # (n, P): X e_{I_s}
    YJ = _take(Y, J, 1)
    return Matrix.from_tensor(einsum("as,bs,abu->us", XI, YJ, W))


def delta_map(p, A: ThreeLieAlgebra, R: RotaBaxterOperator, rbrep: RBRepresentation,
              insertion="subsets") -> CoboundaryMatrix:
    """Cochain map ``C^p(A, V) -> C^p(A_R, V~)``.

    ``delta f = f(R, ..., R) - R_V sum_{k<N} lambda^(N-1-k) f^k`` with
    ``N = 2p - 1`` arguments.  ``f^k`` sums ``f`` over every way of applying
    ``R`` to exactly ``k`` argument positions.  ``insertion="prefix"`` uses
    the single insertion at the first ``k`` positions instead; it does not
    give a cochain map and exists as a negative control.
    """
    if p < 1:
        raise InputError("cochain degree must be at least 1")
    n, m = A.dim, rbrep.vdim
    if R.dim != n or rbrep.algebra.dim != n:
        raise InputError("operator and representation do not match the algebra")
    lam = R.weight
    Rm = R.matrix
    N = 2 * p - 1
    src = CochainSpace(n, m, p)
    tgt = CochainSpace(n, m, p, "descendent")
    if src.dim == 0:
        return CoboundaryMatrix(src, tgt, Matrix.zeros(0, 0))
    eye_n, eye_m = Matrix.identity(n), Matrix.identity(m)

    if insertion == "subsets":
        pair_ops = [
            _pair_operator(None, None, n),
            _pair_operator(Rm, None, n) + _pair_operator(None, Rm, n),
            _pair_operator(Rm, Rm, n),
        ]
        combos = []
        for counts in product(range(3), repeat=p - 1):
            for zc in range(2):
                mats = [pair_ops[c] for c in counts] + [Rm if zc else eye_n]
                combos.append((sum(counts) + zc, mats))
    elif insertion == "prefix":
        combos = []
        for k in range(N + 1):
            mats = []
            for slot in range(p - 1):
                rx, ry = 2 * slot < k, 2 * slot + 1 < k
                mats.append(_pair_operator(Rm if rx else None, Rm if ry else None, n))
            mats.append(Rm if N - 1 < k else eye_n)
            combos.append((k, mats))
    else:
        raise InputError(f"unknown insertion rule {insertion!r}")

    total = Matrix.zeros(tgt.dim, src.dim)
    for k, mats in combos:
        factors = [mat.T for mat in mats]
        if k == N:
            total = total + kron(*factors, eye_m)
        else:
            coef = lam ** (N - 1 - k)
            if coef:
                total = total - kron(*factors, rbrep.RV).scale(coef)
    return CoboundaryMatrix(src, tgt, Matrix.from_tensor(total))


# the Rota-Baxter complex ------------------------------------------------------

@dataclass(frozen=True)
class RBSpace:
    n: int
    m: int
    degree: int

    @property
    def dim(self):
        d = cochain_space_dim(self.n, self.m, self.degree)
        if self.degree > 1:
            d += cochain_space_dim(self.n, self.m, self.degree - 1)
        return d


def coboundary_RB(p, A: ThreeLieAlgebra, R: RotaBaxterOperator, rbrep: RBRepresentation,
                  insertion="subsets") -> CoboundaryMatrix:
    """``d_RB(f, g) = (d f, d_R g + (-1)^p delta f)`` on ``C^p x C^{p-1}``."""
    n, m = A.dim, rbrep.vdim
    d = coboundary(CochainSpace(n, m, p), rbrep).matrix
    dl = delta_map(p, A, R, rbrep, insertion).matrix
    sgn = 1 if p % 2 == 0 else -1
    if p == 1:
        mat = block([[d], [dl.scale(sgn)]])
    else:
        dR = coboundary_R(CochainSpace(n, m, p - 1, "descendent"), rbrep, R).matrix
        mat = block([
            [d, Matrix.zeros(d.rows, dR.cols)],
            [dl.scale(sgn), dR],
        ])
    return CoboundaryMatrix(RBSpace(n, m, p), RBSpace(n, m, p + 1), mat)


# cohomology ----------------------------------------------------------------

@dataclass(frozen=True)
class CohomologyRow:
    degree: int
    cochains: int
    cocycles: int
    coboundaries: int

    @property
    def cohomology(self):
        return self.cocycles - self.coboundaries

    def to_dict(self):
        return {"p": self.degree, "C": self.cochains, "Z": self.cocycles,
                "B": self.coboundaries, "H": self.cohomology}


def _table(mats, dims):
    rows = []
    prev_rank = 0
    for p, (mat, dim) in enumerate(zip(mats, dims), start=1):
        rk = rank(mat) if mat.size else 0
        rows.append(CohomologyRow(p, dim, dim - rk, prev_rank))
        prev_rank = rk
    return rows


def cohomology_dims(A: ThreeLieAlgebra, R: RotaBaxterOperator, rbrep: RBRepresentation, max_degree=3):
    """Dimensions of ``C^p``, ``Z^p``, ``B^p``, ``H^p`` for ``p <= max_degree``.

    Returns a dict with keys ``"plain"``, ``"descendent"`` and ``"rb"``.
    """
    if max_degree < 1:
        raise InputError("max_degree must be at least 1")
    n, m = A.dim, rbrep.vdim
    degrees = range(1, max_degree + 1)
    plain = [coboundary(CochainSpace(n, m, p), rbrep).matrix for p in degrees]
    desc = [coboundary_R(CochainSpace(n, m, p, "descendent"), rbrep, R).matrix for p in degrees]
    cdims = [cochain_space_dim(n, m, p) for p in degrees]
    rb = []
    for p in degrees:
        blocks = [[plain[p - 1]], [delta_map(p, A, R, rbrep).matrix.scale(1 if p % 2 == 0 else -1)]]
        if p > 1:
            blocks[0].append(Matrix.zeros(plain[p - 1].rows, desc[p - 2].cols))
            blocks[1].append(desc[p - 2])
        rb.append(block(blocks))
    rbdims = [RBSpace(n, m, p).dim for p in degrees]
    return {
        "plain": _table(plain, cdims),
        "descendent": _table(desc, cdims),
        "rb": _table(rb, rbdims),
    }


# membership --------------------------------------------------------------

def _differential_for(c, rbrep, R):
    if isinstance(c, RBCochain):
        return coboundary_RB(c.degree, rbrep.algebra, R or rbrep.operator, rbrep), c.vector()
    if c.space.variant == "descendent":
        return coboundary_R(c.space, rbrep, R), c.vector()
    return coboundary(c.space, rbrep), c.vector()


def is_cocycle(c, rbrep: RBRepresentation, R: RotaBaxterOperator | None = None):
    """Return ``(verdict, image)`` where ``image`` is the coordinate vector of ``d c``."""
    d, vec = _differential_for(c, rbrep, R)
    image = d.apply(vec)
    return image.is_zero(), image


def _previous_differential(c, rbrep, R):
    R = R or rbrep.operator
    if isinstance(c, RBCochain):
        if c.degree == 1:
            return None
        return coboundary_RB(c.degree - 1, rbrep.algebra, R, rbrep).matrix
    p = c.space.degree
    if p == 1:
        return None
    prev = CochainSpace(c.space.n, c.space.m, p - 1, c.space.variant)
    if c.space.variant == "descendent":
        return coboundary_R(prev, rbrep, R).matrix
    return coboundary(prev, rbrep).matrix


def is_coboundary(c, rbrep: RBRepresentation, R: RotaBaxterOperator | None = None):
    """Return ``(verdict, witness)``; ``witness`` is a preimage coordinate tuple when exact."""
    vec = c.vector()
    d = _previous_differential(c, rbrep, R)
    if d is None:
        zero = vec.is_zero()
        return zero, (() if zero else None)
    x = solve(d, vec.tolist())
    return x is not None, x


def cocycle_basis(d: Matrix):
    """Basis of the kernel of a differential, as Fraction tuples."""
    return kernel_basis(d)
