"""Exact rational arrays and matrices.

Every array is stored as an integer numerator array over one positive
denominator (``value = num / den``), normalized so the gcd of all numerators
and the denominator is 1.  Numerators live in ``int64`` whenever a bound
check proves the values fit; otherwise they are Python integers in an object
array.  Contractions choose the dtype the same way, so no operation can
silently overflow.
"""

from __future__ import annotations

import re
import string
from fractions import Fraction
from functools import reduce
from math import gcd, lcm, prod

import numpy as np

from . import _backend
from .errors import InputError, ParseError

_SAFE = 2**62
_RATIONAL_RE = re.compile(r"^\s*([-−]?)(\d+)(?:/(\d+))?\s*$")


def parse_rational(text) -> Fraction:
    """Parse the canonical text form ``"p"`` or ``"p/q"`` (``q > 0``).

    Integers and Fractions pass through unchanged.  Non-reduced input such
    as ``"2/4"`` is accepted and reduced; ``"1/0"`` raises ParseError.
    """
    if isinstance(text, bool):
        raise ParseError(f"not a rational: {text!r}")
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if not isinstance(text, str):
        raise ParseError(f"not a rational: {text!r}")
    m = _RATIONAL_RE.match(text)
    if m is None:
        raise ParseError(f"not a rational: {text!r}")
    sign, p, q = m.groups()
    q = int(q) if q is not None else 1
    if q == 0:
        raise ParseError(f"zero denominator: {text!r}")
    value = Fraction(int(p), q)
    return -value if sign else value


def format_rational(value) -> str:
    return str(Fraction(value))


def as_rational(value) -> Fraction:
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return Fraction(value)
    if isinstance(value, np.integer):
        return Fraction(int(value))
    raise InputError(f"expected an exact rational, got {value!r}")


def _maxabs(num):
    if num.size == 0:
        return 0
    return int(np.abs(num).max())


def _compact(num):
    """Return ``num`` as int64 if it fits, else as an object array of ints."""
    if num.dtype == np.int64:
        return num
    if num.dtype != object:
        num = num.astype(object)
    if _maxabs(num) < _SAFE:
        return num.astype(np.int64)
    return num


def _as_dtype(num, dtype):
    if num.dtype == dtype:
        return num
    return num.astype(dtype)


class QTensor:
    """Immutable exact rational array of arbitrary rank."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=1):
        num = np.asarray(num)
        if num.dtype.kind not in "iuO":
            raise InputError(f"numerators must be integers, got dtype {num.dtype}")
        den = int(den)
        if den == 0:
            raise InputError("zero denominator")
        if den < 0:
            num, den = -num, -den
        num = _compact(num)
        if num.size:
            g = gcd(int(np.gcd.reduce(num, axis=None)), den)
        else:
            g = den
        if g > 1:
            num = num // g
            den //= g
        if not num.any():
            den = 1
        num = num.copy() if num.base is not None else num
        num.flags.writeable = False
        self.num = num
        self.den = den

    # construction -------------------------------------------------------
    @classmethod
    def from_values(cls, values, shape=None):
        """Build from a nested sequence (or array) of rational-like values."""
        arr = np.empty(shape, dtype=object) if shape is not None else None
        if arr is None:
            arr = np.array(values, dtype=object)
            if arr.dtype != object:
                arr = arr.astype(object)
        else:
            arr[...] = values
        flat = [as_rational(v) for v in arr.flat]
        den = reduce(lcm, (q.denominator for q in flat), 1)
        num = np.array([q.numerator * (den // q.denominator) for q in flat], dtype=object)
        return cls(num.reshape(arr.shape), den)

    @classmethod
    def zeros(cls, shape):
        return cls(np.zeros(shape, dtype=np.int64))

    # access -------------------------------------------------------------
    @property
    def shape(self):
        return self.num.shape

    @property
    def ndim(self):
        return self.num.ndim

    @property
    def size(self):
        return self.num.size

    def __getitem__(self, idx):
        sub = self.num[idx]
        if isinstance(sub, np.ndarray):
            return type(self)._wrap(sub, self.den)
        return Fraction(int(sub), self.den)

    @classmethod
    def _wrap(cls, num, den):
        return QTensor(num, den) if cls is not QTensor and num.ndim != 2 else cls(num, den)

    def to_fractions(self):
        out = np.empty(self.shape, dtype=object)
        flat = out.reshape(-1)
        for k, x in enumerate(self.num.flat):
            flat[k] = Fraction(int(x), self.den)
        return out

    def tolist(self):
        return self.to_fractions().tolist()

    def is_zero(self):
        return not self.num.any()

    def nonzero(self):
        return list(zip(*(ix.tolist() for ix in np.nonzero(self.num))))

    def reshape(self, *shape):
        return QTensor(self.num.reshape(*shape), self.den)

    def transpose(self, *axes):
        return QTensor(self.num.transpose(*axes), self.den)

    def astensor(self):
        return QTensor(self.num, self.den)

    # arithmetic ---------------------------------------------------------
    def _aligned(self, other):
        if not isinstance(other, QTensor):
            raise InputError(f"cannot combine QTensor with {type(other).__name__}")
        if self.shape != other.shape:
            raise InputError(f"shape mismatch {self.shape} vs {other.shape}")
        den = lcm(self.den, other.den)
        a, b = self.num, other.num
        fa, fb = den // self.den, den // other.den
        bound = _maxabs(a) * fa + _maxabs(b) * fb
        dtype = np.int64 if bound < _SAFE else object
        a, b = _as_dtype(a, dtype), _as_dtype(b, dtype)
        if fa != 1:
            a = a * fa
        if fb != 1:
            b = b * fb
        return a, b, den

    def __add__(self, other):
        a, b, den = self._aligned(other)
        return self._like(a + b, den)

    def __sub__(self, other):
        a, b, den = self._aligned(other)
        return self._like(a - b, den)

    def __neg__(self):
        return self._like(-self.num, self.den)

    def scale(self, q):
        q = as_rational(q)
        num = self.num
        if _maxabs(num) * abs(q.numerator) >= _SAFE:
            num = _as_dtype(num, object)
        return self._like(num * q.numerator, self.den * q.denominator)

    def __mul__(self, q):
        return self.scale(q)

    __rmul__ = __mul__

    def _like(self, num, den):
        return type(self)(num, den) if type(self) is not QTensor else QTensor(num, den)

    def __eq__(self, other):
        if not isinstance(other, QTensor):
            return NotImplemented
        return (
            self.shape == other.shape
            and self.den == other.den
            and bool(np.array_equal(self.num, other.num))
        )

    def __hash__(self):
        return hash((self.shape, self.den, self.num.tobytes() if self.num.dtype != object else tuple(self.num.flat)))

    def __repr__(self):
        return f"QTensor(shape={self.shape}, den={self.den})"


def einsum(subscripts, *operands):
    """Exact ``numpy.einsum`` over QTensors (explicit ``->`` form only)."""
    if "->" not in subscripts:
        raise InputError("einsum needs an explicit output specification")
    inputs, output = subscripts.replace(" ", "").split("->")
    terms = inputs.split(",")
    if len(terms) != len(operands):
        raise InputError("einsum operand count mismatch")
    sizes = {}
    for term, op in zip(terms, operands):
        if len(term) != op.ndim:
            raise InputError(f"einsum term {term!r} does not match rank {op.ndim}")
        for ch, n in zip(term, op.shape):
            if sizes.setdefault(ch, n) != n:
                raise InputError(f"einsum size mismatch on index {ch!r}")
    summed = prod(sizes[ch] for ch in set(inputs) - set(output) - {","})
    bound = summed * prod(_maxabs(op.num) for op in operands)
    dtype = np.int64 if bound < _SAFE else object
    nums = [_as_dtype(op.num, dtype) for op in operands]
    num = np.einsum(subscripts, *nums, optimize=len(operands) > 2)
    return QTensor(np.asarray(num), prod(op.den for op in operands))


def letters(count, skip=""):
    """Return ``count`` distinct einsum index letters not in ``skip``."""
    pool = [c for c in string.ascii_letters if c not in skip]
    if count > len(pool):
        raise InputError("too many einsum indices")
    return "".join(pool[:count])


def kron(*factors):
    """Kronecker product of 2-D QTensors."""
    out_num = np.ones((1, 1), dtype=np.int64)
    den = 1
    for f in factors:
        bound = _maxabs(out_num) * _maxabs(f.num)
        dtype = np.int64 if bound < _SAFE else object
        out_num = np.kron(_as_dtype(out_num, dtype), _as_dtype(f.num, dtype))
        den *= f.den
    return Matrix._from_num(out_num, den)


class Matrix(QTensor):
    """Immutable exact rational matrix.

    Linear maps follow the column convention: column ``c`` holds the
    coordinates of the image of basis vector ``e_c``, so applying the map to
    a coordinate vector is left multiplication.
    """

    __slots__ = ()

    def __init__(self, rows, den=None):
        if den is not None:
            super().__init__(rows, den)
        else:
            rows = [list(r) for r in rows]
            width = {len(r) for r in rows}
            if len(width) > 1:
                raise InputError("ragged matrix rows")
            ncols = width.pop() if width else 0
            t = QTensor.from_values(rows, shape=(len(rows), ncols)) if rows else QTensor.zeros((0, 0))
            super().__init__(t.num, t.den)
        if self.num.ndim != 2:
            raise InputError(f"matrix needs 2 axes, got {self.num.ndim}")

    @classmethod
    def _from_num(cls, num, den=1):
        return cls(np.asarray(num), den)

    @classmethod
    def from_tensor(cls, t):
        return cls(t.num, t.den)

    @classmethod
    def identity(cls, n):
        return cls._from_num(np.eye(n, dtype=np.int64))

    @classmethod
    def zeros(cls, rows, cols=None):
        return cls._from_num(np.zeros((rows, rows if cols is None else cols), dtype=np.int64))

    @classmethod
    def diag(cls, values):
        values = [as_rational(v) for v in values]
        n = len(values)
        rows = [[values[i] if i == j else 0 for j in range(n)] for i in range(n)]
        return cls(rows)

    @classmethod
    def from_columns(cls, columns, nrows=None):
        columns = [list(c) for c in columns]
        if not columns:
            return cls.zeros(nrows or 0, 0)
        return cls(list(map(list, zip(*columns))))

    @property
    def rows(self):
        return self.shape[0]

    @property
    def cols(self):
        return self.shape[1]

    @property
    def T(self):
        return transpose(self)

    def column(self, c):
        return tuple(self[:, c].tolist_flat())

    def tolist_flat(self):
        return [Fraction(int(x), self.den) for x in self.num.flat]

    def to_strings(self):
        return [[format_rational(q) for q in row] for row in self.tolist()]

    def __matmul__(self, other):
        if isinstance(other, QTensor):
            return matmul(self, other)
        vec = [as_rational(v) for v in other]
        if len(vec) != self.cols:
            raise InputError(f"vector of length {len(vec)} for {self.shape} matrix")
        rows = self.tolist()
        return tuple(sum((a * b for a, b in zip(row, vec)), Fraction(0)) for row in rows)

    def __pow__(self, k):
        if k < 0:
            raise InputError("negative matrix power")
        out = Matrix.identity(self.rows)
        for _ in range(k):
            out = out @ self
        return out

    def rref(self):
        return rref(self)

    def rank(self):
        return rref(self)[1]

    def kernel_basis(self):
        return kernel_basis(self)

    def solve(self, rhs):
        return solve(self, rhs)

    def __repr__(self):
        return f"Matrix({self.to_strings()})"


def _check_matrix(m, name="matrix"):
    if not isinstance(m, QTensor) or m.ndim != 2:
        raise InputError(f"{name} must be a 2-D exact matrix")
    return m if isinstance(m, Matrix) else Matrix.from_tensor(m)


def matmul(a, b):
    a, b = _check_matrix(a), _check_matrix(b)
    if a.cols != b.rows:
        raise InputError(f"cannot multiply {a.shape} by {b.shape}")
    t = einsum("ij,jk->ik", a, b)
    return Matrix.from_tensor(t)


def matadd(a, b):
    a, b = _check_matrix(a), _check_matrix(b)
    if a.shape != b.shape:
        raise InputError(f"cannot add {a.shape} and {b.shape}")
    return a + b


def scalar_mul(q, a):
    return _check_matrix(a).scale(q)


def transpose(a):
    a = _check_matrix(a)
    return Matrix._from_num(a.num.T, a.den)


def _common_den(tensors):
    """Numerators of ``tensors`` rescaled to a shared denominator."""
    den = reduce(lcm, (t.den for t in tensors), 1)
    bound = max((_maxabs(t.num) * (den // t.den) for t in tensors), default=0)
    dtype = np.int64 if bound < _SAFE else object
    return [_as_dtype(t.num, dtype) * (den // t.den) for t in tensors], den


def hstack(blocks):
    blocks = [_check_matrix(b) for b in blocks]
    nums, den = _common_den(blocks)
    return Matrix._from_num(np.hstack(nums), den)


def vstack(blocks):
    return transpose(hstack([transpose(b) for b in blocks]))


def concat(vectors):
    """Concatenate 1-D QTensors."""
    nums, den = _common_den(vectors)
    return QTensor(np.concatenate(nums) if nums else np.zeros(0, dtype=np.int64), den)


def block(rows_of_blocks):
    return vstack([hstack(r) for r in rows_of_blocks])


def block_diag(*blocks):
    blocks = [_check_matrix(b) for b in blocks]
    total_c = sum(b.cols for b in blocks)
    rows, col = [], 0
    for b in blocks:
        row = []
        if col:
            row.append(Matrix.zeros(b.rows, col))
        row.append(b)
        if total_c - col - b.cols:
            row.append(Matrix.zeros(b.rows, total_c - col - b.cols))
        rows.append(hstack(row))
        col += b.cols
    return vstack(rows)


def rref(m):
    """Reduced row-echelon form.

    Returns ``(R, rank, pivots)`` with ``R`` the same shape as ``m``.  Row
    reduction runs on the integer numerators in the selected kernel.
    """
    m = _check_matrix(m)
    rows, pivots = _backend.rref_integer(m.num)
    nr, nc = m.shape
    if not pivots:
        return Matrix.zeros(nr, nc), 0, []
    den = reduce(lcm, (rows[i][c] for i, c in enumerate(pivots)), 1)
    out = np.zeros((nr, nc), dtype=object)
    for i, c in enumerate(pivots):
        f = den // rows[i][c]
        out[i] = [f * x for x in rows[i]]
    return Matrix._from_num(out, den), len(pivots), list(pivots)


def rank(m):
    return rref(m)[1]


def kernel_basis(m):
    """Basis of the right null space as a list of Fraction tuples.

    One vector per free column ``f``: 1 in position ``f``, minus the RREF
    column entries at the pivot positions.
    """
    m = _check_matrix(m)
    r, rk, pivots = rref(m)
    ncols = m.cols
    pivot_set = set(pivots)
    fr = r.to_fractions()
    basis = []
    for f in range(ncols):
        if f in pivot_set:
            continue
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -fr[i, f]
        basis.append(tuple(v))
    return basis


def solve(m, rhs):
    """One solution ``x`` of ``m x = rhs`` (free variables zero), or None."""
    m = _check_matrix(m)
    rhs = [as_rational(v) for v in rhs]
    if len(rhs) != m.rows:
        raise InputError(f"right-hand side of length {len(rhs)} for {m.shape} matrix")
    aug = hstack([m, Matrix([[v] for v in rhs]) if rhs else Matrix.zeros(0, 1)])
    r, rk, pivots = rref(aug)
    if pivots and pivots[-1] == m.cols:
        return None
    x = [Fraction(0)] * m.cols
    fr = r.to_fractions()
    for i, c in enumerate(pivots):
        x[c] = fr[i, m.cols]
    return tuple(x)


def vector(values):
    return tuple(as_rational(v) for v in values)


def column_matrix(vec):
    return Matrix([[v] for v in vec])
