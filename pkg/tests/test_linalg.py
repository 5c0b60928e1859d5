from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rb3lie._backend import HAVE_COMPILED, use_backend
from rb3lie.errors import InputError, ParseError
from rb3lie.linalg import (
    Matrix,
    QTensor,
    block,
    einsum,
    format_rational,
    kernel_basis,
    parse_rational,
    rank,
    rref,
    solve,
)

BACKENDS = ["python"] + (["compiled"] if HAVE_COMPILED else [])


def fraction_rref(rows):
    """Plain Gauss-Jordan over Fractions; independent of the package kernels."""
    a = [[Fraction(x) for x in r] for r in rows]
    m = len(a)
    n = len(a[0]) if a else 0
    pivots, r = [], 0
    for c in range(n):
        p = next((i for i in range(r, m) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(m):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a[:r], pivots


rationals = st.fractions(min_value=-6, max_value=6, max_denominator=5)


@st.composite
def rational_matrices(draw, max_side=6):
    m = draw(st.integers(1, max_side))
    n = draw(st.integers(1, max_side))
    return [[draw(rationals) for _ in range(n)] for _ in range(m)]


@pytest.mark.parametrize("text,value", [("3", 3), ("-2/4", Fraction(-1, 2)), (" 7/1 ", 7), ("0", 0)])
def test_parse_rational(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("text", ["1/0", "", "1.5", "a/b", "1//2", "--1"])
def test_parse_rational_rejects(text):
    with pytest.raises(ParseError):
        parse_rational(text)


def test_format_rational_is_canonical():
    assert format_rational(Fraction(6, -4)) == "-3/2"
    assert format_rational(Fraction(4, 2)) == "2"
    assert parse_rational(format_rational(Fraction(-7, 9))) == Fraction(-7, 9)


def test_qtensor_normalizes_denominator():
    t = QTensor.from_values([Fraction(1, 2), Fraction(1, 4)])
    assert t.den == 4
    assert (t + t).to_fractions().tolist() == [1, Fraction(1, 2)]
    assert QTensor.from_values([Fraction(2, 4), 1]) == QTensor.from_values([Fraction(1, 2), 1])


def test_einsum_matches_fraction_loop():
    a = QTensor.from_values([[Fraction(1, 2), 2], [3, Fraction(-1, 3)]])
    b = QTensor.from_values([[1, Fraction(1, 5)], [0, 4]])
    got = einsum("ij,jk->ik", a, b).to_fractions()
    fa, fb = a.to_fractions(), b.to_fractions()
    for i in range(2):
        for k in range(2):
            assert got[i, k] == sum(fa[i, j] * fb[j, k] for j in range(2))


def test_einsum_switches_to_big_integers():
    big = QTensor(np.array([2**40, 3], dtype=np.int64))
    out = einsum("i,j->ij", big, big)
    assert out.to_fractions()[0, 0] == 2**80


def test_einsum_requires_explicit_output():
    with pytest.raises(InputError):
        einsum("ij,jk", QTensor.zeros((2, 2)), QTensor.zeros((2, 2)))


def test_matrix_columns_are_images():
    M = Matrix([[1, 2], [3, 4]])
    assert M @ [1, 0] == (1, 3)
    assert M.T == Matrix([[1, 3], [2, 4]])
    assert Matrix.identity(2) @ M == M


def test_block_and_kernel():
    M = block([[Matrix([[1, 1]]), Matrix.zeros(1, 1)], [Matrix.zeros(1, 2), Matrix([[0]])]])
    assert M.shape == (2, 3)
    assert rank(M) == 1
    basis = kernel_basis(M)
    assert len(basis) == 2
    for v in basis:
        assert not any(M @ v)


def test_solve_consistent_and_inconsistent():
    M = Matrix([[1, 2], [2, 4]])
    x = solve(M, [3, 6])
    assert x is not None and M @ x == (3, 6)
    assert solve(M, [1, 0]) is None


@pytest.mark.parametrize("backend", BACKENDS)
@settings(max_examples=60, deadline=None)
@given(rows=rational_matrices())
def test_rref_matches_fraction_oracle(backend, rows):
    expect_rows, expect_piv = fraction_rref(rows)
    with use_backend(backend):
        R, rk, piv = rref(Matrix(rows))
    assert rk == len(expect_piv)
    assert list(piv) == expect_piv
    assert R.to_fractions()[:rk].tolist() == expect_rows


@settings(max_examples=40, deadline=None)
@given(rows=rational_matrices(max_side=8))
def test_backends_agree(rows):
    if not HAVE_COMPILED:
        pytest.skip("compiled kernel not built")
    M = Matrix(rows)
    with use_backend("python"):
        a = rref(M)
    with use_backend("compiled"):
        b = rref(M)
    assert a[0] == b[0] and a[1:] == b[1:]


def test_compiled_overflow_falls_back():
    if not HAVE_COMPILED:
        pytest.skip("compiled kernel not built")
    rows = [[2**61 + i * j for j in range(4)] for i in range(4)]
    with use_backend("compiled"):
        got = rref(Matrix(rows))
    with use_backend("python"):
        want = rref(Matrix(rows))
    assert got[0] == want[0] and got[1] == want[1]


@settings(max_examples=40, deadline=None)
@given(rows=rational_matrices())
def test_rank_nullity(rows):
    M = Matrix(rows)
    basis = kernel_basis(M)
    assert rank(M) + len(basis) == M.cols
    for v in basis:
        assert not any(M @ v)
