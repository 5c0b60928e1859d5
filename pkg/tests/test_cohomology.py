import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from rb3lie.algebra import RotaBaxterOperator, a3, catalog
from rb3lie.cohomology import (
    Cochain,
    CochainSpace,
    RBCochain,
    coboundary,
    coboundary_R,
    coboundary_RB,
    cochain_space_dim,
    cohomology_dims,
    delta_map,
    is_coboundary,
    is_cocycle,
)
from rb3lie.errors import InputError
from rb3lie.linalg import Matrix, QTensor, rank
from rb3lie.representation import adjoint_rep, tilde_rho, trivial_rb_rep

SQUARE_CASES = ["A3-rbm1(1,2,3,4)", "A3-rbm2(1,-2,1/2,3)", "N4"]


def random_cochain(space, rng, den=3):
    vals = [Fraction(rng.randint(-4, 4), rng.randint(1, den)) for _ in range(space.dim)]
    return Cochain.from_vector(space, vals)


def fraction_values(c):
    return c.values.to_fractions()


def image_values(d, c):
    img = d.apply(c.vector())
    return img.to_fractions().reshape(d.target.shape)


def rho_from(rbrep):
    pairs = {k: v.tolist() for k, v in rbrep.base.pairs().items()}
    n, m = rbrep.algebra.dim, rbrep.vdim
    return lambda x, y: oracles.rho_matrix(pairs, n, m, x, y)


def tilde_from(rbrep):
    R = rbrep.operator.matrix.tolist()
    RV = rbrep.RV.tolist()
    lam = rbrep.weight
    rho = rho_from(rbrep)

    def act(x, y):
        Rx, Ry = oracles.apply(R, x), oracles.apply(R, y)
        S = oracles.mat_add(rho(Rx, y), rho(x, Ry), oracles.mat_scale(lam, rho(x, y)))
        return oracles.mat_add(rho(Rx, Ry), oracles.mat_scale(-1, oracles.mat_mul(RV, S)))
    return act


def descendent_table(A, R):
    n = A.dim
    table = oracles.table_from_algebra(A)
    out = {}
    for i in range(n):
        for j in range(n):
            for k in range(n):
                e = [oracles.basis(n, t) for t in (i, j, k)]
                v = oracles.descendent_bracket(table, n, R.matrix.tolist(), R.weight, *e)
                if any(v):
                    out[(i, j, k)] = v
    return out


def assert_matches(pointwise, values):
    for (idx, z), vec in pointwise.items():
        assert tuple(values[idx + (z,)]) == vec, (idx, z)


@pytest.mark.parametrize("n,m,p,dim", [(3, 3, 1, 9), (3, 3, 2, 27), (4, 2, 2, 48), (3, 1, 3, 27)])
def test_cochain_space_dims(n, m, p, dim):
    assert cochain_space_dim(n, m, p) == dim
    assert CochainSpace(n, m, p).dim == dim


def test_cochain_entries_round_trip():
    space = CochainSpace(3, 2, 2)
    c = Cochain.from_entries(space, [([(0, 2)], 1, [1, Fraction(-1, 2)])])
    assert c.entries() == [([(0, 2)], 1, [1, Fraction(-1, 2)])]
    assert c.evaluate([(2, 0)], 1) == (-1, Fraction(1, 2))
    with pytest.raises(InputError):
        Cochain.from_entries(space, [([(1, 0)], 1, [1, 0])])


@pytest.mark.parametrize("p", [1, 2, 3])
def test_trivial_rep_on_abelian_has_zero_differential(p):
    A, _ = catalog("abelian(3)")
    rep = trivial_rb_rep(A, RotaBaxterOperator(Matrix.zeros(3), 0), 2)
    assert coboundary(CochainSpace(3, 2, p), rep).is_zero()
    assert coboundary_RB(p, A, rep.operator, rep).is_zero()


def test_identity_one_cochain_on_a3():
    A, R = catalog("A3-rbm1(0,0,0,0)")
    ad = adjoint_rep(A, R)
    f = Cochain(CochainSpace(3, 3, 1), Matrix.identity(3))
    d = coboundary(f.space, ad)
    img = Cochain(d.target, d.apply(f.vector()))
    assert img.evaluate([(0, 1)], 2) == (2, 0, 0)
    closed, _ = is_cocycle(f, ad)
    assert not closed


@pytest.mark.parametrize("name", SQUARE_CASES)
@pytest.mark.parametrize("p", [1, 2])
def test_coboundary_matches_pointwise_oracle(name, p):
    A, R = catalog(name)
    ad = adjoint_rep(A, R)
    n = A.dim
    rng = random.Random(hash((name, p)) & 0xFFFF)
    f = random_cochain(CochainSpace(n, n, p), rng)
    d = coboundary(f.space, ad)
    expect = oracles.coboundary_pointwise(fraction_values(f), n, n, p, oracles.table_from_algebra(A), rho_from(ad))
    assert_matches(expect, image_values(d, f))


@pytest.mark.parametrize("name", SQUARE_CASES[:2])
@pytest.mark.parametrize("p", [1, 2])
def test_descendent_coboundary_matches_pointwise_oracle(name, p):
    A, R = catalog(name)
    ad = adjoint_rep(A, R)
    rng = random.Random(p)
    f = random_cochain(CochainSpace(3, 3, p, "descendent"), rng)
    d = coboundary_R(f.space, ad)
    expect = oracles.coboundary_pointwise(fraction_values(f), 3, 3, p, descendent_table(A, R), tilde_from(ad))
    assert_matches(expect, image_values(d, f))


def test_descendent_coboundary_special_cases():
    A = a3()
    zero = RotaBaxterOperator(Matrix.zeros(3), 0)
    for p in (1, 2):
        assert coboundary_R(CochainSpace(3, 3, p, "descendent"), adjoint_rep(A, zero)).is_zero()
    # R = I, weight -1: A_R = A and the tilde action vanishes, so d_R chi = -chi([x, y, z])
    I = RotaBaxterOperator(Matrix.identity(3), -1)
    ad = adjoint_rep(A, I)
    assert tilde_rho(ad.rho, ad.RV, I).is_zero()
    chi = random_cochain(CochainSpace(3, 3, 1, "descendent"), random.Random(5))
    d = coboundary_R(chi.space, ad)
    img = Cochain(d.target, d.apply(chi.vector()))
    assert img.evaluate([(0, 1)], 2) == tuple(-v for v in chi.evaluate([], 0))


@pytest.mark.parametrize("name", SQUARE_CASES[:2])
@pytest.mark.parametrize("p", [1, 2])
def test_delta_matches_brute_force_subsets(name, p):
    A, R = catalog(name)
    ad = adjoint_rep(A, R)
    f = random_cochain(CochainSpace(3, 3, p), random.Random(11 * p))
    d = delta_map(p, A, R, ad)
    expect = oracles.delta_pointwise(fraction_values(f), 3, 3, p, R.matrix.tolist(), ad.RV.tolist(), R.weight)
    assert_matches(expect, image_values(d, f))


def test_delta_degree_one_closed_form():
    A, R = catalog("A3-rbm1(1,2,3,4)")
    ad = adjoint_rep(A, R)
    f = random_cochain(CochainSpace(3, 3, 1), random.Random(2))
    F = Matrix.from_tensor(f.values).T              # column a is f(e_a)
    d = delta_map(1, A, R, ad)
    got = Matrix.from_tensor(d.apply(f.vector()).reshape(3, 3)).T
    assert got == F @ R.matrix - ad.RV @ F


@pytest.mark.parametrize("p", [1, 2, 3])
def test_delta_vanishes_for_identity_data(p):
    A = a3()
    I = RotaBaxterOperator(Matrix.identity(3), -1)
    assert delta_map(p, A, I, adjoint_rep(A, I)).is_zero()


@pytest.mark.parametrize("p", [1, 2])
def test_delta_weight_zero_zero_operator(p):
    A = a3()
    R = RotaBaxterOperator(Matrix.zeros(3), 0)
    RV = Matrix([[1, 2, 0], [0, 1, 0], [3, 0, 1]])
    rep = trivial_rb_rep(A, R, 3, RV)
    d = delta_map(p, A, R, rep).matrix
    # only lambda^0 survives, multiplying 2p - 2 insertions of R = 0:
    # delta f = -R_V f in degree 1 and delta = 0 above it
    f = random_cochain(CochainSpace(3, 3, p), random.Random(p))
    vals = f.values.to_fractions().reshape(-1, 3)
    img = d @ f.vector().tolist()
    if p == 1:
        assert list(img) == [-x for row in vals for x in (RV @ list(row))]
    else:
        assert d.is_zero()


@pytest.mark.parametrize("name", SQUARE_CASES)
def test_squares_vanish(name):
    A, R = catalog(name)
    ad = adjoint_rep(A, R)
    n = A.dim
    top = 3 if n == 3 else 2
    for p in range(1, top + 1):
        d1 = coboundary(CochainSpace(n, n, p), ad)
        d2 = coboundary(CochainSpace(n, n, p + 1), ad)
        assert (d2 @ d1).is_zero()
        r1 = coboundary_R(CochainSpace(n, n, p, "descendent"), ad)
        r2 = coboundary_R(CochainSpace(n, n, p + 1, "descendent"), ad)
        assert (r2 @ r1).is_zero()
        assert (coboundary_RB(p + 1, A, R, ad) @ coboundary_RB(p, A, R, ad)).is_zero()


@pytest.mark.parametrize("name", SQUARE_CASES)
@pytest.mark.parametrize("p", [1, 2])
def test_cochain_map_square_commutes(name, p):
    A, R = catalog(name)
    ad = adjoint_rep(A, R)
    n = A.dim
    d = coboundary(CochainSpace(n, n, p), ad)
    dR = coboundary_R(CochainSpace(n, n, p, "descendent"), ad)
    lhs = delta_map(p + 1, A, R, ad) @ d
    rhs = dR @ delta_map(p, A, R, ad)
    assert lhs.matrix == rhs.matrix


def test_single_insertion_reading_breaks_the_square():
    A, R = catalog("A3-rbm1(1,2,3,4)")
    ad = adjoint_rep(A, R)
    d = coboundary(CochainSpace(3, 3, 1), ad)
    dR = coboundary_R(CochainSpace(3, 3, 1, "descendent"), ad)
    lhs = delta_map(2, A, R, ad, insertion="prefix") @ d
    rhs = dR @ delta_map(1, A, R, ad, insertion="prefix")
    assert lhs.matrix != rhs.matrix


def test_rb_differential_degree_one_blocks():
    A, R = catalog("A3-rbm1(1,2,3,4)")
    ad = adjoint_rep(A, R)
    dRB = coboundary_RB(1, A, R, ad).matrix
    d = coboundary(CochainSpace(3, 3, 1), ad).matrix
    dl = delta_map(1, A, R, ad).matrix
    assert Matrix.from_tensor(dRB[: d.rows]) == d
    assert Matrix.from_tensor(dRB[d.rows:]) == dl.scale(-1)


ADJ_IDENTITY_TABLE = {
    "plain": [(1, 9, 6, 0, 6), (2, 27, 6, 3, 3), (3, 81, 24, 21, 3)],
    "descendent": [(1, 9, 6, 0, 6), (2, 27, 9, 3, 6), (3, 81, 24, 18, 6)],
    "rb": [(1, 9, 6, 0, 6), (2, 36, 12, 3, 9), (3, 108, 33, 24, 9)],
}


def _rows(table):
    return {k: [tuple(r.to_dict()[c] for c in "pCZBH") for r in rows] for k, rows in table.items()}


def test_cohomology_table_a3_identity_operator():
    A = a3()
    R = RotaBaxterOperator(Matrix.identity(3), -1)
    assert _rows(cohomology_dims(A, R, adjoint_rep(A, R), 3)) == ADJ_IDENTITY_TABLE


def test_cohomology_abelian_trivial():
    A, _ = catalog("abelian(3)")
    R = RotaBaxterOperator(Matrix.zeros(3), 0)
    table = cohomology_dims(A, R, trivial_rb_rep(A, R, 1), 3)
    assert [r.cohomology for r in table["plain"]] == [3, 9, 27]
    assert [r.cohomology for r in table["rb"]] == [3, 12, 36]
    one = cohomology_dims(A, R, trivial_rb_rep(A, R, 1), 1)
    assert all(len(rows) == 1 for rows in one.values())


def test_first_cohomology_is_kernel_dimension():
    A, R = catalog("A3-rbm1(1,2,3,4)")
    ad = adjoint_rep(A, R)
    d = coboundary(CochainSpace(3, 3, 1), ad).matrix
    assert cohomology_dims(A, R, ad, 1)["plain"][0].cohomology == 9 - rank(d)


def test_membership_zero_and_coboundaries():
    A, R = catalog("A3-rbm1(1,2,3,4)")
    ad = adjoint_rep(A, R)
    z = Cochain.zero(CochainSpace(3, 3, 2))
    assert is_cocycle(z, ad)[0] and is_coboundary(z, ad)[0]
    f = random_cochain(CochainSpace(3, 3, 1), random.Random(9))
    d = coboundary(f.space, ad)
    df = Cochain(d.target, d.apply(f.vector()))
    ok, witness = is_coboundary(df, ad)
    assert ok
    assert d.apply(QTensor.from_values(list(witness))) == df.vector()


def test_rb_membership():
    A, R = catalog("A3-rbm1(1,2,3,4)")
    ad = adjoint_rep(A, R)
    f = random_cochain(CochainSpace(3, 3, 1), random.Random(4))
    d = coboundary_RB(1, A, R, ad)
    c = RBCochain.from_vector(3, 3, 2, d.apply(f.vector()).tolist())
    assert is_cocycle(c, ad)[0]
    assert is_coboundary(c, ad)[0]


@settings(max_examples=15, deadline=None)
@given(seed=st.integers(0, 10**6), p=st.integers(1, 2))
def test_random_rb_cochains_square_to_zero(seed, p):
    A, R = catalog("A3-rbm1(1,2,3,4)")
    ad = adjoint_rep(A, R)
    rng = random.Random(seed)
    d1 = coboundary_RB(p, A, R, ad)
    vec = QTensor.from_values([Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(d1.matrix.cols)])
    d2 = coboundary_RB(p + 1, A, R, ad)
    assert d2.apply(d1.apply(vec)).is_zero()
