"""Instance generators shared by the structure, deformation and acceptance tests."""

import random
from fractions import Fraction
from itertools import combinations, permutations

import numpy as np

from oracles import perm_sign
from rb3lie.algebra import RotaBaxterOperator, catalog_instances, validate_rb
from rb3lie.cohomology import Cochain, CochainSpace, RBCochain, coboundary_RB, pair_basis
from rb3lie.linalg import Matrix, QTensor, kernel_basis
from rb3lie.representation import adjoint_rep, dual_rep, trivial_rb_rep, validate_representation
from rb3lie.structures import MatchedPairData, double_pair, semidirect_pair


def rand_q(rng, lo=-4, hi=4, den=3):
    return Fraction(rng.randint(lo, hi), rng.randint(1, den))


def valid_matched_pairs():
    out = []
    for name, A, R in catalog_instances():
        ad = adjoint_rep(A, R)
        out.append((f"double {name}", double_pair(A, R)))
        out.append((f"semidirect ad {name}", semidirect_pair(ad)))
        out.append((f"semidirect ad* {name}", semidirect_pair(dual_rep(ad))))
    return out


def perturb_matched_pair(mp, rng, attempts=50):
    """Random change to R_B or to one action entry that breaks a factor condition."""
    for _ in range(attempts):
        if rng.random() < 0.5:
            M = mp.RB.matrix.to_fractions().copy()
            i, j = rng.randrange(M.shape[0]), rng.randrange(M.shape[1])
            M[i, j] += rng.choice([1, -1, Fraction(1, 2), 2])
            RB = RotaBaxterOperator(Matrix(M.tolist()), mp.weight)
            if not validate_rb(mp.B, RB).ok or rng.random() < 0.3:
                return MatchedPairData(mp.A, mp.B, mp.RA, RB, mp.rho, mp.varrho)
        else:
            r = mp.rho.to_fractions().copy()
            i, j = sorted(rng.sample(range(r.shape[0]), 2))
            u, v = rng.randrange(r.shape[2]), rng.randrange(r.shape[3])
            d = rng.choice([1, -1, 2])
            r[i, j, u, v] += d
            r[j, i, u, v] -= d
            cand = MatchedPairData(mp.A, mp.B, mp.RA, mp.RB, QTensor.from_values(r), mp.varrho)
            if not validate_representation(cand.rep_on_B().base).ok:
                return cand
    raise RuntimeError("could not perturb")


def skew_psi(n, m, values):
    """Degree-2 cochain ``psi(e_i ^ e_j, e_k)`` from values on ``i < j < k`` (dict of length-m vectors)."""
    arr = np.empty(CochainSpace(n, m, 2).shape, dtype=object)
    arr[...] = Fraction(0)
    index = {pq: s for s, pq in enumerate(pair_basis(n))}
    for key, vec in values.items():
        for perm in permutations(range(3)):
            a, b, c = (key[t] for t in perm)
            if a < b:
                arr[index[(a, b)], c] = [perm_sign(perm) * v for v in vec]
    return Cochain(CochainSpace(n, m, 2), QTensor.from_values(arr))


def random_skew_psi(n, m, rng):
    return skew_psi(n, m, {t: [rand_q(rng) for _ in range(m)] for t in combinations(range(n), 3)})


def random_chi(n, m, rng):
    return Cochain.from_vector(CochainSpace(n, m, 1), [rand_q(rng) for _ in range(n * m)])


def skew_rb2_cocycle_basis(A, R, rep):
    """Basis of degree-2 Rota-Baxter cocycles ``(f, g)`` whose ``f`` is totally skew."""
    n, m = A.dim, rep.vdim
    d = coboundary_RB(2, A, R, rep)
    params = []
    for t in combinations(range(n), 3):
        for v in range(m):
            vec = [Fraction(int(v == w)) for w in range(m)]
            params.append(RBCochain(skew_psi(n, m, {t: vec}), Cochain.zero(CochainSpace(n, m, 1, "descendent"))))
    for a in range(n * m):
        e = [Fraction(int(a == b)) for b in range(n * m)]
        params.append(RBCochain(Cochain.zero(CochainSpace(n, m, 2)),
                                Cochain.from_vector(CochainSpace(n, m, 1, "descendent"), e)))
    cols = [d.apply(p.vector()).tolist() for p in params]
    M = Matrix([[cols[c][r] for c in range(len(cols))] for r in range(len(cols[0]))])
    out = []
    for coeffs in kernel_basis(M):
        vec = None
        for c, p in zip(coeffs, params):
            if c:
                v = p.vector().scale(c)
                vec = v if vec is None else vec + v
        out.append(RBCochain.from_vector(n, m, 2, vec))
    return out


def extension_cocycle_basis(A, R, RV):
    """Pairs ``(psi, chi)`` with ``psi`` totally skew and ``d_RB(psi, chi) = 0`` for the zero action."""
    n, m = A.dim, RV.rows
    rep = trivial_rb_rep(A, R, m, RV)
    return [(c.f, Cochain(CochainSpace(n, m, 1), c.g.values)) for c in skew_rb2_cocycle_basis(A, R, rep)]


def random_rb_combination(basis, rng):
    vec = None
    for c in basis:
        v = c.vector().scale(rand_q(rng))
        vec = v if vec is None else vec + v
    return vec


def coboundary_extension_data(A, R, RV, rng):
    n, m = A.dim, RV.rows
    rep = trivial_rb_rep(A, R, m, RV)
    f = random_chi(n, m, rng)
    img = coboundary_RB(1, A, R, rep).apply(f.vector())
    rb = RBCochain.from_vector(n, m, 2, img)
    return f, rb.f, Cochain(CochainSpace(n, m, 1), rb.g.values)


def combine(basis, rng):
    psi, chi = None, None
    for p, c in basis:
        q = rand_q(rng)
        psi = p.scale(q) if psi is None else psi + p.scale(q)
        chi = c.scale(q) if chi is None else chi + c.scale(q)
    return psi, chi
