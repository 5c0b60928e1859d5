"""Matched pairs, Manin triples, Nijenhuis and O-operators, central extensions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import (
    RotaBaxterOperator,
    ThreeLieAlgebra,
    ValidationReport,
    Violation,
    _report_nonzero,
    apply_last,
    descendent_tensor,
    transformed,
    validate_3lie,
    validate_rb,
)
from .cohomology import (
    Cochain,
    CochainSpace,
    RBCochain,
    coboundary_RB,
    pair_basis,
)
from .errors import InputError, PreconditionError, SkewSymmetryError
from .linalg import Matrix, QTensor, block, block_diag, einsum, rank
from .representation import (
    RBRepresentation,
    Representation,
    _pair_transform,
    adjoint_rep,
    bar_rho,
    dual_rep,
    validate_rb_representation,
    validate_representation,
)


def _embed(parts, total_shape):
    """Place QTensor blocks into one zero tensor: ``parts`` is ``[(slices, tensor)]``."""
    den = 1
    for _, t in parts:
        den = den * t.den // np.gcd(den, t.den)
    out = np.zeros(total_shape, dtype=object)
    out[...] = 0
    for sl, t in parts:
        out[sl] += t.num.astype(object) * (den // t.den)
    return QTensor(out, den)


def _skew_mixed(S: QTensor):
    """Skew-extend a tensor defined on ``[u, v, w]`` with the odd argument last."""
    return S - S.transpose(0, 2, 1, 3) + S.transpose(2, 0, 1, 3)


# matched pairs --------------------------------------------------------------

@dataclass(frozen=True)
class MatchedPairData:
    """Two Rota-Baxter 3-Lie algebras acting on each other.

    ``rho[i, j]`` (``i, j`` indexing A) is the matrix by which the pair
    ``e_i ^ e_j`` of A acts on B; ``varrho`` is the action of pairs of B on
    A.  In the bowtie bracket these enter as ``[x, y, c] = rho(x, y) c`` and
    ``[a, b, z] = varrho(a, b) z``.
    """

    A: ThreeLieAlgebra
    B: ThreeLieAlgebra
    RA: RotaBaxterOperator
    RB: RotaBaxterOperator
    rho: QTensor
    varrho: QTensor

    def __post_init__(self):
        nA, nB = self.A.dim, self.B.dim
        if self.rho.shape != (nA, nA, nB, nB):
            raise InputError(f"rho must have shape {(nA, nA, nB, nB)}, got {self.rho.shape}")
        if self.varrho.shape != (nB, nB, nA, nA):
            raise InputError(f"varrho must have shape {(nB, nB, nA, nA)}, got {self.varrho.shape}")
        if self.RA.weight != self.RB.weight:
            raise InputError("both operators must have the same weight")
        if self.RA.dim != nA or self.RB.dim != nB:
            raise InputError("operator sizes do not match the algebras")

    @property
    def weight(self):
        return self.RA.weight

    def rep_on_B(self):
        return RBRepresentation(Representation(self.A, self.rho), self.RB.matrix, self.RA)

    def rep_on_A(self):
        return RBRepresentation(Representation(self.B, self.varrho), self.RA.matrix, self.RB)


def bowtie_tensor(mp: MatchedPairData) -> QTensor:
    nA, nB = mp.A.dim, mp.B.dim
    N = nA + nB
    a, b = slice(0, nA), slice(nA, N)
    S_rho = _embed([((a, a, b, b), mp.rho.transpose(0, 1, 3, 2))], (N,) * 4)
    S_var = _embed([((b, b, a, a), mp.varrho.transpose(0, 1, 3, 2))], (N,) * 4)
    pure = _embed([((a, a, a, a), mp.A.tensor), ((b, b, b, b), mp.B.tensor)], (N,) * 4)
    return pure + _skew_mixed(S_rho) + _skew_mixed(S_var)


def bowtie(mp: MatchedPairData):
    """Algebra on ``A + B`` with the matched-pair bracket, and ``R_A + R_B``."""
    N = mp.A.dim + mp.B.dim
    op = RotaBaxterOperator(block_diag(mp.RA.matrix, mp.RB.matrix), mp.weight)
    return ThreeLieAlgebra(N, bowtie_tensor(mp)), op


def validate_matched_pair(mp: MatchedPairData) -> ValidationReport:
    """Check every condition of a matched pair of Rota-Baxter 3-Lie algebras.

    Covers: both factors are Rota-Baxter 3-Lie algebras, both actions are
    representations, the bowtie bracket satisfies the fundamental identity,
    and each action is compatible with the operators in the pattern of a
    Rota-Baxter representation.
    """
    report = ValidationReport("matched pair")
    for label, A, R in (("A", mp.A, mp.RA), ("B", mp.B, mp.RB)):
        for v in validate_3lie(A).violations + validate_rb(A, R).violations:
            report.violations.append(Violation(f"{label}: {v.check}", v.indices))
    on_B, on_A = mp.rep_on_B(), mp.rep_on_A()
    checks = (
        ("rho", validate_representation(on_B.base)),
        ("varrho", validate_representation(on_A.base)),
        ("rho with R_B", validate_rb_representation(on_B)),
        ("varrho with R_A", validate_rb_representation(on_A)),
    )
    for label, rep in checks:
        for v in rep.violations:
            report.violations.append(Violation(f"{label}: {v.check}", v.indices))
    D, _ = bowtie(mp)
    for v in validate_3lie(D).violations:
        report.violations.append(Violation(f"bowtie: {v.check}", v.indices))
    return report


def matched_pair_verdicts(mp: MatchedPairData):
    """``(matched-pair verdict, whether the bowtie is a Rota-Baxter 3-Lie algebra)``; these agree."""
    D, op = bowtie(mp)
    return validate_matched_pair(mp).ok, validate_3lie(D).ok and validate_rb(D, op).ok


def derived_matched_pair(mp: MatchedPairData, check=True) -> MatchedPairData:
    """Replace both algebras by their descendents and both actions by their bar-induced versions."""
    if check and not validate_matched_pair(mp):
        raise PreconditionError("input is not a matched pair of Rota-Baxter 3-Lie algebras")
    AR = ThreeLieAlgebra(mp.A.dim, descendent_tensor(mp.A.tensor, mp.RA.matrix, mp.weight))
    BR = ThreeLieAlgebra(mp.B.dim, descendent_tensor(mp.B.tensor, mp.RB.matrix, mp.weight))
    return MatchedPairData(
        AR, BR, mp.RA, mp.RB,
        bar_rho(mp.rho, mp.RB.matrix, mp.RA),
        bar_rho(mp.varrho, mp.RA.matrix, mp.RB),
    )


def direct_sum_pair(A, RA, B, RB):
    """Matched pair with both actions zero."""
    return MatchedPairData(
        A, B, RA, RB,
        QTensor.zeros((A.dim, A.dim, B.dim, B.dim)),
        QTensor.zeros((B.dim, B.dim, A.dim, A.dim)),
    )


def semidirect_pair(rbrep: RBRepresentation):
    """``A`` acting on the abelian algebra ``V`` through ``rho``, with ``R_B = R_V``."""
    A, m = rbrep.algebra, rbrep.vdim
    return MatchedPairData(
        A, ThreeLieAlgebra.abelian(m), rbrep.operator,
        RotaBaxterOperator(rbrep.RV, rbrep.weight),
        rbrep.rho, QTensor.zeros((m, m, A.dim, A.dim)),
    )


def double_pair(A: ThreeLieAlgebra, R: RotaBaxterOperator, Astar: ThreeLieAlgebra | None = None):
    """``(A, A*, ad*, coad*, R, -lambda I - R^T)``.

    ``A*`` carries the bracket ``Astar`` (abelian by default).  A acts on
    ``A*`` by the coadjoint action of A, and ``A*`` acts on A by the
    coadjoint action of ``A*``, i.e. minus the transpose of its adjoint.
    """
    n = A.dim
    Astar = ThreeLieAlgebra.abelian(n) if Astar is None else Astar
    if Astar.dim != n:
        raise InputError("dual algebra must have the same dimension")
    Rstar = Matrix.from_tensor(Matrix.identity(n).scale(-R.weight) - R.matrix.T)
    RB = RotaBaxterOperator(Rstar, R.weight)
    ad_star = dual_rep(adjoint_rep(A, R)).rho
    coad_star = -Astar.tensor                         # varrho(xi, eta)[l, k] = -C*[xi, eta, l, k]
    return MatchedPairData(A, Astar, R, RB, ad_star, coad_star)


def pairing_form(n):
    """``B(x + xi, y + eta) = <x, eta> + <xi, y>`` on ``A + A*``."""
    I, Z = Matrix.identity(n), Matrix.zeros(n)
    return block([[Z, I], [I, Z]])


# Manin triples --------------------------------------------------------------

def validate_invariant_form(D: ThreeLieAlgebra, R: RotaBaxterOperator, form: Matrix,
                            nondegenerate=True) -> ValidationReport:
    """Symmetry, nondegeneracy and both invariance identities of a bilinear form."""
    report = ValidationReport("invariant form")
    N = D.dim
    if form.shape != (N, N):
        raise InputError(f"form must be {N}x{N}")
    if form != form.T:
        report.violations.append(Violation("symmetry", ()))
    if nondegenerate and rank(form) < N:
        report.violations.append(Violation("nondegeneracy", ()))
    # B([x1,x2,x3], x4) + B([x1,x2,x4], x3) = 0
    Bb = einsum("abcl,ld->abcd", D.tensor, form)
    inv = Bb + Bb.transpose(0, 1, 3, 2)
    _report_nonzero(report, "bracket invariance", inv.reshape(N, N, N, N, 1),
                    lambda t: t[0] < t[1] and t[2] <= t[3])
    # B(Rx, y) + B(x, Ry) + lambda B(x, y) = 0
    opinv = R.matrix.T @ form + form @ R.matrix + form.scale(R.weight)
    _report_nonzero(report, "operator invariance", opinv.reshape(N, N, 1), lambda t: t[0] <= t[1])
    return report


def validate_manin_triple(D: ThreeLieAlgebra, R: RotaBaxterOperator, n1: int, form: Matrix) -> ValidationReport:
    """Check a Manin triple on ``D = A1 + A2`` with ``A1`` the first ``n1`` coordinates.

    Requires ``(D, R)`` to be a Rota-Baxter 3-Lie algebra with a symmetric,
    nondegenerate invariant form, both parts to be subalgebras preserved by
    ``R``, and ``P1[x1, x2, a1] = 0`` and ``P2[a1, a2, x1] = 0``.
    """
    report = ValidationReport("Manin triple")
    N = D.dim
    if not 0 <= n1 <= N:
        raise InputError("split point out of range")
    for v in validate_3lie(D).violations + validate_rb(D, R).violations:
        report.violations.append(v)
    report.extend(validate_invariant_form(D, R, form))
    C = D.tensor.num
    p1, p2 = slice(0, n1), slice(n1, N)
    checks = (
        ("A1 closed under the bracket", C[p1, p1, p1][..., p2]),
        ("A2 closed under the bracket", C[p2, p2, p2][..., p1]),
        ("P1[x1,x2,a1] = 0", C[p1, p1, p2][..., p1]),
        ("P2[a1,a2,x1] = 0", C[p2, p2, p1][..., p2]),
    )
    for label, block_ in checks:
        if np.any(block_):
            report.violations.append(Violation(label, ()))
    Rm = R.matrix.num
    if np.any(Rm[p2, p1]) or np.any(Rm[p1, p2]):
        report.violations.append(Violation("operator preserves both parts", ()))
    return report


def double_algebra(A, R, Astar=None):
    """Bowtie of :func:`double_pair` with the pairing form."""
    mp = double_pair(A, R, Astar)
    D, op = bowtie(mp)
    return D, op, pairing_form(A.dim), mp


# Nijenhuis operators ----------------------------------------------------------

def _nijenhuis_pieces(C, N):
    two = transformed(C, N, N, None) + transformed(C, None, N, N) + transformed(C, N, None, N)
    one = transformed(C, N, None, None) + transformed(C, None, N, None) + transformed(C, None, None, N)
    return two, one


def validate_nijenhuis(A: ThreeLieAlgebra, R: RotaBaxterOperator, N: Matrix) -> ValidationReport:
    """Check ``NR = RN`` and the Nijenhuis identity on basis triples."""
    N = N if isinstance(N, Matrix) else Matrix(N)
    if N.shape != (A.dim, A.dim):
        raise InputError("N must be square of the algebra's dimension")
    report = ValidationReport("Nijenhuis operator")
    if N @ R.matrix != R.matrix @ N:
        report.violations.append(Violation("NR = RN", ()))
    C = A.tensor
    two, one = _nijenhuis_pieces(C, N)
    N2 = N @ N
    residual = (
        transformed(C, N, N, N)
        - apply_last(N, two) + apply_last(N2, one) - apply_last(N2 @ N, C)
    )
    return _report_nonzero(report, "Nijenhuis identity", residual, lambda t: t[0] < t[1] < t[2])


def deformed_bracket_N(A: ThreeLieAlgebra, N: Matrix) -> ThreeLieAlgebra:
    """Bracket ``[x,y,z]_N`` deformed by ``N``."""
    N = N if isinstance(N, Matrix) else Matrix(N)
    C = A.tensor
    two, one = _nijenhuis_pieces(C, N)
    return ThreeLieAlgebra(A.dim, two - apply_last(N, one) + apply_last(N @ N, C))


# O-operators ------------------------------------------------------------------

def validate_o_operator(K: Matrix, rbrep: RBRepresentation, R: RotaBaxterOperator | None = None) -> ValidationReport:
    """Check the O-operator identity on basis triples of V and ``K R_V = R K``."""
    R = rbrep.operator if R is None else R
    K = K if isinstance(K, Matrix) else Matrix(K)
    n, m = rbrep.algebra.dim, rbrep.vdim
    if K.shape != (n, m):
        raise InputError(f"K must be {n}x{m} (columns are images of the basis of V)")
    report = ValidationReport("O-operator")
    lhs = transformed(rbrep.algebra.tensor, K, K, K)
    rhs = apply_last(K, induced_bracket_tensor(K, rbrep))
    _report_nonzero(report, "O-operator identity", lhs - rhs, lambda t: t[0] < t[1] < t[2])
    if K @ rbrep.RV != R.matrix @ K:
        report.violations.append(Violation("K R_V = R K", ()))
    return report


def induced_bracket_tensor(K: Matrix, rbrep: RBRepresentation) -> QTensor:
    """``[u,v,w]_K = rho(Ku,Kv)w + rho(Kv,Kw)u + rho(Kw,Ku)v`` as a structure tensor on V."""
    rk = _pair_transform(rbrep.rho, K, K)        # rk[a, b, l, c] = (rho(Ke_a, Ke_b))[l, c]
    S = rk.transpose(0, 1, 3, 2)                 # S[a, b, c, l]
    return S + S.transpose(2, 0, 1, 3) + S.transpose(1, 2, 0, 3)


def induced_bracket_K(K: Matrix, rbrep: RBRepresentation):
    """``(V, [,,]_K)`` with operator ``R_V`` of the same weight."""
    K = K if isinstance(K, Matrix) else Matrix(K)
    VK = ThreeLieAlgebra(rbrep.vdim, induced_bracket_tensor(K, rbrep))
    return VK, RotaBaxterOperator(rbrep.RV, rbrep.weight)


def induced_rep_K(K: Matrix, rbrep: RBRepresentation, R: RotaBaxterOperator | None = None) -> RBRepresentation:
    """Representation of ``(V, [,,]_K, R_V)`` on A with ``R_A = R``.

    ``varrho_K(u, v) x = [Ku, Kv, x] - K(rho(Kv, x) u + rho(x, Ku) v)``.
    """
    R = rbrep.operator if R is None else R
    K = K if isinstance(K, Matrix) else Matrix(K)
    rho = rbrep.rho
    first = transformed(rbrep.algebra.tensor, K, K, None)          # [a, b, x, l]
    rho_Kv_x = einsum("pqkw,pb->bqkw", rho, K)                     # rho(Ke_b, e_x)[k, w]
    rho_x_Ku = einsum("qpkw,pa->aqkw", rho, K)                     # rho(e_x, Ke_a)[k, w]
    # K(rho(Kv, x) u): component l for u = e_a, v = e_b, x
    t1 = einsum("lk,bxka->abxl", K, rho_Kv_x)
    t2 = einsum("lk,axkb->abxl", K, rho_x_Ku)
    var = (first - t1 - t2).transpose(0, 1, 3, 2)                  # [a, b, l, x]
    VK, RV = induced_bracket_K(K, rbrep)
    return RBRepresentation(Representation(VK, var), R.matrix, RV)


# central extensions -------------------------------------------------------------

@dataclass(frozen=True)
class CentralExtension:
    algebra: ThreeLieAlgebra
    operator: RotaBaxterOperator
    base_dim: int
    vdim: int


def _skew_values(psi: Cochain, n, m):
    """Full ``(n, n, n, m)`` tensor ``psi(e_i, e_j, e_k)`` from a degree-2 cochain."""
    vals = psi.values.num
    out = np.zeros((n, n, n, m), dtype=vals.dtype)
    for s, (i, j) in enumerate(pair_basis(n)):
        out[i, j] = vals[s]
        out[j, i] = -vals[s]
    return QTensor(out, psi.values.den)


def extension_trilinear(psi: Cochain, n, m):
    """``psi`` as a trilinear map; raises if it is not totally skew."""
    if psi.space.degree != 2 or (psi.space.n, psi.space.m) != (n, m):
        raise InputError("psi must be a degree-2 cochain on A with values in V")
    T = _skew_values(psi, n, m)
    if not np.array_equal(T.num, -T.num.transpose(0, 2, 1, 3)):
        raise SkewSymmetryError("psi must be totally skew-symmetric")
    return T


def central_extension(A: ThreeLieAlgebra, R: RotaBaxterOperator, RV: Matrix, psi: Cochain, chi: Cochain,
                      rep: RBRepresentation | None = None) -> CentralExtension:
    """``A + V`` with bracket ``[x,y,z] + psi(x,y,z)`` and ``R_chi(x+a) = R x + R_V a + chi(x)``."""
    n = A.dim
    RV = RV if isinstance(RV, Matrix) else Matrix(RV)
    m = RV.rows
    if rep is not None and not rep.rho.is_zero():
        raise PreconditionError("central extensions need the trivial representation on V")
    if chi.space.degree != 1 or (chi.space.n, chi.space.m) != (n, m):
        raise InputError("chi must be a degree-1 cochain on A with values in V")
    T = extension_trilinear(psi, n, m)
    N = n + m
    a, v = slice(0, n), slice(n, N)
    tensor = _embed([((a, a, a, a), A.tensor), ((a, a, a, v), T)], (N,) * 4)
    chi_mat = Matrix.from_tensor(chi.values.transpose(1, 0))         # m x n: column x is chi(e_x)
    op = block([[R.matrix, Matrix.zeros(n, m)], [chi_mat, RV]])
    return CentralExtension(ThreeLieAlgebra(N, tensor), RotaBaxterOperator(op, R.weight), n, m)


def extension_is_valid(ext: CentralExtension) -> bool:
    return validate_3lie(ext.algebra).ok and validate_rb(ext.algebra, ext.operator).ok


def extension_cocycle_verdict(A, R, RV, psi: Cochain, chi: Cochain) -> bool:
    """Whether ``(psi, chi)`` is a 2-cocycle with trivial coefficients ``(V, R_V)``."""
    from .representation import trivial_rb_rep
    RV = RV if isinstance(RV, Matrix) else Matrix(RV)
    rep = trivial_rb_rep(A, R, RV.rows, RV)
    chi_desc = Cochain(CochainSpace(A.dim, RV.rows, 1, "descendent"), chi.values)
    c = RBCochain(psi, chi_desc)
    d = coboundary_RB(2, A, R, rep)
    return d.apply(c.vector()).is_zero()


def extensions_equivalent(ext1: CentralExtension, ext2: CentralExtension, phi: Matrix) -> bool:
    """Whether ``phi`` is an equivalence of central extensions.

    ``phi`` must be a homomorphism of Rota-Baxter 3-Lie algebras that is the
    identity on V and induces the identity on the quotient A.
    """
    n, m = ext1.base_dim, ext1.vdim
    if (ext2.base_dim, ext2.vdim) != (n, m):
        return False
    N = n + m
    phi = phi if isinstance(phi, Matrix) else Matrix(phi)
    if phi.shape != (N, N):
        raise InputError(f"phi must be {N}x{N}")
    diff = (phi - Matrix.identity(N)).to_fractions()
    if np.any(diff[:, n:]) or np.any(diff[:n, :]):
        return False
    if phi @ ext1.operator.matrix != ext2.operator.matrix @ phi:
        return False
    lhs = apply_last(phi, ext1.algebra.tensor)
    rhs = transformed(ext2.algebra.tensor, phi, phi, phi)
    return lhs == rhs


def shear(n, m, f: Cochain) -> Matrix:
    """``phi(x + a) = x + a - f(x)``, mapping the extension of ``(psi, chi)`` to that of ``(psi, chi) + d_RB f``."""
    F = Matrix.from_tensor(f.values.transpose(1, 0))
    return block([[Matrix.identity(n), Matrix.zeros(n, m)], [-F, Matrix.identity(m)]])


def representation_from_section(ext: CentralExtension, section: Matrix) -> RBRepresentation:
    """Representation of ``(A, R)`` on V read off a linear section of the projection.

    ``rho(x, y) v = [s(x), s(y), v]`` and ``R_V`` is the restriction of the
    extension operator to V.
    """
    n, m = ext.base_dim, ext.vdim
    N = n + m
    section = section if isinstance(section, Matrix) else Matrix(section)
    if section.shape != (N, n):
        raise InputError(f"section must be {N}x{n}")
    if Matrix.from_tensor(section[:n, :]) != Matrix.identity(n):
        raise PreconditionError("section does not split the projection")
    iota = Matrix.from_tensor(
        QTensor(np.vstack([np.zeros((n, m), dtype=np.int64), np.eye(m, dtype=np.int64)]))
    )
    full = transformed(ext.algebra.tensor, section, section, iota)      # [i, j, v, l]
    rho = QTensor(full.num[:, :, :, n:], full.den).transpose(0, 1, 3, 2)
    RV = Matrix.from_tensor(ext.operator.matrix[n:, n:])
    A = ThreeLieAlgebra(n, QTensor(ext.algebra.tensor.num[:n, :n, :n, :n], ext.algebra.tensor.den))
    R = RotaBaxterOperator(Matrix.from_tensor(ext.operator.matrix[:n, :n]), ext.operator.weight)
    return RBRepresentation(Representation(A, rho), RV, R)
