"""Compare the compiled and pure-Python exact row reduction kernels.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--seed 0]

Workloads are random small-entry integer matrices and the coboundary
matrices that dominate a cohomology table.  Both backends must agree on
rank and pivots; the script exits nonzero if they do not.  Dense random
matrices of full rank outgrow int64 during fraction-free elimination, so the
compiled path hands them back to Python and the timings match.
"""

import argparse
import sys
import time

import numpy as np

from rb3lie import catalog
from rb3lie._backend import HAVE_COMPILED, use_backend
from rb3lie.cohomology import CochainSpace, coboundary, coboundary_RB
from rb3lie.linalg import Matrix, rref
from rb3lie.representation import adjoint_rep


def workloads(seed):
    rng = np.random.default_rng(seed)
    out = []
    for m, n in ((40, 40), (80, 120), (160, 160)):
        out.append((f"random {m}x{n}", Matrix(rng.integers(-3, 4, size=(m, n)).tolist())))
    sparse = rng.integers(-1, 2, size=(300, 300)) * (rng.random((300, 300)) < 0.01)
    out.append(("sparse 300x300", Matrix(sparse.tolist())))
    A, R = catalog("A3-rbm1(1,2,3,4)")
    rep = adjoint_rep(A, R)
    out.append(("A3 adjoint d^3", coboundary(CochainSpace(3, 3, 3), rep).matrix))
    out.append(("A3 adjoint d_RB^3", coboundary_RB(3, A, R, rep).matrix))
    N, RN = catalog("N4")
    out.append(("N4 adjoint d^2", coboundary(CochainSpace(4, 4, 2), adjoint_rep(N, RN)).matrix))
    return out


def timed(fn, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if not HAVE_COMPILED:
        print("compiled kernel not built; only the Python backend is available")
    print(f"{'workload':<22} {'shape':>10} {'rank':>5} {'python s':>10} {'compiled s':>11} {'speedup':>8}")
    mismatch = False
    for name, mat in workloads(args.seed):
        with use_backend("python"):
            tp, (_, rk_p, piv_p) = timed(lambda: rref(mat), args.repeat)
        if HAVE_COMPILED:
            with use_backend("compiled"):
                tc, (_, rk_c, piv_c) = timed(lambda: rref(mat), args.repeat)
            mismatch |= (rk_p, list(piv_p)) != (rk_c, list(piv_c))
            speed = f"{tp / tc:8.1f}x" if tc > 0 else "     inf"
            comp = f"{tc:11.4f}"
        else:
            comp, speed = f"{'-':>11}", f"{'-':>8}"
        shape = f"{mat.rows}x{mat.cols}"
        print(f"{name:<22} {shape:>10} {rk_p:>5} {tp:10.4f} {comp} {speed}")
    if mismatch:
        print("backends disagree", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
