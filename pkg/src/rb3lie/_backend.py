"""Kernel selection: compiled ``int64`` kernel when importable, Python otherwise.

Set ``RB3_PURE_PYTHON=1`` before import to force the fallback.  Results are
identical on both paths; the compiled one additionally hands work back to
the Python kernel when ``int64`` would overflow.
"""

import os
from contextlib import contextmanager

import numpy as np

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

HAVE_COMPILED = _ckernels is not None
_INT64_SAFE = 2**62

_active = "python" if (not HAVE_COMPILED or os.environ.get("RB3_PURE_PYTHON")) else "compiled"


def active_backend():
    return _active


@contextmanager
def use_backend(name):
    """Temporarily switch kernel backend (``"compiled"`` or ``"python"``)."""
    global _active
    if name not in ("compiled", "python"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "compiled" and not HAVE_COMPILED:
        raise RuntimeError("compiled kernels are not built")
    previous, _active = _active, name
    try:
        yield
    finally:
        _active = previous


def rref_integer(num):
    """Row-reduce a 2-D integer ndarray; return ``(rows, pivots)``.

    ``rows`` is a list of the ``rank`` pivot rows as Python int lists.
    """
    m, n = num.shape
    if m == 0 or n == 0:
        return [], []
    if _active == "compiled":
        if num.dtype == np.int64:
            fits = True
            work = np.array(num, dtype=np.int64, order="C", copy=True)
        else:
            flat = num.ravel()
            fits = all(-_INT64_SAFE < int(x) < _INT64_SAFE for x in flat)
            work = np.array(num, dtype=np.int64, order="C") if fits else None
        if fits:
            try:
                pivots = _ckernels.rref_int64(work)
            except OverflowError:
                pass
            else:
                return [[int(x) for x in work[i]] for i in range(len(pivots))], pivots
    rows = [[int(x) for x in r] for r in num]
    pivots = _pykernels.rref_int(rows)
    return rows[: len(pivots)], pivots
