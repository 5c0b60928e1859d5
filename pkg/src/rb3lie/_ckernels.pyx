# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled integer row reduction.

Same algorithm as :mod:`rb3lie._pykernels` on fixed-width ``int64`` rows;
every multiply/subtract is overflow checked and an :class:`OverflowError`
tells the caller to redo the work with Python integers.
"""

from libc.stdint cimport int64_t, INT64_MIN

cdef extern from *:
    """
    static inline int rb3_mul_ovf(int64_t a, int64_t b, int64_t *r) {
        return __builtin_mul_overflow(a, b, r);
    }
    static inline int rb3_sub_ovf(int64_t a, int64_t b, int64_t *r) {
        return __builtin_sub_overflow(a, b, r);
    }
    """
    int rb3_mul_ovf(int64_t a, int64_t b, int64_t *r) nogil
    int rb3_sub_ovf(int64_t a, int64_t b, int64_t *r) nogil


cdef inline int64_t _gcd(int64_t a, int64_t b) noexcept nogil:
    cdef int64_t t
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        t = a % b
        a = b
        b = t
    return a


cdef int _normalize_row(int64_t[:, ::1] a, Py_ssize_t i, Py_ssize_t pivot_col) noexcept nogil:
    # divide row i by its content; make the pivot entry positive if requested
    cdef Py_ssize_t j, n = a.shape[1]
    cdef int64_t g = 0
    for j in range(n):
        if a[i, j] == INT64_MIN:
            return -1
        if a[i, j] != 0:
            g = _gcd(g, a[i, j])
            if g == 1:
                break
    if pivot_col >= 0 and a[i, pivot_col] < 0:
        g = -g
    if g != 0 and g != 1:
        for j in range(n):
            a[i, j] = a[i, j] // g
    return 0


def rref_int64(int64_t[:, ::1] a):
    """Reduce ``a`` in place to integer row-echelon form with cleared columns.

    On return the first ``rank`` rows are the pivot rows (each pivot entry is
    positive and is the only nonzero in its column), the remaining rows are
    zero.  Returns the list of pivot columns.
    """
    cdef Py_ssize_t m = a.shape[0], n = a.shape[1]
    cdef Py_ssize_t r = 0, c, i, j, p
    cdef int64_t pv, f, g, pv_g, f_g, t1, t2, tmp
    pivots = []
    for c in range(n):
        if r == m:
            break
        p = -1
        for i in range(r, m):
            if a[i, c] != 0:
                p = i
                break
        if p < 0:
            continue
        if p != r:
            for j in range(n):
                tmp = a[p, j]
                a[p, j] = a[r, j]
                a[r, j] = tmp
        if _normalize_row(a, r, c) < 0:
            raise OverflowError("int64 overflow in row reduction")
        pv = a[r, c]
        for i in range(m):
            if i == r:
                continue
            f = a[i, c]
            if f == 0:
                continue
            g = _gcd(pv, f)
            pv_g = pv // g
            f_g = f // g
            for j in range(n):
                if rb3_mul_ovf(pv_g, a[i, j], &t1):
                    raise OverflowError("int64 overflow in row reduction")
                if a[r, j] != 0:
                    if rb3_mul_ovf(f_g, a[r, j], &t2):
                        raise OverflowError("int64 overflow in row reduction")
                    if rb3_sub_ovf(t1, t2, &t1):
                        raise OverflowError("int64 overflow in row reduction")
                a[i, j] = t1
            if _normalize_row(a, i, -1) < 0:
                raise OverflowError("int64 overflow in row reduction")
        pivots.append(c)
        r += 1
    return pivots
