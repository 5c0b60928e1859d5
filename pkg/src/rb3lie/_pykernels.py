"""Pure-Python integer row reduction (fallback for the compiled kernel)."""

from math import gcd


def _normalize(row, pivot_col=None):
    g = 0
    for x in row:
        if x:
            g = gcd(g, x)
            if g == 1:
                break
    if pivot_col is not None and row[pivot_col] < 0:
        g = -g
    if g not in (0, 1):
        row[:] = [x // g for x in row]


def rref_int(rows):
    """Reduce a list of integer rows in place; return the pivot columns.

    Fraction-free Gauss-Jordan: the first nonzero entry at or below the
    current row is the pivot, other rows are cleared by integer row
    combinations and divided by their content.  Afterwards the first
    ``rank`` rows are the pivot rows with positive pivots.
    """
    m = len(rows)
    n = len(rows[0]) if rows else 0
    r = 0
    pivots = []
    for c in range(n):
        if r == m:
            break
        p = next((i for i in range(r, m) if rows[i][c]), None)
        if p is None:
            continue
        rows[p], rows[r] = rows[r], rows[p]
        _normalize(rows[r], c)
        prow = rows[r]
        pv = prow[c]
        nz = [j for j, y in enumerate(prow) if y]
        for i in range(m):
            if i == r:
                continue
            row = rows[i]
            f = row[c]
            if not f:
                continue
            g = gcd(pv, f)
            pv_g, f_g = pv // g, f // g
            if pv_g != 1:
                row[:] = [pv_g * x for x in row]
            for j in nz:
                row[j] -= f_g * prow[j]
            _normalize(row)
        pivots.append(c)
        r += 1
    return pivots
