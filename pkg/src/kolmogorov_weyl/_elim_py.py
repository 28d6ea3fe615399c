"""Pure-Python fraction-free Gauss-Jordan elimination over the integers.

This is the fallback for the compiled ``_elim`` extension; both produce
identical output for identical input.
"""

from math import gcd

BACKEND = "python"


def rref_int(rows, ncols):
    """Reduce integer ``rows`` to row echelon form with cleared pivot columns.

    Returns ``(reduced, pivots)``: ``reduced[i]`` has a positive entry at
    column ``pivots[i]``, zeros in every other pivot column, and content 1.
    Pivot rows are chosen by smallest absolute bit length.
    """
    work = [list(r) for r in rows if any(r)]
    nrows = len(work)
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        best = -1
        best_bits = 0
        for i in range(r, nrows):
            v = work[i][c]
            if v:
                bits = abs(v).bit_length()
                if best < 0 or bits < best_bits:
                    best, best_bits = i, bits
                    if bits == 1:
                        break
        if best < 0:
            continue
        work[r], work[best] = work[best], work[r]
        prow = work[r]
        if prow[c] < 0:
            prow = [-v for v in prow]
        g = gcd(*prow)
        if g > 1:
            prow = [v // g for v in prow]
        work[r] = prow
        p = prow[c]
        for i in range(nrows):
            if i == r:
                continue
            row = work[i]
            f = row[c]
            if not f:
                continue
            g = gcd(p, f)
            a = p // g
            b = f // g
            if a == 1:
                new = row[:c] + [row[j] - b * prow[j] for j in range(c, ncols)]
            else:
                new = [a * v for v in row[:c]] + [a * row[j] - b * prow[j] for j in range(c, ncols)]
            g = gcd(*new)
            if g > 1:
                new = [v // g for v in new]
            work[i] = new
        pivots.append(c)
        r += 1
    return work[:r], pivots
