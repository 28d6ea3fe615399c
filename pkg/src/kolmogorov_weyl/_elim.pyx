# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled fraction-free Gauss-Jordan elimination over the integers.

Runs in 64-bit machine integers with overflow detection and restarts on
Python integers when any intermediate value would overflow.  Output is
identical to ``_elim_py.rref_int``.
"""

from libc.stdlib cimport malloc, free
from libc.string cimport memcpy
from math import gcd

BACKEND = "cython"

cdef extern from *:
    """
    static inline int kw_mul_ovf(long long a, long long b, long long *r) {
        return __builtin_mul_overflow(a, b, r);
    }
    static inline int kw_sub_ovf(long long a, long long b, long long *r) {
        return __builtin_sub_overflow(a, b, r);
    }
    static inline int kw_bits(long long v) {
        unsigned long long u = v < 0 ? (unsigned long long)(-(v + 1)) + 1ULL : (unsigned long long)v;
        return u ? 64 - __builtin_clzll(u) : 0;
    }
    """
    int kw_mul_ovf(long long a, long long b, long long *r) nogil
    int kw_sub_ovf(long long a, long long b, long long *r) nogil
    int kw_bits(long long v) nogil

cdef long long LIMIT = 1LL << 62


cdef inline long long _gcd(long long a, long long b) nogil:
    cdef long long t
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        t = a % b
        a = b
        b = t
    return a


cdef int _rref_i64(long long *m, Py_ssize_t nrows, Py_ssize_t ncols,
                   Py_ssize_t *pivots, Py_ssize_t *rank_out) nogil:
    """Return 0 on success, 1 on overflow.  ``m`` is row-major."""
    cdef Py_ssize_t r = 0, c, i, j, best
    cdef int bits, best_bits
    cdef long long v, p, f, g, a, b, t1, t2
    cdef long long *prow
    cdef long long *row
    cdef long long *tmp = <long long *> malloc(ncols * sizeof(long long))
    if tmp == NULL:
        return 1
    for c in range(ncols):
        if r == nrows:
            break
        best = -1
        best_bits = 0
        for i in range(r, nrows):
            v = m[i * ncols + c]
            if v:
                bits = kw_bits(v)
                if best < 0 or bits < best_bits:
                    best = i
                    best_bits = bits
                    if bits == 1:
                        break
        if best < 0:
            continue
        if best != r:
            memcpy(tmp, &m[r * ncols], ncols * sizeof(long long))
            memcpy(&m[r * ncols], &m[best * ncols], ncols * sizeof(long long))
            memcpy(&m[best * ncols], tmp, ncols * sizeof(long long))
        prow = &m[r * ncols]
        if prow[c] < 0:
            for j in range(ncols):
                prow[j] = -prow[j]
        g = 0
        for j in range(ncols):
            if prow[j]:
                g = _gcd(g, prow[j])
        if g > 1:
            for j in range(ncols):
                prow[j] = prow[j] // g
        p = prow[c]
        for i in range(nrows):
            if i == r:
                continue
            row = &m[i * ncols]
            f = row[c]
            if not f:
                continue
            g = _gcd(p, f)
            a = p // g
            b = f // g
            g = 0
            for j in range(ncols):
                if kw_mul_ovf(a, row[j], &t1):
                    free(tmp)
                    return 1
                if kw_mul_ovf(b, prow[j], &t2):
                    free(tmp)
                    return 1
                if kw_sub_ovf(t1, t2, &t1):
                    free(tmp)
                    return 1
                if t1 >= LIMIT or t1 <= -LIMIT:
                    free(tmp)
                    return 1
                row[j] = t1
                if t1:
                    g = _gcd(g, t1)
            if g > 1:
                for j in range(ncols):
                    row[j] = row[j] // g
        pivots[r] = c
        r += 1
    free(tmp)
    rank_out[0] = r
    return 0


def _rref_object(list rows, Py_ssize_t ncols):
    cdef list work = [list(row_) for row_ in rows if any(row_)]
    cdef Py_ssize_t nrows = len(work)
    cdef list pivots = []
    cdef Py_ssize_t r = 0, c, i, j, best
    cdef int bits, best_bits
    cdef list prow, row, new
    for c in range(ncols):
        if r == nrows:
            break
        best = -1
        best_bits = 0
        for i in range(r, nrows):
            v = (<list> work[i])[c]
            if v:
                bits = abs(v).bit_length()
                if best < 0 or bits < best_bits:
                    best = i
                    best_bits = bits
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
            new = [a * row[j] - b * prow[j] for j in range(ncols)]
            g = gcd(*new)
            if g > 1:
                new = [v // g for v in new]
            work[i] = new
        pivots.append(c)
        r += 1
    return work[:r], pivots


def rref_int(rows, Py_ssize_t ncols):
    """Fraction-free Gauss-Jordan reduction of integer ``rows``.

    Returns ``(reduced, pivots)`` with the same conventions as the
    pure-Python kernel.
    """
    cdef list src = [r for r in rows if any(r)]
    cdef Py_ssize_t nrows = len(src)
    cdef Py_ssize_t i, j, rank = 0
    cdef long long *m
    cdef Py_ssize_t *piv
    cdef int status
    if nrows == 0 or ncols == 0:
        return [], []
    for row in src:
        for v in row:
            if v >= LIMIT or v <= -LIMIT:
                return _rref_object(src, ncols)
    m = <long long *> malloc(nrows * ncols * sizeof(long long))
    piv = <Py_ssize_t *> malloc(ncols * sizeof(Py_ssize_t))
    if m == NULL or piv == NULL:
        free(m)
        free(piv)
        return _rref_object(src, ncols)
    try:
        for i in range(nrows):
            row = src[i]
            for j in range(ncols):
                m[i * ncols + j] = row[j]
        with nogil:
            status = _rref_i64(m, nrows, ncols, piv, &rank)
        if status:
            return _rref_object(src, ncols)
        reduced = [[m[i * ncols + j] for j in range(ncols)] for i in range(rank)]
        return reduced, [piv[i] for i in range(rank)]
    finally:
        free(m)
        free(piv)
