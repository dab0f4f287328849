# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled integer kernels; same interface as ``_kernels_py``.

Rows whose entries stay below 2**30 in magnitude are processed with 64-bit
machine arithmetic (every intermediate product then fits); anything larger
falls back to Python integers, so results are always exact.
"""

from libc.stdlib cimport malloc, free

from math import gcd

cdef long long SMALL = 1 << 30


cdef inline long long _gcd(long long a, long long b) nogil:
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        a, b = b, a % b
    return a


cdef bint _small_rows(rows):
    cdef object v
    for row in rows:
        for v in row:
            if v >= SMALL or v <= -SMALL:
                return False
    return True


def primitive(row):
    """Divide an integer row by the gcd of its entries."""
    g = 0
    for v in row:
        g = gcd(g, v)
        if g == 1:
            return tuple(row)
    if g == 0:
        return tuple(row)
    return tuple(v // g for v in row)


def _fm_combine_py(pos, neg, k):
    out = []
    for p in pos:
        pk = p[k]
        for n in neg:
            nk = -n[k]
            row = [nk * a + pk * b for a, b in zip(p, n)]
            del row[k]
            out.append(primitive(row))
    return out


def fm_combine(pos, neg, Py_ssize_t k):
    """Combine every row of ``pos`` (entry ``k`` > 0) with every row of ``neg``
    (entry ``k`` < 0) so that column ``k`` cancels; column ``k`` is dropped."""
    if not pos or not neg:
        return []
    if not (_small_rows(pos) and _small_rows(neg)):
        return _fm_combine_py(pos, neg, k)
    cdef Py_ssize_t width = len(pos[0])
    cdef Py_ssize_t npos = len(pos), nneg = len(neg)
    cdef long long *P = <long long *> malloc(npos * width * sizeof(long long))
    cdef long long *N = <long long *> malloc(nneg * width * sizeof(long long))
    cdef long long *buf = <long long *> malloc(width * sizeof(long long))
    cdef Py_ssize_t i, j, c, m
    cdef long long pk, nk, g
    out = []
    try:
        for i in range(npos):
            for c in range(width):
                P[i * width + c] = pos[i][c]
        for i in range(nneg):
            for c in range(width):
                N[i * width + c] = neg[i][c]
        for i in range(npos):
            pk = P[i * width + k]
            for j in range(nneg):
                nk = -N[j * width + k]
                g = 0
                m = 0
                for c in range(width):
                    if c == k:
                        continue
                    buf[m] = nk * P[i * width + c] + pk * N[j * width + c]
                    g = _gcd(g, buf[m])
                    m += 1
                if g > 1:
                    out.append(tuple([buf[c] // g for c in range(m)]))
                else:
                    out.append(tuple([buf[c] for c in range(m)]))
    finally:
        free(P)
        free(N)
        free(buf)
    return out


def _ff_pivot_py(tab, r, c, prev):
    prow = tab[r]
    piv = prow[c]
    ncol = len(prow)
    for i, row in enumerate(tab):
        if i == r:
            continue
        f = row[c]
        if f == 0:
            if piv != prev:
                for j in range(ncol):
                    row[j] = row[j] * piv // prev
            continue
        for j in range(ncol):
            row[j] = (piv * row[j] - f * prow[j]) // prev


def ff_pivot(tab, Py_ssize_t r, Py_ssize_t c, prev):
    """Fraction-free (Bareiss) pivot of ``tab`` on entry ``(r, c)`` in place.

    ``prev`` is the previous pivot value; every updated entry is an exact
    integer.  Row ``r`` is left unchanged.
    """
    if not (-SMALL < prev < SMALL) or not _small_rows(tab):
        _ff_pivot_py(tab, r, c, prev)
        return
    cdef list prow = tab[r]
    cdef Py_ssize_t ncol = len(prow), i, j
    cdef long long piv = prow[c], pv = prev, f, x
    cdef long long *pr = <long long *> malloc(ncol * sizeof(long long))
    try:
        for j in range(ncol):
            pr[j] = prow[j]
        for i in range(len(tab)):
            if i == r:
                continue
            row = tab[i]
            f = row[c]
            if f == 0:
                if piv != pv:
                    for j in range(ncol):
                        x = row[j]
                        row[j] = (x * piv) // pv
                continue
            for j in range(ncol):
                x = row[j]
                row[j] = (piv * x - f * pr[j]) // pv
    finally:
        free(pr)


def _int_rank_py(rows):
    m = [list(r) for r in rows]
    if not m:
        return 0
    ncol = len(m[0])
    rank, prev = 0, 1
    for c in range(ncol):
        piv = next((i for i in range(rank, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        prow = m[rank]
        p = prow[c]
        for i in range(rank + 1, len(m)):
            row = m[i]
            f = row[c]
            for j in range(c, ncol):
                row[j] = (p * row[j] - f * prow[j]) // prev
        prev = p
        rank += 1
        if rank == len(m):
            break
    return rank


cdef double _hadamard_log2(rows, Py_ssize_t n):
    # log2 of (sqrt(n) * max|entry|)^n, a bound on every minor met in elimination
    cdef double mx = 1.0, v
    for row in rows:
        for x in row:
            v = abs(float(x))
            if v > mx:
                mx = v
    from math import log2
    return n * (0.5 * log2(max(n, 1)) + log2(mx))


def int_rank(rows):
    """Rank of an integer matrix by fraction-free (Bareiss) elimination."""
    cdef Py_ssize_t nrow = len(rows)
    if nrow == 0:
        return 0
    cdef Py_ssize_t ncol = len(rows[0])
    cdef Py_ssize_t n = nrow if nrow < ncol else ncol
    # products of two minors must fit in 63 bits
    if 2 * _hadamard_log2(rows, n) > 60:
        return _int_rank_py(rows)
    cdef long long *m = <long long *> malloc(nrow * ncol * sizeof(long long))
    cdef Py_ssize_t i, j, c, piv, rank = 0
    cdef long long p, f, prev = 1, tmp
    try:
        for i in range(nrow):
            for j in range(ncol):
                m[i * ncol + j] = rows[i][j]
        for c in range(ncol):
            piv = -1
            for i in range(rank, nrow):
                if m[i * ncol + c] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != rank:
                for j in range(ncol):
                    tmp = m[piv * ncol + j]
                    m[piv * ncol + j] = m[rank * ncol + j]
                    m[rank * ncol + j] = tmp
            p = m[rank * ncol + c]
            for i in range(rank + 1, nrow):
                f = m[i * ncol + c]
                for j in range(c, ncol):
                    m[i * ncol + j] = (p * m[i * ncol + j] - f * m[rank * ncol + j]) // prev
            prev = p
            rank += 1
            if rank == nrow:
                break
    finally:
        free(m)
    return rank


def row_values(rows, point):
    """Homogeneous evaluation ``b*t + a.x`` of each row at ``point = (t, x)``."""
    return [sum(a * x for a, x in zip(row, point)) for row in rows]
