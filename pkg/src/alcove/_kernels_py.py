"""Pure-Python integer kernels for the exact polytope engine.

Every function here has a drop-in compiled twin in ``_kernels.pyx``; the
active implementation is chosen in :mod:`alcove.kernels`.  Rows are tuples of
Python ints ``(b, a_1, ..., a_d)`` standing for ``b + a.x >= 0``.
"""

from math import gcd


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


def fm_combine(pos, neg, k):
    """Combine every row of ``pos`` (entry ``k`` > 0) with every row of ``neg``
    (entry ``k`` < 0) so that column ``k`` cancels; column ``k`` is dropped."""
    out = []
    for p in pos:
        pk = p[k]
        for n in neg:
            nk = -n[k]
            row = [nk * a + pk * b for a, b in zip(p, n)]
            del row[k]
            out.append(primitive(row))
    return out


def ff_pivot(tab, r, c, prev):
    """Fraction-free (Bareiss) pivot of ``tab`` on entry ``(r, c)`` in place.

    ``prev`` is the previous pivot value; every updated entry is an exact
    integer.  Row ``r`` is left unchanged.
    """
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


def int_rank(rows):
    """Rank of an integer matrix by fraction-free (Bareiss) elimination."""
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


def row_values(rows, point):
    """Homogeneous evaluation ``b*t + a.x`` of each row at ``point = (t, x)``."""
    return [sum(a * x for a, x in zip(row, point)) for row in rows]
