"""Exact standard-form simplex on integer data.

The tableau is kept fraction-free: every stored entry equals the true tableau
entry times the current pivot determinant ``D > 0``, so all arithmetic stays
in Python integers.  Bland's rule guarantees termination on degenerate
problems, which are the norm for the redundancy checks this engine runs.
"""

from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple, Sequence

from ..kernels import ff_pivot

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
THRESHOLD = "threshold"


class LPResult(NamedTuple):
    status: str
    value: Fraction | None


def simplex_min(M: Sequence[Sequence[int]], q: Sequence[int], c: Sequence[int],
                stop_at: Fraction | None = None) -> LPResult:
    """Minimize ``c.y`` subject to ``M y = q`` and ``y >= 0``.

    ``M`` is a list of ``m`` integer rows of length ``n``.  When ``stop_at`` is
    given the search returns ``THRESHOLD`` as soon as a feasible basis reaches
    an objective value ``<= stop_at``.
    """
    m = len(M)
    n = len(c)
    width = n + m + 1
    tab = []
    for i, (row, qi) in enumerate(zip(M, q)):
        sign = -1 if qi < 0 else 1
        t = [sign * v for v in row]
        t.extend(1 if j == i else 0 for j in range(m))
        t.append(sign * qi)
        tab.append(t)
    basis = [n + i for i in range(m)]
    rhs = width - 1

    # phase one objective: sum of artificials, expressed in reduced form
    w = [0] * width
    for t in tab:
        for j in range(n):
            w[j] -= t[j]
        w[rhs] -= t[rhs]
    for j in range(n, n + m):
        w[j] = 0
    tab.append(w)
    D = 1

    D = _run(tab, basis, n, D, rhs, None)
    if D is None:  # cannot happen in phase one (objective bounded below by 0)
        raise AssertionError("phase one reported unbounded")
    w = tab.pop()
    if w[rhs] != 0:
        return LPResult(INFEASIBLE, None)

    # drive artificials out of the basis or drop redundant constraint rows
    i = 0
    while i < len(tab):
        if basis[i] >= n:
            row = tab[i]
            j = next((j for j in range(n) if row[j] != 0), None)
            if j is None:
                del tab[i]
                del basis[i]
                continue
            if row[j] < 0:
                tab[i] = [-v for v in row]
            ff_pivot(tab, i, j, D)
            D = tab[i][j]
            basis[i] = j
        i += 1

    z = [D * c[j] if j < n else 0 for j in range(width)]
    for bi, row in zip(basis, tab):
        cb = c[bi]
        if cb:
            for j in range(width):
                if j < n or j == rhs:
                    z[j] -= cb * row[j]
    tab.append(z)
    D = _run(tab, basis, n, D, rhs, stop_at)
    if D is None:
        return LPResult(UNBOUNDED, None)
    if isinstance(D, tuple):
        return LPResult(THRESHOLD, D[1])
    z = tab[-1]
    return LPResult(OPTIMAL, Fraction(-z[rhs], D))


def _run(tab, basis, n, D, rhs, stop_at):
    """Pivot until optimal.  Returns the final determinant, ``None`` when
    unbounded, or ``("stop", value)`` once ``stop_at`` is reached."""
    obj = tab[-1]
    m = len(tab) - 1
    while True:
        if stop_at is not None and Fraction(-obj[rhs], D) <= stop_at:
            return ("stop", Fraction(-obj[rhs], D))
        col = -1
        for j in range(n):
            if obj[j] < 0:
                col = j
                break
        if col < 0:
            return D
        best = -1
        for i in range(m):
            a = tab[i][col]
            if a > 0:
                if best < 0:
                    best = i
                    continue
                lhs = tab[i][rhs] * tab[best][col]
                rhs_ = tab[best][rhs] * a
                if lhs < rhs_ or (lhs == rhs_ and basis[i] < basis[best]):
                    best = i
        if best < 0:
            return None
        ff_pivot(tab, best, col, D)
        D = tab[best][col]
        basis[best] = col
        obj = tab[-1]
