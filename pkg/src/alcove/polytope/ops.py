"""Polytope operations: redundancy removal, projection, dimension, volume."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from ..kernels import fm_combine, int_rank, primitive, row_values
from .hrep import (
    HPolytope, PolytopeError, Row, check_same_dim, concatenate, contains, dedup_inequalities,
    equality_row, integer_row,
)
from .linalg import affine_rank, det, nullspace, rref
from .lp import INFEASIBLE, OPTIMAL, THRESHOLD, UNBOUNDED, simplex_min
from .vertices import VPolytope, enumerate_vertices


# ---------------------------------------------------------------------------
# feasibility and redundancy via exact LP


def _dual_columns(rows: Sequence[Row], eqs: Sequence[Row]):
    cols = list(rows)
    for e in eqs:
        cols.append(e)
        cols.append(tuple(-v for v in e))
    return cols


def _dual_lp(cols: Sequence[Row], target: Sequence[int], stop_at):
    """Solve ``min sum y_i b_i`` s.t. ``sum y_i a_i = target``, ``y >= 0``."""
    d = len(target)
    M = [[c[j + 1] for c in cols] for j in range(d)]
    return simplex_min(M, list(target), [c[0] for c in cols], stop_at)


def is_empty(p: HPolytope) -> bool:
    """Exact emptiness test (Farkas: some ``y >= 0`` with ``y.A = 0`` and ``y.b < 0``)."""
    if p.is_trivially_empty:
        return True
    cols = _dual_columns(p.inequalities, p.equalities)
    if not cols:
        return False
    res = _dual_lp(cols, [0] * p.dim, Fraction(-1))
    return res.status in (UNBOUNDED, THRESHOLD)


def is_redundant(row: Row, others: Sequence[Row], eqs: Sequence[Row] = ()) -> bool:
    """Whether ``row >= 0`` is implied by ``others`` and ``eqs`` (exact LP)."""
    if not any(row[1:]):
        return row[0] >= 0
    cols = _dual_columns(others, eqs)
    if not cols:
        return False
    res = _dual_lp(cols, list(row[1:]), Fraction(row[0]))
    if res.status == INFEASIBLE:
        return False
    if res.status in (UNBOUNDED, THRESHOLD):
        return True
    return res.value <= row[0]


def minimize(p: HPolytope, objective: Sequence) -> Fraction | None:
    """Exact ``min objective . x`` over ``p``; ``None`` if empty, raises if unbounded."""
    obj = [Fraction(v) for v in objective]
    den = 1
    for v in obj:
        den = math.lcm(den, v.denominator)
    target = [int(v * den) for v in obj]
    cols = _dual_columns(p.inequalities, p.equalities)
    if not cols:
        if any(target):
            raise PolytopeError("unbounded objective")
        return Fraction(0)
    res = _dual_lp(cols, target, None)
    if res.status == UNBOUNDED:
        return None
    if res.status == INFEASIBLE:
        if is_empty(p):
            return None
        raise PolytopeError("unbounded objective")
    return -res.value / den


def reduce_redundant_lp(p: HPolytope) -> HPolytope:
    if p.is_trivially_empty or is_empty(p):
        return HPolytope.empty(p.dim, p.names)
    rows, _ = dedup_inequalities(p.inequalities)
    kept = list(rows)
    i = 0
    while i < len(kept):
        others = kept[:i] + kept[i + 1:]
        if is_redundant(kept[i], others, p.equalities):
            kept = others
        else:
            i += 1
    return HPolytope(p.dim, tuple(sorted(kept)), p.equalities, p.names)


# ---------------------------------------------------------------------------
# canonical form from the vertex set


@dataclass(frozen=True)
class Faces:
    """Vertices, affine dimension and facet incidences of a polytope."""

    vertices: tuple[tuple[Fraction, ...], ...]
    dim: int
    facets: tuple[tuple[Row, int], ...]  # (row, bitmask of incident vertices)
    equalities: tuple[Row, ...]


def _homogeneous(verts) -> list[tuple[int, ...]]:
    """Integer rows ``(D, D v)`` for each vertex ``v`` with common denominator ``D``."""
    out = []
    for v in verts:
        den = 1
        for x in v:
            den = math.lcm(den, Fraction(x).denominator)
        out.append((den, *(int(Fraction(x) * den) for x in v)))
    return out


def _tight_mask(row: Row, hverts) -> int:
    mask = 0
    for i, val in enumerate(row_values(hverts, row)):
        if val == 0:
            mask |= 1 << i
    return mask


def _mask_rank(mask: int, hverts) -> int:
    """Affine dimension of the vertices selected by ``mask``."""
    return int_rank([v for i, v in enumerate(hverts) if mask >> i & 1]) - 1


def _reduce_mod(row: Sequence[Fraction], eq_rref, pivots) -> list[Fraction]:
    r = [Fraction(v) for v in row]
    for e, pc in zip(eq_rref, pivots):
        if r[pc]:
            f = r[pc]
            r = [x - f * y for x, y in zip(r, e)]
    return r


def _equalities_rref(rows):
    """RREF of equality rows ``(b, a)`` pivoting on coefficient columns before
    the constant, returned in ``(b, a)`` layout with pivot column indices."""
    if not rows:
        return [], []
    moved = [list(r[1:]) + [r[0]] for r in rows]
    red, piv = rref(moved)
    n = len(moved[0])
    back = [[r[-1]] + r[:-1] for r in red]
    return back, [c + 1 if c < n - 1 else 0 for c in piv]


def faces(p: HPolytope) -> Faces:
    verts = enumerate_vertices(p).vertices
    d = p.dim
    if not verts:
        return Faces((), -1, (), ())
    hverts = _homogeneous(verts)
    k = int_rank(hverts) - 1
    lifted = [[Fraction(1)] + list(v) for v in verts]
    eq_rref, pivots = _equalities_rref(nullspace(lifted, d + 1))
    full = (1 << len(verts)) - 1
    seen: dict[int, Row] = {}
    rank_cache: dict[int, int] = {}
    for row in p.inequalities:
        mask = _tight_mask(row, hverts)
        if mask == full or mask in seen:
            continue
        if mask not in rank_cache:
            rank_cache[mask] = _mask_rank(mask, hverts)
        if rank_cache[mask] == k - 1:
            seen[mask] = integer_row(_reduce_mod(row, eq_rref, pivots))
    facets = tuple(sorted(((r, m) for m, r in seen.items()), key=lambda t: t[0]))
    eqs = tuple(equality_row(e) for e in eq_rref)
    return Faces(verts, k, facets, eqs)


def canonical_form(p: HPolytope) -> HPolytope:
    """Irredundant, canonical H-representation (equalities in reduced echelon form)."""
    f = faces(p)
    if f.dim < 0:
        return HPolytope.empty(p.dim, p.names)
    return HPolytope(p.dim, tuple(r for r, _ in f.facets), f.equalities, p.names)


def reduce_redundant(p: HPolytope, method: str = "lp") -> HPolytope:
    """Drop implied inequalities.

    ``method="lp"`` tests every row with an exact LP; ``method="vertices"``
    returns the canonical form read off the exact vertex set (which also
    turns implicit equalities into explicit ones).
    """
    if method == "lp":
        return reduce_redundant_lp(p)
    if method == "vertices":
        return canonical_form(p)
    raise ValueError(f"unknown redundancy method {method!r}")


# ---------------------------------------------------------------------------
# intersection, projection


def intersect(a: HPolytope, b: HPolytope, method: str = "vertices") -> HPolytope:
    check_same_dim(a, b)
    return reduce_redundant(concatenate(a, b), method)


def _drop_column(row: Sequence[int], k: int) -> Row:
    return tuple(v for j, v in enumerate(row) if j != k + 1)


def _substitute_equality(ineqs, eqs, eq: Row, k: int):
    """Eliminate coordinate ``k`` using equality ``eq`` (which involves it)."""
    c = eq[k + 1]
    sign = 1 if c > 0 else -1
    ac = abs(c)

    def sub(row):
        f = row[k + 1]
        if f == 0:
            return _drop_column(row, k)
        # ac * row - sign * f * eq cancels column k and keeps the row's sense
        new = [ac * x - sign * f * y for x, y in zip(row, eq)]
        return _drop_column(primitive(new), k)

    new_ineqs = [sub(r) for r in ineqs]
    new_eqs = [sub(r) for r in eqs if r is not eq]
    return new_ineqs, new_eqs


def fm_eliminate(p: HPolytope, coords: Iterable[int], method: str = "lp") -> HPolytope:
    """Project ``p`` onto the coordinates not in ``coords`` (0-based indices).

    Equalities are used for substitution when they involve an eliminated
    coordinate; otherwise Fourier-Motzkin combines opposite-sign rows, choosing
    the coordinate with the fewest ``positive x negative`` pairs first.  Redundant
    rows are removed after every single elimination.
    """
    todo = sorted(set(coords))
    for k in todo:
        if not 0 <= k < p.dim:
            raise PolytopeError(f"coordinate {k} out of range")
    live = list(range(p.dim))  # original index of each current column
    names = list(p.names) if p.names else None
    ineqs = list(p.inequalities)
    eqs = list(p.equalities)
    dim = p.dim
    remaining = list(todo)
    while remaining:
        cols = [live.index(k) for k in remaining]
        # prefer substitution through an equality
        choice = None
        for e in eqs:
            for c in cols:
                if e[c + 1]:
                    if choice is None or abs(e[c + 1]) < abs(choice[0][c + 1]):
                        choice = (e, c)
        if choice is not None:
            e, c = choice
            ineqs, eqs = _substitute_equality(ineqs, eqs, e, c)
        else:
            def cost(c):
                pos = sum(1 for r in ineqs if r[c + 1] > 0)
                neg = sum(1 for r in ineqs if r[c + 1] < 0)
                return (pos * neg - pos - neg, c)

            c = min(cols, key=cost)
            pos = [r for r in ineqs if r[c + 1] > 0]
            neg = [r for r in ineqs if r[c + 1] < 0]
            zero = [_drop_column(r, c) for r in ineqs if r[c + 1] == 0]
            ineqs = zero + fm_combine(pos, neg, c + 1)
            eqs = [_drop_column(r, c) for r in eqs]
        remaining.remove(live[c])
        del live[c]
        if names:
            del names[c]
        dim -= 1
        ineqs, bad = dedup_inequalities(ineqs)
        eqs = sorted({equality_row(r) for r in eqs if any(r)})
        if bad or any(not any(r[1:]) and r[0] != 0 for r in eqs):
            return HPolytope.empty(dim, names)
        eqs = [r for r in eqs if any(r[1:])]
        q = HPolytope(dim, tuple(sorted(ineqs)), tuple(eqs), tuple(names) if names else None)
        q = reduce_redundant(q, method)
        if q.is_trivially_empty:
            return q
        ineqs, eqs = list(q.inequalities), list(q.equalities)
    return HPolytope(dim, tuple(sorted(ineqs)), tuple(eqs), tuple(names) if names else None)


def project(p: HPolytope, keep: Sequence[int], method: str = "lp") -> HPolytope:
    return fm_eliminate(p, [i for i in range(p.dim) if i not in set(keep)], method)


# ---------------------------------------------------------------------------
# dimension, volume


def dimension(p: HPolytope) -> int:
    return affine_rank(enumerate_vertices(p).vertices)


def _triangulate(mask: int, k: int, verts, facet_masks, rank_of) -> list[list[int]]:
    idx = [i for i in range(len(verts)) if mask >> i & 1]
    if len(idx) == k + 1:
        return [idx]
    apex = idx[0]  # vertices are sorted, so this is the lexicographic minimum
    subfaces = set()
    for fm in facet_masks:
        sub = mask & fm
        if sub >> apex & 1 or sub in subfaces:
            continue
        if rank_of(sub) == k - 1:
            subfaces.add(sub)
    out = []
    for sub in sorted(subfaces):
        for simplex in _triangulate(sub, k - 1, verts, facet_masks, rank_of):
            out.append([apex] + simplex)
    return out


def triangulation(p: HPolytope | Faces) -> tuple[tuple, list[list[int]]]:
    """Pulling triangulation ``(vertices, simplices)`` of ``p`` within its affine hull."""
    f = p if isinstance(p, Faces) else faces(p)
    if f.dim < 0:
        return (), []
    verts = f.vertices
    if f.dim == 0:
        return verts, [[0]]
    cache: dict[int, int] = {}
    hverts = _homogeneous(verts)

    def rank_of(mask):
        if mask not in cache:
            cache[mask] = _mask_rank(mask, hverts)
        return cache[mask]

    full = (1 << len(verts)) - 1
    return verts, _triangulate(full, f.dim, verts, [m for _, m in f.facets], rank_of)


def volume(p: HPolytope) -> Fraction:
    """Exact Euclidean volume in the ambient space (zero unless full-dimensional)."""
    f = faces(p)
    if f.dim < p.dim or f.dim <= 0:
        return Fraction(0) if p.dim > 0 or f.dim < 0 else Fraction(1)
    verts, simplices = triangulation(f)
    total = Fraction(0)
    for s in simplices:
        v0 = verts[s[0]]
        total += abs(det([[a - b for a, b in zip(verts[j], v0)] for j in s[1:]]))
    return total / math.factorial(p.dim)


def relative_volume(p: HPolytope) -> float:
    """Volume measured inside the affine hull (float: it involves square roots)."""
    verts, simplices = triangulation(p)
    if not simplices:
        return 0.0
    k = len(simplices[0]) - 1
    total = 0.0
    for s in simplices:
        v0 = verts[s[0]]
        edges = [[a - b for a, b in zip(verts[j], v0)] for j in s[1:]]
        gram = [[sum(x * y for x, y in zip(e1, e2)) for e2 in edges] for e1 in edges]
        total += math.sqrt(float(det(gram))) if edges else 1.0
    return total / math.factorial(k)


def simplex_volume(points: Sequence[Sequence]) -> Fraction:
    v0 = [Fraction(x) for x in points[0]]
    d = len(v0)
    m = [[Fraction(a) - b for a, b in zip(v, v0)] for v in points[1:]]
    return abs(det(m)) / math.factorial(d)
