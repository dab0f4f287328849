"""Vertex enumeration by the double-description method, in exact integers."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..kernels import primitive, row_values
from .hrep import HPolytope, PolytopeError, Row, UnboundedError
from .linalg import rref, solve


@dataclass(frozen=True)
class VPolytope:
    vertices: tuple[tuple[Fraction, ...], ...]

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    def as_set(self) -> frozenset:
        return frozenset(self.vertices)


def _independent_rows(rows: Sequence[Row], dim: int) -> list[int]:
    """Greedily pick indices of ``dim`` linearly independent rows (fewer if rank-deficient)."""
    chosen: list[int] = []
    basis: list[list[Fraction]] = []
    pivots: list[int] = []
    for idx, row in enumerate(rows):
        v = [Fraction(x) for x in row]
        for b, pc in zip(basis, pivots):
            if v[pc]:
                f = v[pc]
                v = [x - f * y for x, y in zip(v, b)]
        pc = next((j for j, x in enumerate(v) if x), None)
        if pc is None:
            continue
        inv = 1 / v[pc]
        v = [x * inv for x in v]
        for i, b in enumerate(basis):
            if b[pc]:
                f = b[pc]
                basis[i] = [x - f * y for x, y in zip(b, v)]
        basis.append(v)
        pivots.append(pc)
        chosen.append(idx)
        if len(chosen) == dim:
            break
    return chosen


def extreme_rays(rows: Sequence[Row], dim: int) -> list[tuple[int, ...]] | None:
    """Extreme rays of the cone ``{y in R^dim : row . y >= 0}``.

    Returns ``None`` when the cone is not pointed (the rows do not span).
    """
    order = _independent_rows(rows, dim)
    if len(order) < dim:
        return None
    rest = [i for i in range(len(rows)) if i not in set(order)]
    # initial simplicial cone: columns of the inverse of the chosen rows
    mat = [rows[i] for i in order]
    rays: list[tuple[int, ...]] = []
    zeros: list[int] = []
    for j in range(dim):
        e = [Fraction(int(i == j)) for i in range(dim)]
        x = solve(mat, e)
        den = 1
        for v in x:
            den = den * v.denominator // _gcd(den, v.denominator)
        ray = primitive([int(v * den) for v in x])
        rays.append(ray)
        zeros.append(sum(1 << k for k in range(dim) if k != j))
    need = dim - 2
    for pos, idx in enumerate(rest, start=dim):
        h = rows[idx]
        vals = row_values(rays, h)
        plus = [i for i, v in enumerate(vals) if v > 0]
        minus = [i for i, v in enumerate(vals) if v < 0]
        bit = 1 << pos
        if not minus:
            zeros = [z | bit if vals[i] == 0 else z for i, z in enumerate(zeros)]
            continue
        new_rays, new_zeros = [], []
        nrays = len(rays)
        for p in plus:
            zp = zeros[p]
            vp = vals[p]
            for n in minus:
                common = zp & zeros[n]
                if common.bit_count() < need:
                    continue
                adjacent = True
                for r in range(nrays):
                    if r != p and r != n and zeros[r] & common == common:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                vn = vals[n]
                ray = primitive([vp * a - vn * b for a, b in zip(rays[n], rays[p])])
                new_rays.append(ray)
                new_zeros.append(common | bit)
        keep = [i for i, v in enumerate(vals) if v >= 0]
        rays = [rays[i] for i in keep] + new_rays
        zeros = [zeros[i] | bit if vals[i] == 0 else zeros[i] for i in keep] + new_zeros
    return rays


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _cone_rows(p: HPolytope) -> list[Row]:
    rows = [(1,) + (0,) * p.dim]
    # equalities first: they pin the cone down quickly
    for e in p.equalities:
        rows.append(e)
        rows.append(tuple(-v for v in e))
    rows.extend(p.inequalities)
    return rows


def enumerate_vertices(p: HPolytope) -> VPolytope:
    """Exact vertex set of a bounded polytope (empty for an empty polytope)."""
    if p.is_trivially_empty:
        return VPolytope(())
    if p.dim == 0:
        ok = all(r[0] >= 0 for r in p.inequalities) and all(r[0] == 0 for r in p.equalities)
        return VPolytope(((),) if ok else ())
    rays = extreme_rays(_cone_rows(p), p.dim + 1)
    if rays is None:
        from .ops import is_empty

        if is_empty(p):
            return VPolytope(())
        raise UnboundedError("polytope has a lineality space (unbounded)")
    verts = set()
    recession = False
    for r in rays:
        if r[0] > 0:
            verts.add(tuple(Fraction(v, r[0]) for v in r[1:]))
        elif r[0] == 0:
            recession = True
        else:  # pragma: no cover - excluded by the t >= 0 row
            raise PolytopeError("negative homogenizing coordinate")
    if recession and verts:
        raise UnboundedError("polytope is unbounded")
    return VPolytope(tuple(sorted(verts)))


def brute_force_vertices(p: HPolytope) -> VPolytope:
    """Oracle: solve every ``dim``-subset of rows and keep feasible points."""
    from itertools import combinations

    from .hrep import contains

    rows = [r for r in p.all_rows_as_inequalities()]
    d = p.dim
    found = set()
    for combo in combinations(range(len(rows)), d):
        a = [rows[i][1:] for i in combo]
        b = [-rows[i][0] for i in combo]
        x = solve(a, b)
        if x is not None and contains(p, x):
            found.add(tuple(x))
    return VPolytope(tuple(sorted(found)))


def hull_rows(points: Sequence[Sequence[Fraction]], dim: int) -> tuple[list[Row], list[Row]]:
    """H-representation ``(inequalities, equalities)`` of the convex hull of ``points``."""
    from .hrep import equality_row, integer_row
    from .linalg import nullspace

    pts = [tuple(Fraction(v) for v in p) for p in points]
    if not pts:
        return [(-1,) + (0,) * dim], []
    lifted = [[Fraction(1)] + list(p) for p in pts]
    eqs = nullspace(lifted, dim + 1)
    eq_red, _ = rref(eqs) if eqs else ([], [])
    # hull facets are the extreme rays of the polar cone {(b, a) : b + a.v >= 0}
    gens = []
    for p in pts:
        den = 1
        for v in p:
            den = den * v.denominator // _gcd(den, v.denominator)
        gens.append(tuple([den] + [int(v * den) for v in p]))
    # restrict to the complement of the affine hull's equations by adding them
    # as two-sided constraints on (b, a): orthogonality to the hull directions
    cone_rows = list(gens)
    for e in eq_red:
        # quotient out: force (b, a) orthogonal to each equality normal
        row = integer_row(e)
        cone_rows.append(row)
        cone_rows.append(tuple(-v for v in row))
    rays = extreme_rays(cone_rows, dim + 1)
    if rays is None:
        raise PolytopeError("degenerate hull computation")
    ineqs = [r for r in rays if any(r[1:])]
    return [integer_row(r) for r in ineqs], [equality_row(e) for e in eq_red]
