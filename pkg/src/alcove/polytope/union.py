"""Finite unions of convex polytopes."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .hrep import HPolytope, concatenate, contains, contains_float
from .ops import canonical_form, faces, volume


@dataclass(frozen=True)
class PolytopeUnion:
    parts: tuple[HPolytope, ...]

    @classmethod
    def of(cls, parts: Iterable[HPolytope], drop_contained: bool = True) -> "PolytopeUnion":
        """Canonicalize, drop empty and duplicate parts (and parts inside others)."""
        canon = []
        seen = set()
        for p in parts:
            c = canonical_form(p)
            if c.is_trivially_empty:
                continue
            key = (c.inequalities, c.equalities)
            if key in seen:
                continue
            seen.add(key)
            canon.append(c)
        canon.sort(key=lambda c: (c.equalities, c.inequalities))
        if drop_contained and len(canon) > 1:
            verts = [faces(c).vertices for c in canon]
            keep = []
            for i, c in enumerate(canon):
                inside = any(
                    j != i and all(contains(canon[j], v) for v in verts[i])
                    and not (j > i and all(contains(c, v) for v in verts[j]))
                    for j in range(len(canon))
                )
                if not inside:
                    keep.append(c)
            canon = keep
        return cls(tuple(canon))

    @property
    def dim(self) -> int:
        return self.parts[0].dim if self.parts else 0

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def contains(self, x: Sequence) -> bool:
        return any(contains(p, x) for p in self.parts)

    def contains_float(self, x: Sequence[float], tol: float = 1e-9) -> bool:
        return any(contains_float(p, x, tol) for p in self.parts)


def union_volume(u: PolytopeUnion | Sequence[HPolytope]) -> Fraction:
    """Exact volume of the union by inclusion-exclusion.

    A zero-volume intersection prunes all of its supersets, which keeps the
    expansion small for the overlapping-but-sparse unions met in practice.
    """
    parts = list(u.parts if isinstance(u, PolytopeUnion) else u)
    parts = [p for p in parts if volume(p) > 0]
    total = Fraction(0)

    def expand(start: int, current: HPolytope | None, depth: int):
        nonlocal total
        for j in range(start, len(parts)):
            inter = parts[j] if current is None else canonical_form(concatenate(current, parts[j]))
            vol = volume(inter)
            if vol == 0:
                continue
            total += vol if depth % 2 == 0 else -vol
            expand(j + 1, inter, depth + 1)

    expand(0, None, 0)
    return total
