"""Sampling helpers shared by the test modules."""

from fractions import Fraction

import numpy as np

from alcove.coverage import ALCOVE_C2, from_free
from alcove.polytope import contains


def alcove_points(n: int, seed: int = 0, den: int = 960) -> list[tuple[Fraction, ...]]:
    """``n`` exact points drawn uniformly from a grid in the alcove closure,
    in free coordinates (d1, d2, d3)."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        x = (Fraction(int(rng.integers(0, den // 2 + 1)), den),
             Fraction(int(rng.integers(-den // 8, 3 * den // 8 + 1)), den),
             Fraction(int(rng.integers(-den // 4, den // 4 + 1)), den))
        if contains(ALCOVE_C2, x):
            out.append(x)
    return out


def full_point(x) -> tuple[Fraction, ...]:
    return tuple(from_free(x))


def vertex_sets(report, n: int) -> set[frozenset]:
    return {frozenset(tuple(v) for v in part) for part in report.vertex_sets(n)}
