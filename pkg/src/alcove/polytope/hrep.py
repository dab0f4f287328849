"""Exact H-representation polytopes over the rationals.

Rows are primitive integer tuples ``(b, a_1, ..., a_d)`` meaning
``b + a.x >= 0`` (inequalities) or ``b + a.x = 0`` (equalities), the layout
used by lrs and cdd.  Rational input is scaled to integers on the way in.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence

from ..kernels import primitive

Row = tuple[int, ...]


class PolytopeError(ValueError):
    pass


class UnboundedError(PolytopeError):
    pass


def integer_row(row: Sequence) -> Row:
    """Scale a row of rationals to a primitive integer row (same sign)."""
    fr = [Fraction(v) for v in row]
    den = 1
    for v in fr:
        den = lcm(den, v.denominator)
    return primitive([int(v * den) for v in fr])


def equality_row(row: Sequence) -> Row:
    """Primitive integer row with its first nonzero coefficient positive."""
    r = integer_row(row)
    for v in r[1:]:
        if v:
            return tuple(-x for x in r) if v < 0 else r
    return r


def _direction_key(row: Row) -> tuple[tuple[int, ...], Fraction]:
    a = row[1:]
    g = 0
    for v in a:
        g = gcd(g, v)
    if g == 0:
        return (), Fraction(row[0])
    return tuple(v // g for v in a), Fraction(row[0], g)


def dedup_inequalities(rows: Iterable[Row]) -> tuple[list[Row], bool]:
    """Keep the tightest row per direction; drop trivially true rows.

    Returns ``(rows, infeasible)`` where ``infeasible`` flags a row ``b >= 0``
    with ``b < 0``.
    """
    best: dict[tuple[int, ...], tuple[Fraction, Row]] = {}
    for row in rows:
        key, const = _direction_key(row)
        if not key:
            if const < 0:
                return [], True
            continue
        cur = best.get(key)
        if cur is None or const < cur[0]:
            best[key] = (const, row)
    return [r for _, r in best.values()], False


@dataclass(frozen=True)
class HPolytope:
    dim: int
    inequalities: tuple[Row, ...] = ()
    equalities: tuple[Row, ...] = ()
    names: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        for row in self.inequalities + self.equalities:
            if len(row) != self.dim + 1:
                raise PolytopeError(f"row {row} does not match dimension {self.dim}")
        if self.names is not None and len(self.names) != self.dim:
            raise PolytopeError("names do not match dimension")

    @classmethod
    def from_rows(cls, dim: int, inequalities: Iterable[Sequence] = (),
                  equalities: Iterable[Sequence] = (), names=None) -> "HPolytope":
        ineqs, bad = dedup_inequalities(integer_row(r) for r in inequalities)
        eqs = sorted({equality_row(r) for r in equalities})
        if bad or any(all(v == 0 for v in r[1:]) and r[0] != 0 for r in eqs):
            return cls.empty(dim, names)
        eqs = [r for r in eqs if any(r)]
        return cls(dim, tuple(sorted(ineqs)), tuple(eqs), tuple(names) if names else None)

    @classmethod
    def empty(cls, dim: int, names=None) -> "HPolytope":
        return cls(dim, ((-1,) + (0,) * dim,), (), tuple(names) if names else None)

    @classmethod
    def point(cls, coords: Sequence, names=None) -> "HPolytope":
        d = len(coords)
        eqs = []
        for i, x in enumerate(coords):
            row = [-Fraction(x)] + [0] * d
            row[i + 1] = 1
            eqs.append(row)
        return cls.from_rows(d, (), eqs, names)

    @classmethod
    def box(cls, lows: Sequence, highs: Sequence) -> "HPolytope":
        d = len(lows)
        rows = []
        for i, (lo, hi) in enumerate(zip(lows, highs)):
            r = [-Fraction(lo)] + [0] * d
            r[i + 1] = 1
            rows.append(r)
            r = [Fraction(hi)] + [0] * d
            r[i + 1] = -1
            rows.append(r)
        return cls.from_rows(d, rows)

    @property
    def is_trivially_empty(self) -> bool:
        return any(r[0] < 0 and not any(r[1:]) for r in self.inequalities)

    def with_names(self, names) -> "HPolytope":
        return HPolytope(self.dim, self.inequalities, self.equalities, tuple(names))

    def all_rows_as_inequalities(self) -> list[Row]:
        rows = list(self.inequalities)
        for e in self.equalities:
            rows.append(e)
            rows.append(tuple(-v for v in e))
        return rows

    def rational_rows(self):
        """Inequalities and equalities as ``(coeffs, constant)`` pairs of Fractions."""
        conv = lambda r: (tuple(Fraction(v) for v in r[1:]), Fraction(r[0]))
        return [conv(r) for r in self.inequalities], [conv(r) for r in self.equalities]

    def __str__(self) -> str:
        names = self.names or tuple(f"x{i + 1}" for i in range(self.dim))

        def fmt(row, op):
            terms = []
            for a, nm in zip(row[1:], names):
                if a:
                    terms.append(f"{'+' if a > 0 else '-'} {'' if abs(a) == 1 else abs(a)}{nm}")
            lhs = " ".join(terms).lstrip("+ ") or "0"
            return f"{lhs} {op} {-row[0]}"

        lines = [fmt(r, ">=") for r in self.inequalities] + [fmt(r, "==") for r in self.equalities]
        return "\n".join(lines)


def check_same_dim(a: HPolytope, b: HPolytope) -> None:
    if a.dim != b.dim:
        raise PolytopeError(f"dimension mismatch: {a.dim} vs {b.dim}")


def concatenate(a: HPolytope, b: HPolytope) -> HPolytope:
    check_same_dim(a, b)
    return HPolytope.from_rows(a.dim, a.inequalities + b.inequalities,
                               a.equalities + b.equalities, a.names or b.names)


def contains(p: HPolytope, x: Sequence) -> bool:
    if len(x) != p.dim:
        raise PolytopeError(f"point of length {len(x)} in dimension {p.dim}")
    xs = [Fraction(v) for v in x]
    for r in p.inequalities:
        if r[0] + sum(a * v for a, v in zip(r[1:], xs)) < 0:
            return False
    for r in p.equalities:
        if r[0] + sum(a * v for a, v in zip(r[1:], xs)) != 0:
            return False
    return True


def contains_float(p: HPolytope, x: Sequence[float], tol: float = 1e-9) -> bool:
    for r in p.inequalities:
        if r[0] + sum(a * v for a, v in zip(r[1:], x)) < -tol * max(1, max(abs(v) for v in r)):
            return False
    for r in p.equalities:
        if abs(r[0] + sum(a * v for a, v in zip(r[1:], x))) > tol * max(1, max(abs(v) for v in r)):
            return False
    return True


def substitute(rows: Iterable[Row], k: int, expr: Sequence[Fraction]) -> list[list[Fraction]]:
    """Replace coordinate ``k`` (0-based) by the affine expression
    ``expr = (c, e_1..e_d)`` (with ``e_{k+1}`` ignored) and drop its column."""
    out = []
    for r in rows:
        coef = r[k + 1]
        new = [Fraction(v) for v in r]
        if coef:
            for j, e in enumerate(expr):
                if j != k + 1:
                    new[j] += coef * e
        del new[k + 1]
        out.append(new)
    return out


def fix_coordinates(p: HPolytope, assignments: Mapping[int, object]) -> HPolytope:
    """Fix coordinates ``{index: value}`` (0-based) and drop them from the space."""
    for k in assignments:
        if not 0 <= k < p.dim:
            raise PolytopeError(f"coordinate {k} out of range for dimension {p.dim}")
    ineqs = [list(map(Fraction, r)) for r in p.inequalities]
    eqs = [list(map(Fraction, r)) for r in p.equalities]
    for k in sorted(assignments, reverse=True):
        val = Fraction(assignments[k])
        for rows in (ineqs, eqs):
            for r in rows:
                r[0] += r[k + 1] * val
                del r[k + 1]
    names = None
    if p.names:
        names = [nm for i, nm in enumerate(p.names) if i not in assignments]
    return HPolytope.from_rows(p.dim - len(assignments), ineqs, eqs, names)


def embed(p: HPolytope, dim: int, positions: Sequence[int], names=None) -> HPolytope:
    """Lift ``p`` into ``dim`` coordinates, placing its coordinate ``i`` at ``positions[i]``."""
    if len(positions) != p.dim:
        raise PolytopeError("positions do not match the polytope dimension")

    def lift(r):
        out = [0] * (dim + 1)
        out[0] = r[0]
        for a, pos in zip(r[1:], positions):
            out[pos + 1] = a
        return tuple(out)

    return HPolytope(dim, tuple(lift(r) for r in p.inequalities),
                     tuple(lift(r) for r in p.equalities), tuple(names) if names else None)


def affine_image_rows(rows: Iterable[Sequence], matrix: Sequence[Sequence], offset: Sequence) -> list:
    """Rows of ``{x : row(x) >= 0}`` rewritten in coordinates ``y`` with ``x = M y + offset``."""
    out = []
    for r in rows:
        b = Fraction(r[0]) + sum(Fraction(a) * Fraction(o) for a, o in zip(r[1:], offset))
        ncols = len(matrix[0]) if matrix else 0
        coeffs = [sum(Fraction(a) * Fraction(matrix[i][j]) for i, a in enumerate(r[1:]))
                  for j in range(ncols)]
        out.append([b] + coeffs)
    return out
