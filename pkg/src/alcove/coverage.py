"""Depth sets of native gate sets inside the C2 alcove.

Points of the alcove are handled in the three free coordinates
``(d1, d2, d3)``; the fourth is ``-(d1 + d2 + d3)``.  The images of all
``n``-gate circuits, Pi(P^n_S), are built recursively from the monodromy
polytope: constrain the first factor to a part of Pi(P^{n-1}_S), the second to
a gate image, project out both, and clip to the alcove.
"""

from __future__ import annotations

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import gates as _gates
from .polytope import (
    HPolytope, PolytopeUnion, embed, enumerate_vertices, fm_eliminate, intersect,
    polytope_to_json, to_lrs_h, union_volume, vertices_to_json, volume,
)
from .polytope.hrep import concatenate, contains_float
from .qlr import LinearInequality, c2_branches, rho_precompose, su4_inequalities
from .su4 import AlcovePoint, ValidationError, canonicalize, haar_batch, pi_invariant, pi_invariant_batch

log = logging.getLogger(__name__)

F = Fraction
DELTA_NAMES = ("d1", "d2", "d3")


# ---------------------------------------------------------------------------
# the alcove in free coordinates


def _alcove_closure() -> HPolytope:
    rows = [
        (0, 1, -1, 0),    # d1 >= d2
        (0, 0, 1, -1),    # d2 >= d3
        (0, 1, 1, 2),     # d3 >= d4
        (1, -2, -1, -1),  # d4 >= d1 - 1
        (1, -2, 0, 2),    # d1 <= d3 + 1/2
    ]
    return HPolytope.from_rows(3, rows, (), DELTA_NAMES)


ALCOVE_C2 = _alcove_closure()
ALCOVE_VOLUME = volume(ALCOVE_C2)

E_POINTS = {
    "e1": AlcovePoint(F(0), F(0), F(0), F(0)),
    "e2": AlcovePoint(F(1, 4), F(1, 4), F(-1, 4), F(-1, 4)),
    "e3": AlcovePoint(F(1, 2), F(0), F(0), F(-1, 2)),
    "e4": AlcovePoint(F(1, 4), F(1, 4), F(1, 4), F(-3, 4)),
    "e5": AlcovePoint(F(3, 8), F(3, 8), F(-1, 8), F(-5, 8)),
    "e6": AlcovePoint(F(3, 8), F(-1, 8), F(-1, 8), F(-1, 8)),
}


def to_free(p: Sequence) -> tuple:
    return tuple(p[:3])


def from_free(x: Sequence) -> AlcovePoint:
    x = [F(v) if isinstance(v, (int, Fraction)) else v for v in x]
    return AlcovePoint(x[0], x[1], x[2], -(x[0] + x[1] + x[2]))


def normalized_volume(p: HPolytope | PolytopeUnion | Sequence[HPolytope]) -> Fraction:
    if isinstance(p, HPolytope):
        return volume(p) / ALCOVE_VOLUME
    return union_volume(p) / ALCOVE_VOLUME


# ---------------------------------------------------------------------------
# gate descriptors


class CoverageError(RuntimeError):
    """Coverage could not be completed (carries the achieved volume)."""

    def __init__(self, message: str, volume: Fraction | None = None):
        super().__init__(message)
        self.volume = volume


class UncoveredError(CoverageError):
    """A point is not reached within the computed depth."""


@dataclass(frozen=True)
class GateDescriptor:
    name: str
    alcove_image: HPolytope
    endpoints: tuple[AlcovePoint, ...]

    def __post_init__(self):
        if self.alcove_image.dim != 3:
            raise ValidationError("gate images live in the three free alcove coordinates")

    @property
    def is_family(self) -> bool:
        return len(self.endpoints) == 2

    @classmethod
    def from_point(cls, name: str, p: Sequence) -> "GateDescriptor":
        q = canonicalize(p)
        if not q.is_exact:
            raise ValidationError(f"gate {name} has no exact alcove point; use pi-rational angles")
        return cls(name, HPolytope.point(to_free(q), DELTA_NAMES), (q,))

    @classmethod
    def from_segment(cls, name: str, a: Sequence, b: Sequence) -> "GateDescriptor":
        a, b = canonicalize(a), canonicalize(b)
        ia, ea = _segment_rows(to_free(a), to_free(b))
        return cls(name, HPolytope.from_rows(3, ia, ea, DELTA_NAMES), (a, b))


def _segment_rows(a, b):
    """H-description of the segment ``[a, b]`` in three coordinates."""
    a = [F(v) for v in a]
    b = [F(v) for v in b]
    d = [y - x for x, y in zip(a, b)]
    k = next(i for i, v in enumerate(d) if v != 0)
    eqs = []
    for j in range(3):
        if j == k:
            continue
        # d_k (x_j - a_j) - d_j (x_k - a_k) = 0
        row = [0, 0, 0, 0]
        row[j + 1] += d[k]
        row[k + 1] -= d[j]
        row[0] = -d[k] * a[j] + d[j] * a[k]
        eqs.append(row)
    lo, hi = sorted((a[k], b[k]))
    ineqs = [[-lo] + [1 if i == k else 0 for i in range(3)],
             [hi] + [-1 if i == k else 0 for i in range(3)]]
    return ineqs, eqs


def _family_point(name: str, s: Fraction) -> AlcovePoint:
    """Exact Pi of a family member at angle ``s * pi``."""
    if name == "CPHASE":
        d = (s / 4, s / 4, -s / 4, -s / 4)
    elif name == "XY":
        d = (s / 2, 0, 0, -s / 2)
    elif name == "PSWAP":
        d = (F(3, 4) - s / 2, F(-1, 4) + s / 2, F(-1, 4) + s / 2, F(-1, 4) - s / 2)
    else:
        raise ValidationError(f"unknown family {name!r}")
    return canonicalize([F(v) for v in d])


_FAMILY_SEGMENTS = {
    "CPHASE": (E_POINTS["e1"], E_POINTS["e2"]),
    "XY": (E_POINTS["e1"], E_POINTS["e3"]),
    "PSWAP": (E_POINTS["e3"], E_POINTS["e4"]),
}


def standard_gate_alcove(name: str) -> GateDescriptor:
    """Alcove image of a named gate (``"CZ"``, ``"DB"``, ``"XY(3pi/4)"``) or family (``"XY"``)."""
    base, arg = _gates.split_name(name)
    if base in _FAMILY_SEGMENTS and arg is None:
        a, b = _FAMILY_SEGMENTS[base]
        return GateDescriptor.from_segment(base, a, b)
    if base in _FAMILY_SEGMENTS:
        angle = _gates.parse_angle(arg)
        if angle.exact:
            s = angle.pi_units % 2
            return GateDescriptor.from_point(f"{base}({angle})", _family_point(base, s))
        return GateDescriptor.from_point(f"{base}({angle})", pi_invariant(_gates.gate_matrix(name)))
    if base in _gates.FIXED_GATES and arg is None:
        return GateDescriptor.from_point(base, pi_invariant(_gates.FIXED_GATES[base]))
    raise ValidationError(f"unknown gate {name!r}")


def matrix_gate(name: str, m) -> GateDescriptor:
    return GateDescriptor.from_point(name, pi_invariant(m))


@dataclass(frozen=True)
class GateSet:
    gates: tuple[GateDescriptor, ...]

    def __post_init__(self):
        if not self.gates:
            raise ValidationError("a gate set needs at least one gate")
        names = [g.name for g in self.gates]
        if len(set(names)) != len(names):
            raise ValidationError(f"duplicate gate names in {names}")

    @classmethod
    def of(cls, *names_or_gates) -> "GateSet":
        items = []
        for g in names_or_gates:
            items.append(g if isinstance(g, GateDescriptor) else standard_gate_alcove(g))
        return cls(tuple(items))

    @staticmethod
    def split_names(text: str) -> list[str]:
        """Split on commas that are not inside parentheses."""
        parts, depth, cur = [], 0, ""
        for ch in text:
            if ch == "," and depth == 0:
                parts.append(cur)
                cur = ""
                continue
            depth += (ch == "(") - (ch == ")")
            cur += ch
        parts.append(cur)
        parts = [p.strip() for p in parts if p.strip()]
        if not parts:
            raise ValidationError("empty gate set")
        return parts

    @classmethod
    def parse(cls, text: str) -> "GateSet":
        """Comma-separated names; commas inside parentheses are kept."""
        return cls.of(*cls.split_names(text))

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(g.name for g in self.gates)

    def __str__(self) -> str:
        return "{" + ", ".join(self.names) + "}"


# ---------------------------------------------------------------------------
# the recursion


_BRANCHES = None


def _branches():
    global _BRANCHES
    if _BRANCHES is None:
        _BRANCHES = tuple(b.free_polytope() for b in c2_branches(su4_inequalities()))
    return _BRANCHES


def monodromy_step(alpha: HPolytope, beta: HPolytope, branch: int) -> HPolytope:
    """Products of a class in ``alpha`` with a class in ``beta`` (one C2 branch)."""
    lifted = concatenate(
        concatenate(_branches()[branch], embed(alpha, 9, (0, 1, 2))),
        embed(beta, 9, (3, 4, 5)),
    )
    projected = fm_eliminate(lifted, range(6), method="vertices").with_names(DELTA_NAMES)
    return intersect(projected, ALCOVE_C2)


def _step_job(args):
    alpha, beta, branch = args
    return monodromy_step(alpha, beta, branch)


def _workers(threads: int | None) -> int:
    if threads is None:
        threads = int(os.environ.get("MONODROMY_THREADS", "1") or 1)
    return max(1, threads)


def extend(parts: PolytopeUnion, gates: GateSet, threads: int | None = None) -> PolytopeUnion:
    jobs = [(x, g.alcove_image, br) for x in parts for g in gates.gates for br in (0, 1)]
    n = _workers(threads)
    if n > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=n) as pool:
            results = list(pool.map(_step_job, jobs))
    else:
        results = [_step_job(j) for j in jobs]
    return PolytopeUnion.of(results)


@dataclass
class CoverageReport:
    gate_set: GateSet
    depth_sets: list[PolytopeUnion]
    volumes: list[Fraction]
    nesting_verified: bool
    expected_depth: Fraction | None = None
    covers_alcove: bool = False
    notes: list[str] = field(default_factory=list)

    @property
    def max_depth_reached(self) -> int:
        return len(self.depth_sets) - 1

    @property
    def complete(self) -> bool:
        return bool(self.volumes) and self.volumes[-1] == 1

    def vertex_sets(self, n: int) -> list[frozenset[AlcovePoint]]:
        return [frozenset(from_free(v) for v in enumerate_vertices(p).vertices)
                for p in self.depth_sets[n]]

    def to_json(self, lrs: bool = False) -> dict:
        out = {
            "gates": list(self.gate_set.names),
            "max_depth_reached": self.max_depth_reached,
            "nesting_verified": self.nesting_verified,
            "covers_alcove": self.covers_alcove,
            "expected_depth": None if self.expected_depth is None else str(self.expected_depth),
            "volumes": [str(v) for v in self.volumes],
            "depth_sets": [],
        }
        for n, u in enumerate(self.depth_sets):
            entry = []
            for p in u:
                verts = sorted(from_free(v) for v in enumerate_vertices(p).vertices)
                part = {"vertices": vertices_to_json(verts)}
                if lrs:
                    part["lrs"] = to_lrs_h(p, f"depth{n}")
                entry.append(part)
            out["depth_sets"].append(entry)
        return out


def _cumulative_volume(report_sets: list[PolytopeUnion], nesting: bool) -> Fraction:
    if nesting:
        return normalized_volume(report_sets[-1])
    return normalized_volume([p for u in report_sets for p in u])


def depth_sets(s: GateSet, n_max: int, threads: int | None = None) -> CoverageReport:
    """Build Pi(P^n_S) for ``n = 0..n_max``, stopping early once the alcove is covered."""
    if n_max < 1:
        raise ValidationError("n_max must be at least 1")
    identity = PolytopeUnion.of([HPolytope.point((0, 0, 0), DELTA_NAMES)])
    first = PolytopeUnion.of([g.alcove_image for g in s.gates])
    sets = [identity, first]
    vols = [Fraction(0), normalized_volume(first)]
    nesting = None
    while len(sets) <= n_max and vols[-1] < 1:
        nxt = extend(sets[-1], s, threads)
        if nesting is None:
            nesting = all(_inside(g.alcove_image, nxt) for g in s.gates)
        sets.append(nxt)
        vols.append(_cumulative_volume(sets[1:], nesting))
        log.info("depth %d: %d parts, volume %s", len(sets) - 1, len(nxt), vols[-1])
    report = CoverageReport(s, sets, vols, bool(nesting))
    if report.complete:
        last = sets[-1]
        report.covers_alcove = any(
            enumerate_vertices(p).as_set() == enumerate_vertices(ALCOVE_C2).as_set() for p in last
        ) or normalized_volume(last) == 1
        report.expected_depth = _expected(report)
    return report


def _inside(p: HPolytope, u: PolytopeUnion) -> bool:
    verts = enumerate_vertices(p).vertices
    if len(verts) == 1:
        return u.contains(verts[0])
    # a segment is inside a union of convex parts if it is inside one part,
    # or if the parts cover it piecewise; test endpoints and a fine rational grid
    if any(all(_contains(q, v) for v in verts) for q in u):
        return True
    a, b = verts[0], verts[-1]
    return all(u.contains([x + F(k, 64) * (y - x) for x, y in zip(a, b)]) for k in range(65))


def _contains(p: HPolytope, x) -> bool:
    from .polytope import contains
    return contains(p, x)


def _expected(report: CoverageReport) -> Fraction:
    vols = report.volumes
    if not report.complete:
        raise CoverageError("coverage incomplete", vols[-1] if vols else None)
    total = Fraction(0)
    for n in range(1, len(vols)):
        total += n * (vols[n] - vols[n - 1])
    return total


def expected_depth(report: CoverageReport) -> Fraction:
    if not report.complete:
        raise CoverageError(
            f"coverage incomplete at depth {report.max_depth_reached}: volume {report.volumes[-1]}",
            report.volumes[-1],
        )
    return _expected(report)


def min_depth(x: Sequence, report: CoverageReport) -> int:
    """Smallest ``n`` with ``x`` in Pi(P^n_S); raises :class:`UncoveredError` otherwise."""
    p = canonicalize(x)
    free = to_free(p)
    for n, u in enumerate(report.depth_sets):
        if p.is_exact:
            if u.contains(free):
                return n
        elif u.contains_float([float(v) for v in free], 1e-9):
            return n
    raise UncoveredError(
        f"point {p} exceeds computed depth {report.max_depth_reached}",
        report.volumes[-1] if report.volumes else None,
    )


# ---------------------------------------------------------------------------
# Monte-Carlo and the XY slice


def _union_mask(u: PolytopeUnion, pts: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    inside = np.zeros(len(pts), dtype=bool)
    for p in u:
        ok = np.ones(len(pts), dtype=bool)
        for r in p.inequalities:
            a = np.array([float(v) for v in r], dtype=float)
            ok &= a[0] + pts @ a[1:] >= -tol * max(1.0, np.abs(a).max())
        for r in p.equalities:
            a = np.array([float(v) for v in r], dtype=float)
            ok &= np.abs(a[0] + pts @ a[1:]) <= tol * max(1.0, np.abs(a).max()) + 1e-9
        inside |= ok
    return inside


def haar_fraction(report: CoverageReport, n: int, samples: int = 100_000, seed=0,
                  tol: float = 1e-9) -> float:
    """Fraction of Haar-random unitaries whose class lies in Pi(P^n_S).

    Classes reached at lower depth count as well when the depth sets are nested
    (the usual case); otherwise only the depth-``n`` set is tested.
    """
    if n > report.max_depth_reached:
        raise CoverageError(f"report only reaches depth {report.max_depth_reached}")
    if samples < 1:
        raise ValidationError("samples must be positive")
    pts = pi_invariant_batch(haar_batch(samples, seed))[:, :3]
    return float(_union_mask(report.depth_sets[n], pts, tol).mean())


def _xy_slice_rows(t: Fraction) -> list[LinearInequality]:
    """The twelve inequalities cut out by alpha = beta = (t/2, 0, 0, -t/2), plus the alcove of delta."""
    h = t / 2
    spec = [
        ((0, 0, 0, 1), t), ((0, 0, 1, 1), t),
        ((-1, 0, 0, 0), t), ((0, 0, 1, 0), h),
        ((1, 0, 0, 1), h), ((0, -1, 0, 0), h),
        ((0, 1, 0, 0), 0), ((1, 0, 0, 1), 1 - t),
        ((0, 0, -1, 0), 0), ((0, 0, 0, 1), 1 - h),
        ((0, 1, 1, 0), 1 - t), ((-1, 0, 0, 0), 1 - h),
    ]
    rows = [LinearInequality(tuple(map(F, c)), F(k)) for c, k in spec]
    for j in range(3):
        c = [0, 0, 0, 0]
        c[j], c[j + 1] = 1, -1
        rows.append(LinearInequality(tuple(map(F, c)), F(0)))
    rows.append(LinearInequality((F(-1), F(0), F(0), F(1)), F(1)))
    return rows


def _lower(rows: Iterable[LinearInequality]) -> list[list[Fraction]]:
    out = []
    for r in rows:
        c = r.coeffs
        out.append([r.constant] + [c[j] - c[3] for j in range(3)])
    return out


def xy_slice(t) -> PolytopeUnion:
    """Pi(P^2_{XY_{pi t}}) from the closed-form slice inequalities."""
    t = F(t)
    if not 0 <= t <= 1:
        raise ValidationError("t must lie in [0, 1]")
    rows = _xy_slice_rows(t)
    parts = []
    for variant in (rows, [rho_precompose(r, 0) for r in rows]):
        p = HPolytope.from_rows(3, _lower(variant), (), DELTA_NAMES)
        parts.append(intersect(p, ALCOVE_C2))
    return PolytopeUnion.of(parts)


def xy_slice_volume(t, method: str = "slice") -> Fraction:
    """Normalized volume of Pi(P^2_{XY_{pi t}}).

    ``method="slice"`` uses the twelve closed-form inequalities;
    ``method="general"`` runs the full monodromy recursion for the gate.
    """
    t = F(t)
    if not 0 <= t <= 1:
        raise ValidationError("t must lie in [0, 1]")
    if method == "slice":
        return normalized_volume(xy_slice(t))
    if method == "general":
        g = GateDescriptor.from_point(f"XY({t}pi)", _family_point("XY", t))
        return normalized_volume(extend(PolytopeUnion.of([g.alcove_image]), GateSet((g,))))
    raise ValueError(f"unknown method {method!r}")


def xy_volume_formula(t) -> Fraction:
    """Piecewise cubic reference for :func:`xy_slice_volume`."""
    t = F(t)
    if t <= F(1, 2):
        return 4 * t ** 3
    if t <= F(3, 4):
        return F(15, 2) - 36 * t + 60 * t ** 2 - 32 * t ** 3
    return -6 + 18 * t - 12 * t ** 2


def report_summary(report: CoverageReport) -> dict:
    """Compact JSON view used by the command line."""
    data = report.to_json()
    data["parts"] = [len(u) for u in report.depth_sets]
    return data


__all__ = [
    "ALCOVE_C2", "ALCOVE_VOLUME", "E_POINTS", "GateDescriptor", "GateSet", "CoverageReport",
    "CoverageError", "UncoveredError", "standard_gate_alcove", "matrix_gate", "depth_sets",
    "min_depth", "expected_depth", "haar_fraction", "xy_slice", "xy_slice_volume",
    "xy_volume_formula", "normalized_volume", "to_free", "from_free", "monodromy_step", "extend",
    "polytope_to_json",
]
