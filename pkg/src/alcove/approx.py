"""Fidelity between local-equivalence classes and fidelity-driven approximate
compilation against the depth sets of a gate set."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations, product
from typing import Callable, Mapping, Sequence

import numpy as np
from scipy.optimize import minimize as sp_minimize

from .circuits import Circuit, Local, evaluate, realize
from .coverage import CoverageReport, GateSet, depth_sets, from_free, to_free
from .polytope import HPolytope, PolytopeUnion, contains, contains_float, enumerate_vertices
from .su4 import (MAGIC, MAGIC_DAG, AlcovePoint, CanonicalParams, ValidationError, as_unitary,
                  can_from_alcove, canonical_decompose, canonical_gate, canonicalize,
                  local_equivalence, pi_invariant, snap_point)

log = logging.getLogger(__name__)

TAU_OPT = 1e-6

_PERMS = np.array(list(permutations(range(4))))
_SIGNS = np.array([s for s in product((1, -1), repeat=4) if np.prod(s) == 1], dtype=float)


def avg_gate_fidelity(u, v) -> float:
    """``(4 + |tr(u^dag v)|^2) / 20`` for two-qubit unitaries."""
    a, b = as_unitary(u), as_unitary(v)
    return float((4 + abs(np.trace(a.conj().T @ b)) ** 2) / 20)


def _pattern_sums(p: np.ndarray, qs: np.ndarray) -> np.ndarray:
    """``|sum_j s_j exp(i pi (q_sigma(j) - p_j))|^2`` for all (q, sigma, s): shape (N, 24, 8)."""
    phase = np.exp(1j * np.pi * (qs[:, _PERMS] - p))
    return np.abs(phase @ _SIGNS.T) ** 2


def class_fidelity_batch(p: Sequence, qs) -> np.ndarray:
    """Best average gate fidelity between the class ``p`` and each class in ``qs``.

    Two canonical gates are diagonal in the magic basis with eigenvalues
    ``+-exp(i pi p_j)``; aligning them by any permutation and any sign
    pattern of product one is realized by local gates, so the best trace is
    the maximum of the 24 * 8 phase sums.
    """
    p = np.asarray(p, dtype=float)
    qs = np.atleast_2d(np.asarray(qs, dtype=float))
    return (4 + _pattern_sums(p, qs).reshape(len(qs), -1).max(axis=1)) / 20


def class_fidelity(p: Sequence, q: Sequence) -> float:
    return float(class_fidelity_batch(p, [q])[0])


def _best_pattern(p: Sequence, q: Sequence) -> tuple[np.ndarray, np.ndarray]:
    sums = _pattern_sums(np.asarray(p, float), np.atleast_2d(np.asarray(q, float)))[0]
    i, j = np.unravel_index(np.argmax(sums), sums.shape)
    return _PERMS[i], _SIGNS[j]


_EXACT_COS = {Fraction(0): Fraction(1), Fraction(1, 3): Fraction(1, 2),
              Fraction(1, 2): Fraction(0), Fraction(2, 3): Fraction(-1, 2), Fraction(1): Fraction(-1)}


def _cos_pi(x: Fraction) -> Fraction | None:
    x = x % 2
    if x > 1:
        x = 2 - x
    return _EXACT_COS.get(x)


def class_fidelity_exact(p: Sequence, q: Sequence) -> Fraction | None:
    """Exact value when every cosine in the best phase sum is rational."""
    if not all(isinstance(x, (int, Fraction)) for x in (*p, *q)):
        return None
    sigma, signs = _best_pattern(p, q)
    theta = [Fraction(q[sigma[j]]) - Fraction(p[j]) for j in range(4)]
    total = Fraction(4)
    for j in range(4):
        for k in range(j + 1, 4):
            c = _cos_pi(theta[j] - theta[k])
            if c is None:
                return None
            total += 2 * int(signs[j] * signs[k]) * c
    return (4 + total) / 20


# ---------------------------------------------------------------------------
# optimizing over a depth set


@dataclass(frozen=True)
class BestPoint:
    point: AlcovePoint
    fidelity: float
    exact_fidelity: Fraction | None = None

    @property
    def infidelity(self) -> float:
        return 1.0 - self.fidelity


def _as_union(region) -> PolytopeUnion:
    if isinstance(region, HPolytope):
        return PolytopeUnion.of([region])
    return region


def _part_vertices(part: HPolytope) -> np.ndarray:
    return np.array([[float(x) for x in v] for v in enumerate_vertices(part).vertices])


def _constraints(part: HPolytope):
    cons = []
    if part.inequalities:
        ineq = np.array(part.inequalities, dtype=float)
        cons.append({"type": "ineq", "fun": lambda x, r=ineq: r[:, 0] + r[:, 1:] @ x,
                     "jac": lambda x, r=ineq: r[:, 1:]})
    if part.equalities:
        eq = np.array(part.equalities, dtype=float)
        cons.append({"type": "eq", "fun": lambda x, r=eq: r[:, 0] + r[:, 1:] @ x,
                     "jac": lambda x, r=eq: r[:, 1:]})
    return cons


def _free_objective(target: np.ndarray):
    def f(x):
        q = np.array([x[0], x[1], x[2], -x.sum()])
        return -class_fidelity_batch(target, [q])[0]
    return f


def _starts(verts: np.ndarray, n_random: int, rng: np.random.Generator) -> np.ndarray:
    centroid = verts.mean(axis=0, keepdims=True)
    weights = rng.dirichlet(np.ones(len(verts)), size=n_random)
    return np.vstack([verts, centroid, weights @ verts])


def _snap_candidate(x: np.ndarray, part: HPolytope, target, fid: float):
    """Replace ``x`` by a nearby small-denominator rational point if it is
    feasible and at least as good."""
    q = snap_point([x[0], x[1], x[2], -x.sum()], tol=1e-5)
    if all(isinstance(v, Fraction) for v in q) and contains(part, q[:3]):
        f = class_fidelity(target, q)
        if f >= fid - 1e-9:
            return AlcovePoint(*q), f
    return AlcovePoint(*(float(v) for v in (x[0], x[1], x[2], -x.sum()))), fid


def best_in_set(target: Sequence, region: HPolytope | PolytopeUnion, starts: int = 20,
                seed: int = 0) -> BestPoint:
    """Point of ``region`` (free coordinates) with the largest class fidelity to ``target``.

    Multi-start SLSQP per convex part; the starts are the vertices, the
    centroid and random interior points, topped up to ``starts`` per part.
    """
    u = _as_union(region)
    if len(u) == 0:
        raise ValidationError("region is empty")
    target = canonicalize(target)
    t = np.array([float(v) for v in target])
    if target.is_exact and u.contains(to_free(target)):
        return BestPoint(target, 1.0, Fraction(1))
    if not target.is_exact and u.contains_float(t[:3], 1e-12):
        return BestPoint(target, 1.0)

    rng = np.random.default_rng(seed)
    objective = _free_objective(t)
    best: tuple[float, AlcovePoint, HPolytope] | None = None
    for part in u:
        verts = _part_vertices(part)
        cons = _constraints(part)
        if len(verts) == 1:
            fid = -objective(verts[0])
            if best is None or fid > best[0] + 1e-13:
                best = (fid, verts[0], part)
            continue
        x0s = _starts(verts, max(0, starts - len(verts) - 1), rng)
        for x0 in x0s:
            res = sp_minimize(objective, x0, method="SLSQP", constraints=cons,
                              options={"ftol": 1e-12, "maxiter": 200})
            x = res.x if contains_float(part, res.x, 1e-9) else x0
            fid = -objective(x)
            if best is None or fid > best[0] + 1e-13:
                best = (fid, x, part)
    fid, x, part = best
    point, fid = _snap_candidate(np.asarray(x, float), part, target, fid)
    return BestPoint(point, fid, class_fidelity_exact(target, point) if point.is_exact else None)


def grid_oracle(target: Sequence, region: HPolytope | PolytopeUnion, step: float = 0.002,
                coarse: float = 0.01) -> BestPoint:
    """Slow reference: scan a coarse grid of the region, then a ``step`` grid
    around the best coarse candidates."""
    u = _as_union(region)
    t = np.array([float(v) for v in canonicalize(target)])
    best_f, best_x = -1.0, None
    for part in u:
        rows = np.array(part.all_rows_as_inequalities(), dtype=float)
        verts = _part_vertices(part)
        lo, hi = verts.min(axis=0), verts.max(axis=0)

        def scan(lo, hi, h):
            axes = [np.arange(a, b + h / 2, h) for a, b in zip(lo, hi)]
            pts = np.stack(np.meshgrid(*axes, indexing="ij"), -1).reshape(-1, 3)
            keep = (rows[:, :1].T + pts @ rows[:, 1:].T >= -1e-12).all(axis=1)
            pts = pts[keep]
            if not len(pts):
                return np.empty(0), pts
            full = np.column_stack([pts, -pts.sum(axis=1)])
            vals = np.concatenate([class_fidelity_batch(t, full[i:i + 20000])
                                   for i in range(0, len(full), 20000)])
            return vals, pts

        # vertices are always candidates (optima may sit on lower-dimensional parts)
        vals, pts = scan(lo, hi, coarse)
        vv = class_fidelity_batch(t, np.column_stack([verts, -verts.sum(axis=1)]))
        cand = list(verts[np.argsort(vv)[-3:]])
        if len(vals):
            cand += list(pts[np.argsort(vals)[-5:]])
        for c in cand:
            fv, fp = scan(np.maximum(c - coarse, lo), np.minimum(c + coarse, hi), step)
            allv = np.concatenate([fv, [class_fidelity(t, [*c, -c.sum()])]])
            allp = np.vstack([fp, c[None, :]]) if len(fp) else c[None, :]
            i = int(np.argmax(allv))
            if allv[i] > best_f:
                best_f, best_x = float(allv[i]), allp[i]
    return BestPoint(from_free(tuple(float(v) for v in best_x)), best_f)


# ---------------------------------------------------------------------------
# the protocol


@dataclass(frozen=True)
class FidelityModel:
    """Per-gate fidelities; a depth-``n`` circuit is scored as ``F_class * f^n``.

    For a set with several gates the smallest fidelity in the set is used.
    ``score`` may be replaced by any policy ``(class_fidelity, depth) -> score``.
    """

    fidelities: Mapping[str, float]
    default: float = 1.0
    score: Callable[[float, float, int], float] | None = None

    def __post_init__(self):
        for name, f in {**self.fidelities, "default": self.default}.items():
            if not 0 < f <= 1:
                raise ValidationError(f"fidelity for {name} must lie in (0, 1], got {f}")

    @classmethod
    def uniform(cls, f: float) -> "FidelityModel":
        return cls({}, f)

    def gate_fidelity(self, s: GateSet) -> float:
        return min(self.fidelities.get(n, self.default) for n in s.names)

    def evaluate(self, class_fid: float, s: GateSet, depth: int) -> float:
        f = self.gate_fidelity(s)
        if self.score is not None:
            return self.score(class_fid, f, depth)
        return class_fid * f ** depth


@dataclass
class ApproxPlan:
    chosen_depth: int
    target_point: AlcovePoint
    target_can: CanonicalParams
    class_fidelity: float
    total_score: float
    realization: Circuit | None = None
    unitary: np.ndarray | None = field(default=None, repr=False)
    achieved_fidelity: float | None = None
    scores: list[float] = field(default_factory=list)
    exhausted: bool = False
    notes: list[str] = field(default_factory=list)

    @property
    def realization_supported(self) -> bool:
        return self.realization is not None

    def to_json(self) -> dict:
        out = {
            "depth": self.chosen_depth,
            "target_alcove": _point_text(self.target_point),
            "target_can": [float(f"{x:.12g}") for x in self.target_can],
            "class_fidelity": float(f"{self.class_fidelity:.12g}"),
            "score": float(f"{self.total_score:.12g}"),
            "scores": [float(f"{x:.12g}") for x in self.scores],
            "exhausted": self.exhausted,
        }
        if self.realization is not None:
            out["realization"] = self.realization.to_json()
            out["achieved_fidelity"] = float(f"{self.achieved_fidelity:.12g}")
        else:
            out["realization"] = None
            out["note"] = "realization unsupported"
        return out


def _point_text(p: AlcovePoint) -> str:
    if p.is_exact:
        return str(p)
    return "(" + ",".join(f"{float(x):.12g}" for x in p) + ")"


def aligned_target(u, point: Sequence) -> tuple[np.ndarray, tuple]:
    """The unitary of class ``point`` closest to ``u`` in average gate fidelity,
    together with the outer locals ``(L, L')`` of ``u``."""
    l1, params, l2 = canonical_decompose(u)
    lam = np.diag(MAGIC_DAG @ canonical_gate(params) @ MAGIC)
    q = np.array([float(x) for x in point])
    mu_all = np.exp(1j * np.pi * q[_PERMS])[:, None, :] * _SIGNS[None, :, :]
    vals = np.abs(mu_all @ lam.conj()) ** 2
    i, j = np.unravel_index(np.argmax(vals), vals.shape)
    middle = MAGIC @ np.diag(mu_all[i, j]) @ MAGIC_DAG
    return l1.matrix() @ middle @ l2.matrix(), (l1, middle, l2)


def approx_compile(u, s: GateSet, fm: FidelityModel, n_max: int = 5,
                   report: CoverageReport | None = None, threads: int | None = None,
                   seed: int = 0) -> ApproxPlan:
    """Fidelity-weighted choice of depth and target class for ``u``.

    Depths ``n = 1, 2, ...`` are scored by the best class fidelity inside
    ``Pi(P^n_S)`` times the circuit fidelity; the search stops at the first
    decline (keeping the previous depth) or at an exact hit.  ``scores``
    lists every depth evaluated, including the declining one.
    """
    m = as_unitary(u)
    if report is None or report.max_depth_reached < min(n_max, 1):
        report = depth_sets(s, n_max, threads)
    p = pi_invariant(m)
    scores: list[float] = []
    bests: list[BestPoint] = []
    chosen, exhausted = None, False
    for n in range(1, n_max + 1):
        region = report.depth_sets[min(n, report.max_depth_reached)]
        b = best_in_set(p, region, seed=seed)
        score = float(fm.evaluate(b.fidelity, s, n))
        scores.append(score)
        if len(scores) > 1 and score < scores[-2]:
            chosen = n - 1
            break
        bests.append(b)
        if b.fidelity >= 1 - 1e-12:
            chosen = n
            break
    if chosen is None:
        chosen, exhausted = n_max, True
    best = bests[chosen - 1]
    plan = ApproxPlan(chosen, best.point, can_from_alcove(best.point), best.fidelity,
                      scores[chosen - 1], scores=scores, exhausted=exhausted)
    if exhausted:
        plan.notes.append(f"no decline within n_max = {n_max}")

    target, (l1, middle, l2) = aligned_target(m, best.point)
    plan.unitary = target
    circuit = realize(s.names, best.point, chosen)
    if circuit is not None:
        eq = local_equivalence(middle, evaluate(circuit))
        if eq is None:
            circuit = None
        else:
            k1, k2 = eq
            circuit = (Circuit((Local(l2.a, l2.b), Local(k2.a, k2.b)))
                       + circuit + Circuit((Local(k1.a, k1.b), Local(l1.a, l1.b)))).simplified()
    if circuit is not None:
        plan.realization = circuit
        plan.unitary = evaluate(circuit)
    plan.achieved_fidelity = avg_gate_fidelity(m, plan.unitary)
    return plan


__all__ = [
    "TAU_OPT", "avg_gate_fidelity", "class_fidelity", "class_fidelity_batch",
    "class_fidelity_exact", "BestPoint", "best_in_set", "grid_oracle", "FidelityModel",
    "ApproxPlan", "aligned_target", "approx_compile",
]
