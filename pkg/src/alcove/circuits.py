"""Explicit two-qubit circuits: evaluation, the vertex-realization library,
analytic realization formulas for CZ / iSWAP circuits, and the leak test.

Circuits are read left to right (the first op acts first), so evaluation
multiplies right to left.  In a :class:`Local` the ``a`` factor acts on the
first tensor factor (the top wire).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from .coverage import E_POINTS
from .gates import (FAMILIES, FIXED_GATES, SWAP, Angle, gate_matrix, matrix_from_json,
                    matrix_to_json, parse_angle)
from .su4 import (PAULI_I, TAU_RECONSTRUCT, AlcovePoint, CanonicalParams, DecompositionError,
                  ValidationError, as_unitary, can_from_alcove, canonical_gate, canonicalize,
                  cartan_double, local_equivalence, magic_conjugate, pi_invariant, rx, ry, rz,
                  to_special)

TAU_LEAK = 1e-8
LEAK_RATIO = 1e3

H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


# ---------------------------------------------------------------------------
# single-qubit labels

_ROT = {"X": rx, "Y": ry, "Z": rz}
_TOKEN = re.compile(r"\s*(?:([XYZ])\(([^()]*)\)|(I|H))\s*")


def rotation(axis: str, angle) -> tuple[np.ndarray, str]:
    """Matrix and label of ``axis`` rotated by ``angle`` (an :class:`Angle`,
    a text angle, or a Fraction meaning a multiple of pi)."""
    if isinstance(angle, Fraction) or isinstance(angle, int):
        angle = Angle.from_pi(angle)
    elif not isinstance(angle, Angle):
        angle = parse_angle(angle)
    return _ROT[axis](angle.radians), f"{axis}({angle})"


def label_matrix(label: str) -> np.ndarray:
    """Matrix of a label such as ``"Z(-pi/4)X(pi/2)"``; juxtaposition is the
    operator product, so the rightmost factor acts first."""
    pos, m = 0, np.eye(2, dtype=complex)
    label = label.strip()
    if not label:
        raise ValidationError("empty single-qubit label")
    while pos < len(label):
        tok = _TOKEN.match(label, pos)
        if not tok or tok.end() == pos:
            raise ValidationError(f"cannot parse single-qubit label {label!r}")
        if tok.group(3) == "H":
            m = m @ H
        elif tok.group(1):
            m = m @ _ROT[tok.group(1)](parse_angle(tok.group(2)).radians)
        pos = tok.end()
    return m


# ---------------------------------------------------------------------------
# circuit ops


@dataclass(frozen=True, eq=False)
class Local:
    a: np.ndarray
    b: np.ndarray
    labels: tuple[str | None, str | None] = (None, None)

    @classmethod
    def of(cls, top: str = "I", bottom: str = "I") -> "Local":
        return cls(label_matrix(top), label_matrix(bottom), (top, bottom))

    def matrix(self) -> np.ndarray:
        return np.kron(self.a, self.b)

    def to_json(self) -> dict:
        def side(m, lab):
            return lab if lab is not None else matrix_to_json(m)
        return {"local": {"a": side(self.a, self.labels[0]), "b": side(self.b, self.labels[1])}}

    def __repr__(self) -> str:
        la, lb = (x or "U" for x in self.labels)
        return f"Local({la} (x) {lb})"


@dataclass(frozen=True)
class TwoQubit:
    """A named generator; ``flipped`` applies it with the wires exchanged."""

    name: str
    angle: Angle | None = None
    flipped: bool = False

    def matrix(self) -> np.ndarray:
        spec = self.name if self.angle is None else f"{self.name}({self.angle})"
        m = gate_matrix(spec)
        return SWAP @ m @ SWAP if self.flipped else m

    @property
    def spec(self) -> str:
        return self.name if self.angle is None else f"{self.name}({self.angle})"

    def to_json(self) -> dict:
        out: dict = {"gate": self.name}
        if self.angle is not None:
            out["theta"] = str(self.angle)
        if self.flipped:
            out["flipped"] = True
        return out


Op = Local | TwoQubit


@dataclass(frozen=True)
class Circuit:
    ops: tuple[Op, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "ops", tuple(self.ops))

    def __add__(self, other: "Circuit") -> "Circuit":
        return Circuit(self.ops + other.ops)

    def __len__(self) -> int:
        return len(self.ops)

    @property
    def two_qubit_count(self) -> int:
        return sum(isinstance(op, TwoQubit) for op in self.ops)

    def gate_names(self) -> set[str]:
        return {op.name for op in self.ops if isinstance(op, TwoQubit)}

    def simplified(self) -> "Circuit":
        """Merge adjacent local layers (labels are dropped where merged)."""
        out: list[Op] = []
        for op in self.ops:
            if isinstance(op, Local) and out and isinstance(out[-1], Local):
                prev = out.pop()
                out.append(Local(op.a @ prev.a, op.b @ prev.b))
            else:
                out.append(op)
        return Circuit(tuple(out))

    def to_json(self) -> list:
        return [op.to_json() for op in self.ops]

    @classmethod
    def from_json(cls, data: Sequence) -> "Circuit":
        ops: list[Op] = []
        for item in data:
            if "local" in item:
                sides = []
                for key in ("a", "b"):
                    v = item["local"][key]
                    sides.append((label_matrix(v), v) if isinstance(v, str)
                                 else (matrix_from_json(v) if v.get("rows") and len(v["rows"]) == 2
                                       else _bad_local(v), None))
                ops.append(Local(sides[0][0], sides[1][0], (sides[0][1], sides[1][1])))
            elif "gate" in item:
                name = str(item["gate"]).upper()
                theta = item.get("theta")
                angle = parse_angle(theta) if theta is not None else None
                if (name in FIXED_GATES) == (angle is not None) or (
                        angle is not None and name not in FAMILIES):
                    raise ValidationError(f"unknown gate {item!r}")
                ops.append(TwoQubit(name, angle, bool(item.get("flipped", False))))
            else:
                raise ValidationError(f"malformed circuit element {item!r}")
        return cls(tuple(ops))


def _bad_local(v):
    raise ValidationError(f"malformed local factor {v!r}")


def gate(name: str, flipped: bool = False) -> TwoQubit:
    """A two-qubit op from a spec such as ``"CZ"`` or ``"XY(3pi/4)"``."""
    from .gates import split_name

    base, arg = split_name(name)
    op = TwoQubit(base, parse_angle(arg) if arg is not None else None, flipped)
    op.matrix()  # validates the name eagerly
    return op


def evaluate(c: Circuit) -> np.ndarray:
    m = np.eye(4, dtype=complex)
    for op in c.ops:
        m = op.matrix() @ m
    return m


def circuit_invariant(c: Circuit) -> AlcovePoint:
    return pi_invariant(evaluate(c))


# ---------------------------------------------------------------------------
# the vertex library

E = E_POINTS


class LibraryEntry(NamedTuple):
    gate_set: frozenset[str]
    depth: int
    vertex: str
    point: AlcovePoint
    circuit: Circuit
    source: str = "figure"  # "derived" when the circuit comes from a formula


def _layers(g: str, *locals_: tuple[str, str]) -> Circuit:
    """``g, L1, g, L2, ..., g`` with the given (top, bottom) local labels."""
    ops: list[Op] = [gate(g)]
    for top, bottom in locals_:
        ops += [Local.of(top, bottom), gate(g)]
    return Circuit(tuple(ops))


_FIGURES = {
    ("CZ", 2): {
        "e1": (("I", "I"),),
        "e2": (("I", "X(pi/2)"),),
        "e3": (("X(pi/2)", "X(pi/2)"),),
    },
    ("CZ", 3): {
        "e1": (("I", "X(pi/2)"), ("I", "Y(pi/2)")),
        "e2": (("I", "X(pi)"), ("I", "Y(pi/2)")),
        "e3": (("X(pi/2)", "X(pi)"), ("I", "Y(pi/2)")),
        "e4": (("X(pi/2)", "X(pi/2)"), ("X(pi/2)", "X(pi/2)")),
        "e5": (("Y(-pi/4)", "Z(-pi/4)X(pi/2)"), ("Y(-3pi/4)", "X(-pi/2)")),
    },
    ("ISWAP", 2): {
        "e1": (("I", "I"),),
        "e2": (("I", "X(pi/2)"),),
        "e3": (("X(pi/2)", "X(pi/2)"),),
    },
    ("ISWAP", 3): {
        "e1": (("Y(pi/2)", "Y(pi/2)"), ("X(pi/2)", "X(pi/2)")),
        "e2": (("X(pi/2)", "Y(pi/2)"), ("X(pi/2)", "X(pi/2)")),
        "e3": (("X(pi/2)", "X(pi/2)"), ("X(pi/2)", "X(pi/2)")),
        "e4": (("X(-pi/2)", "I"), ("I", "X(pi/2)")),
        # The tabulated e5 layout Z(-pi/4)X(-pi/2) (x) Y(pi/4), Y(3pi/4) (x) X(pi/2)
        # lands on (7/24, 5/24, -1/24, -11/24) under every sign and ordering
        # reading, so e5 is realized by the three-iSWAP formula instead.
    },
}


def _build_library() -> tuple[LibraryEntry, ...]:
    out = []
    for (g, depth), rows in _FIGURES.items():
        for vertex, locs in rows.items():
            out.append(LibraryEntry(frozenset({g}), depth, vertex, E[vertex], _layers(g, *locs)))
    out.append(LibraryEntry(frozenset({"ISWAP"}), 3, "e5", E["e5"],
                            realize_p3_iswap(FIXED_GATES["SQRT_SWAP"]), "derived"))
    return tuple(out)


@lru_cache(maxsize=None)
def library_entries() -> tuple[LibraryEntry, ...]:
    return _build_library()


def realization_library() -> Mapping[tuple[frozenset[str], int, AlcovePoint], Circuit]:
    """``(gate set, depth, vertex) -> circuit`` for the tabulated vertex circuits."""
    return {(e.gate_set, e.depth, e.point): e.circuit for e in library_entries()}


def verify_library() -> list[tuple[LibraryEntry, AlcovePoint, bool]]:
    return [(e, p, p == e.point) for e in library_entries() for p in [circuit_invariant(e.circuit)]]


# ---------------------------------------------------------------------------
# analytic realizations


def cnot_as_cz(flipped: bool = False) -> Circuit:
    """CNOT (control on the top wire unless ``flipped``) written with one CZ."""
    loc = Local.of("I", "H") if not flipped else Local.of("H", "I")
    return Circuit((loc, gate("CZ"), loc))


def can_via_cz(p: CanonicalParams, native: str = "CNOT") -> Circuit:
    """Three-CNOT circuit locally equivalent to ``CAN(p)``.

    The middle layers are ``Y_c (x) Z_{b/2}`` and ``Y_a (x) Z_{b/2}`` around a
    reversed CNOT; the circuit equals CAN of
    ``(pi/4 - c/2, pi/4 - a/2, pi/4 - b/2)`` up to locals, which fixes
    ``c = pi/2 - 2 alpha``, ``a = pi/2 - 2 beta``, ``b = pi/2 - 2 delta``.
    Pass ``native="CZ"`` to spell each CNOT with a CZ.
    """
    alpha, beta, delta = (float(x) for x in p)
    ang_a, ang_b, ang_c = (np.pi / 2 - 2 * beta, np.pi / 2 - 2 * delta, np.pi / 2 - 2 * alpha)
    mid1 = Local(ry(ang_c), rz(ang_b / 2))
    mid2 = Local(ry(ang_a), rz(ang_b / 2))
    if native == "CNOT":
        c1, c2 = Circuit((gate("CNOT"),)), Circuit((gate("CNOT", flipped=True),))
    elif native == "CZ":
        c1, c2 = cnot_as_cz(), cnot_as_cz(flipped=True)
    else:
        raise ValidationError(f"unsupported native gate {native!r}")
    out = c1 + Circuit((mid1,)) + c2 + Circuit((mid2,)) + c1
    return out.simplified() if native == "CZ" else out


def _symmetric_pair(p: Sequence, tol: float = 1e-9) -> tuple:
    """``(a, b)`` for a point ``(a, b, -b, -a)``, or raise."""
    d1, d2, d3, d4 = p
    if abs(float(d1 + d4)) > tol or abs(float(d2 + d3)) > tol:
        raise ValidationError(f"{tuple(p)} is not of the form (a, b, -b, -a)")
    return d1, d2


def _check_pair(a, b, tol=1e-12):
    if not (0.5 + tol >= float(a) >= float(b) - tol and float(b) >= -tol):
        raise ValidationError(f"need 1/2 >= a >= b >= 0, got a={a}, b={b}")


def _angle(q) -> Angle:
    if isinstance(q, (int, Fraction)):
        return Angle.from_pi(q)
    return Angle(float(q) * np.pi)


def _rot_local(axis_top, q_top, axis_bot, q_bot) -> Local:
    at, ab = _angle(q_top), _angle(q_bot)
    return Local(_ROT[axis_top](at.radians), _ROT[axis_bot](ab.radians),
                 (f"{axis_top}({at})", f"{axis_bot}({ab})"))


def realize_real_spectrum_iswap(a, b) -> Circuit:
    """``iSWAP . (Y_{(a+b) pi} (x) Y_{(a-b) pi}) . iSWAP`` with invariant ``(a, b, -b, -a)``."""
    _check_pair(a, b)
    return Circuit((gate("ISWAP"), _rot_local("Y", a + b, "Y", a - b), gate("ISWAP")))


def realize_p2_cz(a, b) -> Circuit:
    """``CZ . (X_{(a+b) pi} (x) X_{(a-b) pi}) . CZ`` with invariant ``(a, b, -b, -a)``."""
    _check_pair(a, b)
    return Circuit((gate("CZ"), _rot_local("X", a + b, "X", a - b), gate("CZ")))


def iswap_cz_realize(p: Sequence) -> Circuit:
    """Two-gate ``iSWAP``/``CZ`` circuit for a point on the face ``d1 + d2 = 1/2``.

    The circuit is ``CZ . (Y_x (x) Y_y) . iSWAP`` (iSWAP first), with
    ``x = (1/2 - d2 - d3) pi`` and ``y = (d2 - d3) pi``; it lands on
    ``(1/2 - d2, d2, d3, -1/2 - d3)``.
    """
    p = canonicalize(p)
    d1, d2, d3, d4 = p
    exact = all(isinstance(v, (int, Fraction)) for v in p)
    half = Fraction(1, 2) if exact else 0.5
    tol = 0 if exact else 1e-9
    if abs(d1 + d2 - half) > tol or not (-0.25 - 1e-12 <= float(d3) <= float(d2) <= 0.25 + 1e-12):
        raise ValidationError(
            f"{tuple(p)} is not on the iSWAP-CZ face d1 + d2 = 1/2 with -1/4 <= d3 <= d2 <= 1/4")
    return Circuit((gate("ISWAP"), _rot_local("Y", half - d2 - d3, "Y", d2 - d3), gate("CZ")))


def _real_trace_coefficients(u: np.ndarray) -> np.ndarray:
    """``(A, B, C)`` with ``Im tr gamma(u (Y_s (x) I) iSWAP) = A cos s + B sin s + C``."""
    iswap = FIXED_GATES["ISWAP"]
    rows, vals = [], []
    for s in (0.0, np.pi / 2, np.pi, 3 * np.pi / 2):
        v = to_special(u @ np.kron(ry(s), PAULI_I) @ iswap)
        vals.append(np.trace(cartan_double(magic_conjugate(v))).imag)
        rows.append([np.cos(s), np.sin(s), 1.0])
    coef, *_ = np.linalg.lstsq(np.array(rows), np.array(vals), rcond=None)
    return coef


class Realignment(NamedTuple):
    sigma: float
    degenerate: bool


def iswap_realign(u) -> Realignment:
    """Angle ``s`` making ``u . (Y_s (x) I) . iSWAP`` have real Cartan-double trace.

    The imaginary part of the trace is a first-order trigonometric polynomial
    ``A cos s + B sin s`` in ``s``; its coefficients are read off from samples.
    """
    m = as_unitary(u)
    a, b, c = _real_trace_coefficients(m)
    if abs(a) < TAU_RECONSTRUCT and abs(b) < TAU_RECONSTRUCT:
        return Realignment(0.0, True)
    # solve A cos s + B sin s + C = 0; C vanishes for the spectra that occur
    # here, so the quotient form atan2(-A, B) is used, refined if C is present
    sigma = float(np.arctan2(-a, b))
    if abs(c) > TAU_RECONSTRUCT:
        r = np.hypot(a, b)
        if abs(c) > r:
            return Realignment(sigma, True)
        phi = np.arctan2(b, a)
        sigma = float(phi + np.arccos(-c / r))
    return Realignment(float(np.mod(sigma, 2 * np.pi)), False)


def _realize_on_plane(target: np.ndarray, template: Circuit) -> Circuit:
    """Wrap ``template`` with locals so that it evaluates to ``target``."""
    eq = local_equivalence(target, evaluate(template))
    if eq is None:
        raise DecompositionError("target and template are not locally equivalent")
    l1, l2 = eq
    return Circuit((Local(l2.a, l2.b),) + template.ops + (Local(l1.a, l1.b),))


def realize_p3_iswap(u) -> Circuit:
    """Three-iSWAP circuit evaluating to ``u`` up to phase."""
    m = as_unitary(u)
    sigma, _ = iswap_realign(m)
    iswap = FIXED_GATES["ISWAP"]
    v = m @ np.kron(ry(sigma), PAULI_I) @ iswap
    p = pi_invariant(v)
    a, b = _symmetric_pair(p, tol=1e-7)
    inner = _realize_on_plane(v, realize_real_spectrum_iswap(a, b))
    # u = v . iSWAP^dag . (Y_{-s} (x) I) and iSWAP^dag = (Z (x) I) iSWAP (Z (x) I)
    z = Local.of("Z(pi)", "I")
    head = Circuit((Local(ry(-sigma), PAULI_I), z, gate("ISWAP"), z))
    return head + inner


def realize_p3_cz(u) -> Circuit:
    """Three-CZ circuit evaluating to ``u`` up to phase."""
    m = as_unitary(u)
    p = pi_invariant(m)
    return _realize_on_plane(m, can_via_cz(can_from_alcove(p), native="CZ"))


def realize(gates: Iterable[str], point: Sequence, depth: int) -> Circuit | None:
    """A circuit of ``depth`` two-qubit gates from ``gates`` evaluating to
    ``CAN`` of ``point`` (up to phase), or ``None`` when no formula applies.

    Supported: ``{CZ}`` and ``{ISWAP}`` up to depth 3, and ``{CZ, ISWAP}``
    through either single-gate formula or the mixed depth-2 face.
    """
    names = frozenset(g.upper() for g in gates)
    p = canonicalize(point)
    target = canonical_gate(can_from_alcove(p))
    builders = {frozenset({"CZ"}): _realize_cz, frozenset({"ISWAP"}): _realize_iswap}
    attempts = [builders[names]] if names in builders else []
    if names == {"CZ", "ISWAP"}:
        attempts = [_realize_cz, _realize_iswap]
        if depth == 2:
            attempts.append(lambda q, t, _: _realize_on_plane(t, iswap_cz_realize(q)))
    for build in attempts:
        try:
            c = build(p, target, depth)
        except (ValidationError, DecompositionError):
            continue
        if c is not None:
            return c
    return None


def _is(p, name, tol=1e-9) -> bool:
    return max(abs(float(x) - float(y)) for x, y in zip(p, E[name])) < tol


def _realize_cz(p, target, depth) -> Circuit | None:
    if depth == 0:
        return Circuit() if _is(p, "e1") else None
    if depth == 1:
        return _realize_on_plane(target, Circuit((gate("CZ"),))) if _is(p, "e2") else None
    if depth == 2:
        a, b = _symmetric_pair(p)
        return _realize_on_plane(target, realize_p2_cz(a, b))
    if depth == 3:
        return realize_p3_cz(target)
    return None


def _realize_iswap(p, target, depth) -> Circuit | None:
    if depth == 0:
        return Circuit() if _is(p, "e1") else None
    if depth == 1:
        return _realize_on_plane(target, Circuit((gate("ISWAP"),))) if _is(p, "e3") else None
    if depth == 2:
        a, b = _symmetric_pair(p)
        return _realize_on_plane(target, realize_real_spectrum_iswap(a, b))
    if depth == 3:
        return realize_p3_iswap(target)
    return None


# ---------------------------------------------------------------------------
# leakiness


def _su2_basis() -> list[np.ndarray]:
    # i X, i Y, i Z span the traceless anti-Hermitian 2x2 matrices
    return [1j * np.array(m, dtype=complex) for m in
            ([[0, 1], [1, 0]], [[0, -1j], [1j, 0]], [[1, 0], [0, -1]])]


class LeakVerdict(NamedTuple):
    leaks: bool
    null_dim: int
    witness: tuple[float, ...] | None
    singular_values: tuple[float, ...]
    indeterminate: bool

    def to_json(self) -> dict:
        return {"leaks": self.leaks, "null_dim": self.null_dim,
                "indeterminate": self.indeterminate,
                "witness": None if self.witness is None else [round(x, 12) for x in self.witness]}


def leak_system(u) -> np.ndarray:
    """The real ``32 x 9`` matrix of ``U^dag (h (+) h) U - (h' (x) I + I (x) h'')``.

    Unknowns are the coordinates of ``h``, ``h'`` and ``h''`` in the basis
    ``iX, iY, iZ``; ``h (+) h`` is the block-diagonal matrix ``I (x) h``.
    """
    m = as_unitary(u)
    basis = _su2_basis()
    cols = []
    for g in basis:
        cols.append(m.conj().T @ np.kron(PAULI_I, g) @ m)
    for g in basis:
        cols.append(-np.kron(g, PAULI_I))
    for g in basis:
        cols.append(-np.kron(PAULI_I, g))
    return np.array([np.concatenate([c.real.ravel(), c.imag.ravel()]) for c in cols]).T


def leakiness_test(u, tau: float = TAU_LEAK) -> LeakVerdict:
    a = leak_system(u)
    _, s, vt = np.linalg.svd(a)
    null = int(np.sum(s < tau))
    kept = s[s >= tau]
    dropped = s[s < tau]
    indeterminate = False
    if len(kept) and len(dropped):
        indeterminate = kept.min() / max(dropped.max(), 1e-300) < LEAK_RATIO
    elif len(dropped) == 0 and len(kept):
        indeterminate = kept.min() / tau < LEAK_RATIO
    witness = tuple(float(x) for x in vt[-1]) if null else None
    return LeakVerdict(null > 0, null, witness, tuple(float(x) for x in s), bool(indeterminate))


__all__ = [
    "Circuit", "Local", "TwoQubit", "LibraryEntry", "LeakVerdict", "Realignment",
    "evaluate", "circuit_invariant", "gate", "label_matrix", "rotation",
    "realization_library", "library_entries", "verify_library",
    "can_via_cz", "cnot_as_cz", "realize_real_spectrum_iswap", "realize_p2_cz",
    "iswap_cz_realize", "iswap_realign", "realize_p3_iswap", "realize_p3_cz", "realize",
    "leak_system", "leakiness_test", "TAU_LEAK",
]
