"""Named two-qubit gates, exact angle parsing and the JSON matrix format."""

from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path

import numpy as np

from .su4 import ValidationError, as_unitary, canonical_gate, rx

SQRT_HALF = np.sqrt(0.5)


class Angle:
    """An angle that remembers whether it is an exact rational multiple of pi."""

    __slots__ = ("pi_units", "radians")

    def __init__(self, radians: float, pi_units: Fraction | None = None):
        self.radians = float(radians)
        self.pi_units = pi_units

    @classmethod
    def from_pi(cls, q) -> "Angle":
        q = Fraction(q)
        return cls(float(q) * np.pi, q)

    @property
    def exact(self) -> bool:
        return self.pi_units is not None

    def __repr__(self) -> str:
        return f"Angle({self})"

    def __str__(self) -> str:
        if self.pi_units is None:
            return repr(self.radians)
        q = self.pi_units
        if q == 0:
            return "0"
        num = "" if q.numerator == 1 else ("-" if q.numerator == -1 else str(q.numerator))
        return f"{num}pi" + ("" if q.denominator == 1 else f"/{q.denominator}")


_PI_RE = re.compile(
    r"^\s*(?P<sign>[+-])?\s*(?P<num>\d+(?:\.\d*)?|\.\d+)?\s*\*?\s*pi\s*(?:/\s*(?P<den>\d+))?\s*$",
    re.IGNORECASE,
)


def parse_angle(text: str) -> Angle:
    """Parse ``"3pi/4"``, ``"0.25pi"``, ``"-pi"`` exactly, or decimal radians."""
    if isinstance(text, (int, float)):
        return Angle(float(text))
    s = str(text).strip()
    m = _PI_RE.match(s)
    if m:
        num = Fraction(m.group("num")) if m.group("num") else Fraction(1)
        if m.group("den"):
            den = int(m.group("den"))
            if den == 0:
                raise ValidationError(f"zero denominator in angle {text!r}")
            num /= den
        if m.group("sign") == "-":
            num = -num
        return Angle.from_pi(num)
    try:
        return Angle(float(s))
    except ValueError:
        raise ValidationError(f"cannot parse angle {text!r}") from None


def cphase(theta: float) -> np.ndarray:
    return np.diag([1, 1, 1, np.exp(1j * theta)]).astype(complex)


def xy(theta: float) -> np.ndarray:
    m = np.eye(4, dtype=complex)
    m[1:3, 1:3] = rx(theta)
    return m


def pswap(theta: float) -> np.ndarray:
    e = np.exp(1j * theta)
    return np.array([[1, 0, 0, 0], [0, 0, e, 0], [0, e, 0, 0], [0, 0, 0, 1]], dtype=complex)


CZ = cphase(np.pi)
CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
ISWAP = np.array([[1, 0, 0, 0], [0, 0, 1j, 0], [0, 1j, 0, 0], [0, 0, 0, 1]], dtype=complex)
SWAP = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)
SQRT_SWAP = np.array(
    [[1, 0, 0, 0], [0, 0.5 + 0.5j, 0.5 - 0.5j, 0], [0, 0.5 - 0.5j, 0.5 + 0.5j, 0], [0, 0, 0, 1]],
    dtype=complex,
)
SQRT_ISWAP = np.array(
    [[1, 0, 0, 0], [0, SQRT_HALF, 1j * SQRT_HALF, 0], [0, 1j * SQRT_HALF, SQRT_HALF, 0], [0, 0, 0, 1]],
    dtype=complex,
)
B_GATE = canonical_gate((np.pi / 4, np.pi / 8, 0.0))
DB = xy(3 * np.pi / 4)
SQRT_CZ = cphase(np.pi / 2)

FIXED_GATES = {
    "I": np.eye(4, dtype=complex),
    "CZ": CZ,
    "CNOT": CNOT,
    "ISWAP": ISWAP,
    "SWAP": SWAP,
    "SQRT_SWAP": SQRT_SWAP,
    "SQRT_ISWAP": SQRT_ISWAP,
    "B": B_GATE,
    "DB": DB,
    "SQRT_CZ": SQRT_CZ,
}
FAMILIES = {"CPHASE": cphase, "XY": xy, "PSWAP": pswap}

_NAME_RE = re.compile(r"^\s*([A-Za-z_]+)\s*(?:\((.*)\))?\s*$")


def split_name(spec: str) -> tuple[str, str | None]:
    m = _NAME_RE.match(spec)
    if not m:
        raise ValidationError(f"malformed gate name {spec!r}")
    return m.group(1).upper(), m.group(2)


def gate_matrix(spec: str) -> np.ndarray:
    """Matrix of a named gate such as ``"CZ"`` or ``"XY(3pi/4)"``."""
    name, arg = split_name(spec)
    if name in FIXED_GATES and arg is None:
        return FIXED_GATES[name].copy()
    if name in FAMILIES and arg is not None:
        return FAMILIES[name](parse_angle(arg).radians)
    raise ValidationError(f"unknown gate {spec!r}")


def matrix_from_json(data) -> np.ndarray:
    """Read ``{"rows": [[[re, im], ...], ...]}`` into a validated unitary."""
    try:
        rows = data["rows"]
        m = np.array([[complex(float(re_), float(im)) for re_, im in row] for row in rows])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed matrix JSON: {exc}") from None
    return as_unitary(m, tol=1e-8)


def matrix_to_json(m: np.ndarray) -> dict:
    return {"rows": [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m)]}


def load_matrix(path: str | Path) -> np.ndarray:
    with open(path) as fh:
        return matrix_from_json(json.load(fh))
