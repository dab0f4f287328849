"""Two-qubit unitary arithmetic: magic basis, Cartan double, canonical
decomposition and the alcove invariant ``pi_invariant``.

Conventions
-----------
* ``CAN(a, b, c) = exp(-i (a XX + b YY + c ZZ))`` with the standard Paulis.
  Weyl-reduced parameters satisfy ``pi/4 >= a >= b >= |c|``.
* Single-qubit rotations ``X_t, Y_t, Z_t`` are ``exp(-i t P / 2)``.
* Alcove points are quadruples ``(d1, d2, d3, d4)`` with
  ``d1 >= d2 >= d3 >= d4 >= d1 - 1`` and ``sum(d) == 0``.  Coordinates are
  :class:`fractions.Fraction` whenever they snap to a denominator <= 96,
  floats otherwise.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np
from scipy.stats import unitary_group

TAU_UNITARY = 1e-10
TAU_RECONSTRUCT = 1e-9
TAU_SNAP = 1e-6
SNAP_DENOMINATOR = 96

HALF = Fraction(1, 2)

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)

XX = np.kron(PAULI_X, PAULI_X)
YY = np.kron(PAULI_Y, PAULI_Y)
ZZ = np.kron(PAULI_Z, PAULI_Z)

MAGIC = np.array(
    [[1, 0, 0, 1j], [0, 1j, 1, 0], [0, 1j, -1, 0], [1, 0, 0, -1j]], dtype=complex
) / np.sqrt(2)
MAGIC_DAG = MAGIC.conj().T


class ValidationError(ValueError):
    """Raised when an input matrix fails a shape or unitarity check."""


class DecompositionError(RuntimeError):
    """Raised when a numerical decomposition cannot be verified."""


class AlcovePoint(NamedTuple):
    d1: Fraction | float
    d2: Fraction | float
    d3: Fraction | float
    d4: Fraction | float

    @property
    def is_exact(self) -> bool:
        return all(isinstance(x, (int, Fraction)) for x in self)

    def __str__(self) -> str:
        return "(" + ",".join(str(x) for x in self) + ")"


class CanonicalParams(NamedTuple):
    alpha: float
    beta: float
    delta: float


class LocalPair(NamedTuple):
    a: np.ndarray
    b: np.ndarray

    def matrix(self) -> np.ndarray:
        return np.kron(self.a, self.b)


# ---------------------------------------------------------------------------
# validation helpers


def as_unitary(u, dim: int = 4, tol: float = TAU_UNITARY) -> np.ndarray:
    m = np.asarray(u, dtype=complex)
    if m.shape != (dim, dim):
        raise ValidationError(f"expected a {dim}x{dim} matrix, got shape {m.shape}")
    err = np.abs(m @ m.conj().T - np.eye(dim)).max()
    if not np.isfinite(err) or err > tol * max(1.0, dim):
        raise ValidationError(f"matrix is not unitary (deviation {err:.3g})")
    return m


def to_special(u: np.ndarray) -> np.ndarray:
    """Scale ``u`` by a fourth root of ``1/det``."""
    det = np.linalg.det(u)
    return u / det ** (1.0 / u.shape[0])


def phase_distance(u: np.ndarray, v: np.ndarray) -> float:
    """Projective distance ``1 - |tr(u^dag v)| / dim``; zero iff equal up to phase."""
    n = u.shape[0]
    return float(1.0 - abs(np.trace(u.conj().T @ v)) / n)


def equal_up_to_phase(u: np.ndarray, v: np.ndarray, tol: float = TAU_RECONSTRUCT) -> bool:
    return reconstruction_error(u, v) < tol


def reconstruction_error(u: np.ndarray, v: np.ndarray) -> float:
    """Max-entry error after aligning the global phase of ``v`` to ``u``."""
    t = np.trace(v.conj().T @ u)
    phase = t / abs(t) if abs(t) > 1e-300 else 1.0
    return float(np.abs(u - phase * v).max())


# ---------------------------------------------------------------------------
# single-qubit rotations


def rx(t: float) -> np.ndarray:
    c, s = np.cos(t / 2), np.sin(t / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def ry(t: float) -> np.ndarray:
    c, s = np.cos(t / 2), np.sin(t / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rz(t: float) -> np.ndarray:
    return np.diag([np.exp(-0.5j * t), np.exp(0.5j * t)])


# ---------------------------------------------------------------------------
# magic basis and Cartan double


def magic_conjugate(u) -> np.ndarray:
    m = as_unitary(u)
    return MAGIC_DAG @ m @ MAGIC


def cartan_double(m) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    return m @ m.T


def canonical_gate(p: Sequence[float]) -> np.ndarray:
    a, b, c = (float(x) for x in p)
    # CAN is diagonal in the magic basis, so exponentiate there.
    phases = np.exp(-1j * np.array([a - b + c, a + b - c, -(a + b + c), -a + b + c]))
    return MAGIC @ np.diag(phases) @ MAGIC_DAG


# ---------------------------------------------------------------------------
# alcove coordinates


def rho(p: Sequence) -> tuple:
    b1, b2, b3, b4 = p
    return (b3 + HALF, b4 + HALF, b1 - HALF, b2 - HALF)


def _is_c2_canonical(d: Sequence, tol: float = 0.0) -> bool:
    d1, d2, d3, d4 = d
    lhs = d3 + HALF - d1
    if lhs > tol:
        return True
    if lhs >= -tol:
        return d4 + HALF - d2 <= tol
    return False


def canonicalize(d: Sequence) -> AlcovePoint:
    """Sort a sum-zero quadruple into the SU(4) alcove and apply the C2 rule."""
    d = sorted(d, reverse=True)
    exact = all(isinstance(x, (int, Fraction)) for x in d)
    if exact:
        d = [Fraction(x) for x in d]
        if sum(d) != 0:
            raise ValidationError("alcove coordinates must sum to zero")
        one = Fraction(1)
    else:
        d = [float(x) for x in d]
        one = 1.0
    # bring into d1 - d4 <= 1 by moving unit shifts between extremes
    for _ in range(8):
        if d[0] - d[3] <= one + (0 if exact else 1e-12):
            break
        d[0] -= one
        d[3] += one
        d.sort(reverse=True)
    if not _is_c2_canonical(d, 0 if exact else 1e-12):
        d = sorted(rho(d), reverse=True)
    return AlcovePoint(*d)


def snap(x: float, tol: float = TAU_SNAP, max_den: int = SNAP_DENOMINATOR):
    """Return a Fraction within ``tol`` of ``x`` with small denominator, or ``None``."""
    f = Fraction(float(x)).limit_denominator(max_den)
    return f if abs(float(f) - x) < tol else None


def snap_point(d: Sequence[float], tol: float = TAU_SNAP) -> tuple:
    fr = [snap(x, tol) for x in d]
    if all(f is not None for f in fr) and sum(fr) == 0:
        return tuple(fr)
    return tuple(float(x) for x in d)


def logspec_c2(m, snap_values: bool = True) -> AlcovePoint:
    m = as_unitary(m)
    det = np.linalg.det(m)
    if abs(abs(det) - 1) > 1e-8:
        raise ValidationError("expected a unitary with |det| = 1")
    m = m / det ** 0.25
    phases = np.angle(np.linalg.eigvals(m)) / (2 * np.pi)
    phases = np.sort(phases)[::-1]
    shift = int(round(phases.sum()))
    if shift > 0:
        phases[:shift] -= 1
    elif shift < 0:
        phases[len(phases) + shift:] += 1
    phases = np.sort(phases)[::-1]
    phases -= phases.sum() / 4  # remove rounding drift
    d = snap_point(phases) if snap_values else tuple(phases)
    return canonicalize(d)


def pi_invariant(u, snap_values: bool = True) -> AlcovePoint:
    m = to_special(as_unitary(u))
    return logspec_c2(cartan_double(MAGIC_DAG @ m @ MAGIC), snap_values)


def pi_invariant_batch(us: np.ndarray) -> np.ndarray:
    """Vectorized float version of :func:`pi_invariant` for an ``(N, 4, 4)`` stack."""
    us = np.asarray(us, dtype=complex)
    dets = np.linalg.det(us)
    us = us / (dets ** 0.25)[:, None, None]
    mq = MAGIC_DAG @ us @ MAGIC
    g = mq @ np.transpose(mq, (0, 2, 1))
    ph = np.sort(np.angle(np.linalg.eigvals(g)) / (2 * np.pi), axis=1)[:, ::-1].copy()
    shift = np.rint(ph.sum(axis=1)).astype(int)
    for s in (1, 2, 3):
        rows = shift >= s
        ph[rows, s - 1] -= 1
        rows = shift <= -s
        ph[rows, 4 - s] += 1
    ph = np.sort(ph, axis=1)[:, ::-1]
    ph -= ph.sum(axis=1, keepdims=True) / 4
    bad = ~((ph[:, 2] + 0.5 - ph[:, 0] > 1e-12)
            | ((np.abs(ph[:, 2] + 0.5 - ph[:, 0]) <= 1e-12) & (ph[:, 3] + 0.5 <= ph[:, 1] + 1e-12)))
    r = ph[bad]
    ph[bad] = np.stack([r[:, 2] + 0.5, r[:, 3] + 0.5, r[:, 0] - 0.5, r[:, 1] - 0.5], axis=1)
    return ph


def _pi_units(p: Sequence) -> list:
    """Convert radians to multiples of pi, exactly when the value snaps."""
    out = []
    for x in p:
        if isinstance(x, Fraction):
            out.append(x)
            continue
        f = snap(float(x) / np.pi, 1e-12, 10 ** 6)
        out.append(f if f is not None else float(x) / np.pi)
    return out


def alcove_from_can(p: Sequence, *, in_pi_units: bool = False) -> AlcovePoint:
    """Alcove point of ``CAN(p)``.

    With ``in_pi_units`` the parameters are read as multiples of pi and the
    computation is exact for rational input.
    """
    a, b, c = p if in_pi_units else _pi_units(p)
    d = (-(a - b + c), -(a + b - c), a + b + c, a - b - c)
    exact = all(isinstance(x, (int, Fraction)) for x in d)
    return canonicalize(d if exact else snap_point(d))


def weyl_reduce_units(p: Sequence) -> tuple:
    """Weyl-reduce parameters given in multiples of pi to ``1/4 >= a >= b >= |c|``."""
    exact = all(isinstance(x, (int, Fraction)) for x in p)
    q = Fraction(1, 4) if exact else 0.25
    eps = 0 if exact else 1e-12
    v = []
    for x in p:
        x = x - (q * 2) * ((x + q) // (q * 2)) if exact else x - 0.5 * np.floor((x + 0.25) / 0.5)
        v.append(x)  # now in [-1/4, 1/4)
    v.sort(key=abs, reverse=True)
    signs = [1 if x >= 0 else -1 for x in v]
    a, b, c = (abs(x) for x in v)
    if signs[0] * signs[1] * signs[2] < 0:
        c = -c
    if abs(a - q) <= eps and c < 0:
        c = -c  # at a = pi/4 the flip (a, c) -> (pi/2 - a, -c) is a symmetry
    if abs(a - q) <= eps:
        a = q
    return (a, b, c)


def weyl_reduce(p: Sequence[float]) -> CanonicalParams:
    a, b, c = weyl_reduce_units(_pi_units(p))
    return CanonicalParams(float(a) * np.pi, float(b) * np.pi, float(c) * np.pi)


def can_units_from_alcove(p: Sequence) -> tuple:
    d1, d2, d3, d4 = p
    h = HALF if all(isinstance(x, (int, Fraction)) for x in p) else 0.5
    return weyl_reduce_units((-h * (d1 + d2), -h * (d2 + d4), -h * (d1 + d4)))


def can_from_alcove(p: Sequence) -> CanonicalParams:
    a, b, c = can_units_from_alcove(p)
    return CanonicalParams(float(a) * np.pi, float(b) * np.pi, float(c) * np.pi)


# ---------------------------------------------------------------------------
# canonical decomposition


def kron_factor(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Split a 4x4 matrix ``a (x) b`` into special-unitary factors."""
    r = m.reshape(2, 2, 2, 2).transpose(0, 2, 1, 3).reshape(4, 4)
    u, s, vh = np.linalg.svd(r)
    a = (u[:, 0] * np.sqrt(s[0])).reshape(2, 2)
    b = (vh[0] * np.sqrt(s[0])).reshape(2, 2)
    a = a / np.sqrt(np.linalg.det(a))
    b = b / np.sqrt(np.linalg.det(b))
    return a, b


def _real_orthogonal_eigenbasis(g: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Real orthogonal ``O`` (det +1) with ``O^T g O`` diagonal, for symmetric unitary ``g``."""
    re, im = g.real, g.imag
    for attempt in range(16):
        t = rng.uniform(0.2, 5.0) if attempt else 1.3217
        _, o = np.linalg.eigh(re + t * im)
        if np.linalg.det(o) < 0:
            o[:, 0] = -o[:, 0]
        d = o.T @ g @ o
        if np.abs(d - np.diag(np.diag(d))).max() < 1e-10:
            return o
    raise DecompositionError("could not orthogonally diagonalize the Cartan double")


_PERMS = [np.eye(4)[list(p)].T for p in itertools.permutations(range(4))]
_FLIP = np.diag([-1.0, 1, 1, 1])


def canonical_decompose(u, seed: int = 0) -> tuple[LocalPair, CanonicalParams, LocalPair]:
    """Return ``(L1, params, L2)`` with ``u ~ L1 . CAN(params) . L2`` up to phase."""
    m = to_special(as_unitary(u))
    mq = MAGIC_DAG @ m @ MAGIC
    o1 = _real_orthogonal_eigenbasis(mq @ mq.T, np.random.default_rng(seed))
    params = can_from_alcove(pi_invariant(m, snap_values=False))
    dc = np.diag(MAGIC_DAG @ canonical_gate(params) @ MAGIC)
    best = None
    for perm in _PERMS:
        left = o1 @ perm
        if np.linalg.det(left) < 0:
            left = left @ _FLIP
        x = (left.T @ mq) / dc[:, None]
        phi2 = (x @ x.T)[0, 0]
        phi = np.sqrt(phi2)
        right = x / phi
        err = np.abs(right.imag).max()
        if np.linalg.det(right.real) < 0:
            continue
        if best is None or err < best[0]:
            best = (err, left, right.real)
        if err < 1e-10:
            break
    if best is None or best[0] > 1e-7:
        raise DecompositionError(
            f"no orthogonal alignment found (residual {None if best is None else best[0]:.3g})")
    _, left, right = best
    l1 = LocalPair(*kron_factor(MAGIC @ left @ MAGIC_DAG))
    l2 = LocalPair(*kron_factor(MAGIC @ right @ MAGIC_DAG))
    recon = l1.matrix() @ canonical_gate(params) @ l2.matrix()
    err = reconstruction_error(m, recon)
    if err > TAU_RECONSTRUCT:
        raise DecompositionError(f"reconstruction error {err:.3g} exceeds tolerance")
    return l1, params, l2


def local_equivalence(u, v) -> tuple[LocalPair, LocalPair] | None:
    """Locals ``(L1, L2)`` with ``L1 . v . L2 = u`` up to phase, or ``None``."""
    pu, pv = pi_invariant(u), pi_invariant(v)
    if not (pu.is_exact and pv.is_exact):
        close = np.abs(np.array(pu, float) - np.array(pv, float)).max() < TAU_SNAP
        if not close:
            return None
    elif pu != pv:
        return None
    a1, _, a2 = canonical_decompose(u)
    b1, _, b2 = canonical_decompose(v)
    # u = A1 C A2 and v = B1 C B2, so u = (A1 B1^dag) v (B2^dag A2)
    l1 = LocalPair(a1.a @ b1.a.conj().T, a1.b @ b1.b.conj().T)
    l2 = LocalPair(b2.a.conj().T @ a2.a, b2.b.conj().T @ a2.b)
    if reconstruction_error(np.asarray(u), l1.matrix() @ np.asarray(v) @ l2.matrix()) > 1e-8:
        return None
    return l1, l2


# ---------------------------------------------------------------------------
# Euler angles


def _zyz(u: np.ndarray) -> tuple[float, float, float]:
    u = u / np.sqrt(np.linalg.det(u))
    b = 2 * np.arctan2(abs(u[1, 0]), abs(u[0, 0]))
    if abs(u[1, 0]) < 1e-14 or abs(u[0, 0]) < 1e-14:
        # degenerate middle angle: fold everything into the first rotation
        if abs(u[1, 0]) < 1e-14:
            a = 2 * np.angle(u[1, 1])
            return (float(np.mod(a, 2 * np.pi)), 0.0, 0.0)
        a = 2 * np.angle(u[1, 0])
        return (float(np.mod(a, 2 * np.pi)), float(np.pi), 0.0)
    s = 2 * np.angle(u[1, 1])  # a + c
    d = 2 * np.angle(u[1, 0])  # a - c
    a, c = (s + d) / 2, (s - d) / 2
    return (float(np.mod(a, 2 * np.pi)), float(b), float(np.mod(c, 2 * np.pi)))


def euler_decompose(u, convention: str = "ZYZ") -> tuple[float, float, float]:
    """Angles ``(a, b, c)`` with ``u ~ P_a . Q_b . P_c`` and ``0 <= b <= pi``.

    ``convention`` is ``"ZYZ"`` (``Z_a Y_b Z_c``) or ``"YZY"`` (``Y_a Z_b Y_c``).
    """
    m = as_unitary(u, dim=2)
    convention = convention.upper()
    if convention == "ZYZ":
        return _zyz(m)
    if convention == "YZY":
        # with K = X_{pi/2}: K^dag Y_t K = Z_{-t} and K^dag Z_t K = Y_t
        k = rx(np.pi / 2)
        a, b, c = _zyz(k.conj().T @ m @ k)
        return (float(np.mod(-a, 2 * np.pi)), b, float(np.mod(-c, 2 * np.pi)))
    raise ValueError(f"unknown Euler convention {convention!r}")


def euler_matrix(angles: Sequence[float], convention: str = "ZYZ") -> np.ndarray:
    a, b, c = angles
    if convention.upper() == "ZYZ":
        return rz(a) @ ry(b) @ rz(c)
    return ry(a) @ rz(b) @ ry(c)


# ---------------------------------------------------------------------------
# sampling


def haar_random(seed=None, dim: int = 4) -> np.ndarray:
    return unitary_group.rvs(dim, random_state=np.random.default_rng(seed))


def haar_batch(n: int, seed=None, dim: int = 4) -> np.ndarray:
    out = unitary_group.rvs(dim, size=n, random_state=np.random.default_rng(seed))
    return out.reshape(n, dim, dim)
