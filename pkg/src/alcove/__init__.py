"""Exact coverage analysis for two-qubit gate sets.

The main entry points:

* :func:`pi_invariant` maps a 4x4 unitary to its point in the C2 alcove.
* :func:`depth_sets` builds the exact circuit polytopes of a gate set.
* :func:`approx_compile` picks the fidelity-optimal depth for a target.
* :func:`realize` turns an alcove point into a concrete circuit.
"""

from .approx import (
    ApproxPlan, BestPoint, FidelityModel, approx_compile, avg_gate_fidelity, best_in_set,
    class_fidelity,
)
from .circuits import (
    Circuit, LeakVerdict, Local, TwoQubit, circuit_invariant, evaluate, leakiness_test, realize,
    verify_library,
)
from .coverage import (
    E_POINTS, CoverageError, CoverageReport, GateSet, UncoveredError, depth_sets, expected_depth,
    haar_fraction, min_depth, xy_slice_volume,
)
from .gates import gate_matrix, parse_angle
from .su4 import (
    AlcovePoint, CanonicalParams, DecompositionError, ValidationError, alcove_from_can,
    can_from_alcove, canonical_decompose, canonical_gate, pi_invariant,
)

__version__ = "0.1.0"

__all__ = [
    "ApproxPlan", "BestPoint", "FidelityModel", "approx_compile", "avg_gate_fidelity",
    "best_in_set", "class_fidelity", "Circuit", "LeakVerdict", "Local", "TwoQubit",
    "circuit_invariant", "evaluate", "leakiness_test", "realize", "verify_library", "E_POINTS",
    "CoverageError", "CoverageReport", "GateSet", "UncoveredError", "depth_sets",
    "expected_depth", "haar_fraction", "min_depth", "xy_slice_volume", "gate_matrix",
    "parse_angle", "AlcovePoint", "CanonicalParams", "DecompositionError", "ValidationError",
    "alcove_from_can", "can_from_alcove", "canonical_decompose", "canonical_gate", "pi_invariant",
]
