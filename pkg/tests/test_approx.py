from fractions import Fraction as F

import numpy as np
import pytest

from alcove import coverage as cov
from alcove.approx import (
    FidelityModel, aligned_target, approx_compile, avg_gate_fidelity, best_in_set,
    class_fidelity, class_fidelity_exact, grid_oracle,
)
from alcove.gates import CZ, SWAP, gate_matrix
from alcove.su4 import (
    ValidationError, canonical_gate, haar_batch, haar_random, pi_invariant, to_special,
)

from reference import E

PI = np.pi


@pytest.fixture(scope="module")
def regions():
    return {g: cov.depth_sets(cov.GateSet.parse(g), 2).depth_sets[2]
            for g in ["CZ", "XY", "DB"]}


class TestAverageGateFidelity:
    def test_self(self):
        u = haar_random(0)
        assert avg_gate_fidelity(u, u) == pytest.approx(1)

    def test_identity_cz(self):
        assert avg_gate_fidelity(np.eye(4), CZ) == pytest.approx(2 / 5)

    def test_swap_iswap_class(self):
        assert avg_gate_fidelity(SWAP, canonical_gate((PI / 4, PI / 4, 0))) == pytest.approx(3 / 5)

    def test_range_and_symmetry(self):
        us, vs = haar_batch(50, 1), haar_batch(50, 2)
        for u, v in zip(us, vs):
            f = avg_gate_fidelity(u, v)
            assert 0.2 - 1e-12 <= f <= 1 + 1e-12
            assert f == pytest.approx(avg_gate_fidelity(v, u))


class TestClassFidelity:
    def test_self(self):
        for p in E.values():
            assert class_fidelity(p, p) == pytest.approx(1)

    def test_examples(self):
        assert class_fidelity_exact(E["e4"], (F(1, 3), F(1, 3), 0, F(-2, 3))) == F(17, 20)
        assert class_fidelity_exact(E["e4"], E["e3"]) == F(3, 5)
        assert class_fidelity_exact(E["e4"], E["e2"]) == F(2, 5)

    def test_symmetric(self):
        ps = [pi_invariant(u, snap_values=False) for u in haar_batch(100, 3)]
        for p, q in zip(ps, ps[1:]):
            assert class_fidelity(p, q) == pytest.approx(class_fidelity(q, p), abs=1e-12)

    def test_bounds_gate_fidelity(self):
        for u, v in zip(haar_batch(100, 4), haar_batch(100, 5)):
            p = pi_invariant(u, snap_values=False)
            q = pi_invariant(v, snap_values=False)
            assert class_fidelity(p, q) >= avg_gate_fidelity(u, v) - 1e-12

    def test_local_moves(self):
        u = haar_random(6)
        a, b, c, d = haar_batch(4, 7, dim=2)
        v = np.kron(a, b) @ u @ np.kron(c, d)
        assert avg_gate_fidelity(u, v) <= 1 + 1e-12
        p, q = pi_invariant(u, snap_values=False), pi_invariant(v, snap_values=False)
        assert class_fidelity(p, q) == pytest.approx(1)

    def test_aligned_target_attains(self):
        for u in haar_batch(20, 8):
            q = (F(1, 3), F(1, 3), 0, F(-2, 3))
            v, _ = aligned_target(u, q)
            assert pi_invariant(v) == q
            p = pi_invariant(u, snap_values=False)
            assert avg_gate_fidelity(u, v) == pytest.approx(class_fidelity(p, q), abs=1e-9)


class TestBestInSet:
    def test_inside(self, regions):
        b = best_in_set(E["e3"], regions["CZ"])
        assert tuple(b.point) == E["e3"] and b.fidelity == 1

    def test_swap_cz(self, regions):
        b = best_in_set(E["e4"], regions["CZ"])
        assert tuple(b.point) == E["e3"] and b.exact_fidelity == F(3, 5)

    def test_swap_xy(self, regions):
        b = best_in_set(E["e4"], regions["XY"])
        assert tuple(b.point) == (F(1, 3), F(1, 3), 0, F(-2, 3))
        assert b.exact_fidelity == F(17, 20)

    @pytest.mark.parametrize("region", ["CZ", "XY", "DB"])
    @pytest.mark.parametrize("target", ["e4", "e5", "e6"])
    def test_against_grid(self, regions, region, target):
        fast = best_in_set(E[target], regions[region])
        slow = grid_oracle(E[target], regions[region])
        assert fast.fidelity >= slow.fidelity - 1e-4
        assert abs(fast.fidelity - slow.fidelity) < 1e-4

    def test_empty_region(self):
        from alcove.polytope import PolytopeUnion
        with pytest.raises(ValidationError):
            best_in_set(E["e4"], PolytopeUnion(()))


class TestProtocol:
    def test_exact_member(self):
        plan = approx_compile(CZ, cov.GateSet.parse("CZ"), FidelityModel.uniform(0.99))
        assert plan.chosen_depth == 1 and tuple(plan.target_point) == E["e2"]
        assert plan.total_score == pytest.approx(0.99)

    def test_perfect_gates_reach_swap(self):
        plan = approx_compile(SWAP, cov.GateSet.parse("CZ"), FidelityModel.uniform(1.0))
        assert plan.chosen_depth == 3 and plan.total_score == pytest.approx(1)
        assert plan.realization is not None
        assert plan.achieved_fidelity == pytest.approx(1)

    def test_stopping_rule(self):
        # scores 2/5 * 0.5, then 3/5 * 0.25: the first decline keeps depth 1
        plan = approx_compile(SWAP, cov.GateSet.parse("CZ"), FidelityModel.uniform(0.5))
        assert plan.scores == pytest.approx([0.2, 0.15])
        assert plan.chosen_depth == 1 and not plan.exhausted

    def test_xy_depth_two(self):
        plan = approx_compile(SWAP, cov.GateSet.parse("XY"), FidelityModel.uniform(0.8))
        assert plan.chosen_depth == 2
        assert tuple(plan.target_point) == (F(1, 3), F(1, 3), 0, F(-2, 3))
        assert plan.realization is None
        assert plan.to_json()["note"] == "realization unsupported"
        # the unitary still has the chosen class and attains the class fidelity
        assert pi_invariant(plan.unitary) == plan.target_point
        assert plan.achieved_fidelity == pytest.approx(0.85)

    def test_xy_high_fidelity(self):
        plan = approx_compile(SWAP, cov.GateSet.parse("XY"), FidelityModel.uniform(0.98))
        assert plan.chosen_depth == 3

    def test_exhausted(self):
        plan = approx_compile(SWAP, cov.GateSet.parse("XY"), FidelityModel.uniform(0.98), n_max=1)
        assert plan.exhausted and plan.chosen_depth == 1

    def test_invariant(self):
        for u in haar_batch(5, 9):
            plan = approx_compile(u, cov.GateSet.parse("CZ"), FidelityModel.uniform(0.99))
            n = plan.chosen_depth
            if n > 1:
                assert plan.scores[n - 1] >= plan.scores[n - 2]
            if len(plan.scores) > n:
                assert plan.scores[n - 1] > plan.scores[n]
            if plan.realization is not None:
                assert plan.achieved_fidelity == pytest.approx(plan.class_fidelity, abs=1e-7)

    def test_custom_score(self):
        fm = FidelityModel({}, 0.9, score=lambda fc, f, n: fc - 0.3 * n)
        plan = approx_compile(SWAP, cov.GateSet.parse("CZ"), fm)
        assert plan.chosen_depth == 1

    def test_bad_fidelity(self):
        with pytest.raises(ValidationError):
            FidelityModel.uniform(1.5)

    def test_per_gate_minimum(self):
        fm = FidelityModel({"CZ": 0.9, "ISWAP": 0.99})
        assert fm.gate_fidelity(cov.GateSet.parse("CZ,ISWAP")) == 0.9
