from fractions import Fraction as F

import numpy as np
import pytest

from alcove import coverage as cov
from alcove.gates import gate_matrix
from alcove.polytope import enumerate_vertices
from alcove.su4 import ValidationError, pi_invariant

from helpers import alcove_points, vertex_sets
from reference import E


@pytest.fixture(scope="module")
def cz3():
    return cov.depth_sets(cov.GateSet.parse("CZ"), 3)


class TestGateSets:
    def test_parse_keeps_parenthesised_commas(self):
        s = cov.GateSet.parse("CZ, XY(3pi/4)")
        assert s.names == ("CZ", "XY(3pi/4)")

    def test_duplicates_rejected(self):
        with pytest.raises(ValidationError):
            cov.GateSet.parse("CZ,CZ")

    def test_empty_rejected(self):
        with pytest.raises(ValidationError):
            cov.GateSet.parse(" , ")

    def test_unknown(self):
        with pytest.raises(ValidationError):
            cov.GateSet.parse("FROB")

    def test_inexact_angle_rejected(self):
        with pytest.raises(ValidationError):
            cov.GateSet.parse("XY(0.3)")

    @pytest.mark.parametrize("name,point", [
        ("PSWAP(pi)", E["e4"]), ("PSWAP(pi/2)", E["e3"]), ("CPHASE(pi)", E["e2"]),
        ("XY(pi)", E["e3"]), ("DB", (F(3, 8), 0, 0, F(-3, 8))),
    ])
    def test_family_members(self, name, point):
        g = cov.standard_gate_alcove(name)
        assert g.endpoints == (point,)

    @pytest.mark.parametrize("name,seg", [("XY", ("e1", "e3")), ("CPHASE", ("e1", "e2")),
                                          ("PSWAP", ("e3", "e4"))])
    def test_families(self, name, seg):
        g = cov.standard_gate_alcove(name)
        assert g.is_family
        verts = {tuple(cov.from_free(v)) for v in enumerate_vertices(g.alcove_image).vertices}
        assert verts == {E[s] for s in seg}

    def test_matrix_gate(self):
        g = cov.matrix_gate("mine", gate_matrix("SQRT_ISWAP"))
        assert g.endpoints == (pi_invariant(gate_matrix("SQRT_ISWAP")),)

    def test_pswap_matrix_agrees(self):
        for k in range(1, 8):
            name = f"PSWAP({k}pi/8)"
            want = cov.standard_gate_alcove(name).endpoints[0]
            assert pi_invariant(gate_matrix(name)) == want


class TestCZ:
    def test_volumes(self, cz3):
        assert cz3.volumes == [0, 0, 0, 1]
        assert cz3.expected_depth == 3
        assert cz3.nesting_verified and cz3.complete

    def test_depth_two_triangle(self, cz3):
        assert vertex_sets(cz3, 2) == {frozenset({E["e1"], E["e2"], E["e3"]})}

    def test_min_depth(self, cz3):
        assert cov.min_depth(E["e1"], cz3) == 0
        assert cov.min_depth(E["e2"], cz3) == 1
        assert cov.min_depth(E["e3"], cz3) == 2
        assert cov.min_depth(E["e4"], cz3) == 3

    def test_float_point(self, cz3):
        assert cov.min_depth(pi_invariant(gate_matrix("XY(0.3)"), snap_values=False), cz3) == 2

    def test_e4_not_in_triangle(self, cz3):
        assert not cz3.depth_sets[2].contains(cov.to_free(E["e4"]))
        assert cz3.depth_sets[3].contains(cov.to_free(E["e4"]))

    def test_uncovered(self):
        r = cov.depth_sets(cov.GateSet.parse("CZ"), 2)
        assert not r.complete and r.expected_depth is None
        with pytest.raises(cov.UncoveredError):
            cov.min_depth(E["e4"], r)


def test_mixed_set_reaches_swap_at_two():
    r = cov.depth_sets(cov.GateSet.parse("CZ,ISWAP"), 3)
    assert cov.min_depth(E["e4"], r) == 2


def test_threads_give_identical_results():
    a = cov.depth_sets(cov.GateSet.parse("XY"), 3, threads=1)
    b = cov.depth_sets(cov.GateSet.parse("XY"), 3, threads=2)
    assert a.to_json() == b.to_json()


def test_db_two_parts():
    r = cov.depth_sets(cov.GateSet.parse("DB"), 3)
    assert len(r.depth_sets[2]) == 2
    assert r.volumes[2] == F(3, 4)
    assert r.expected_depth == F(9, 4)


def test_depth_sets_nested():
    r = cov.depth_sets(cov.GateSet.parse("XY(pi/2)"), 4)
    pts = alcove_points(500, seed=1)
    for n in range(1, r.max_depth_reached + 1):
        for x in pts:
            if r.depth_sets[n - 1].contains(x):
                assert r.depth_sets[n].contains(x)


def test_random_circuits_land_inside():
    """Sampled XY(pi/2) circuits of depth 2 fall inside the computed set."""
    from alcove.su4 import haar_batch, pi_invariant_batch
    g = gate_matrix("XY(pi/2)")
    locs = haar_batch(600, seed=9, dim=2).reshape(300, 2, 2, 2)
    us = np.array([g @ np.kron(a, b) @ g for a, b in locs])
    pts = pi_invariant_batch(us)[:, :3]
    r = cov.depth_sets(cov.GateSet.parse("XY(pi/2)"), 2)
    assert all(r.depth_sets[2].contains_float(p, 1e-7) for p in pts)


class TestXY:
    @pytest.mark.parametrize("t", [F(0), F(1, 5), F(1, 2), F(3, 5), F(3, 4), F(9, 10), F(1)])
    def test_slice_matches_formula(self, t):
        assert cov.xy_slice_volume(t) == cov.xy_volume_formula(t)

    @pytest.mark.parametrize("t", [F(1, 4), F(3, 4)])
    def test_general_route_agrees(self, t):
        assert cov.xy_slice_volume(t, "general") == cov.xy_volume_formula(t)

    def test_out_of_range(self):
        with pytest.raises(ValidationError):
            cov.xy_slice_volume(F(3, 2))


def test_haar_fraction_validation(cz3):
    with pytest.raises(cov.CoverageError):
        cov.haar_fraction(cz3, 4)
    with pytest.raises(ValidationError):
        cov.haar_fraction(cz3, 1, samples=0)
    assert cov.haar_fraction(cz3, 3, 2000, seed=0) == 1.0


def test_report_json(cz3):
    data = cz3.to_json(lrs=True)
    assert data["expected_depth"] == "3"
    assert data["volumes"] == ["0", "0", "0", "1"]
    assert "begin" in data["depth_sets"][3][0]["lrs"]
