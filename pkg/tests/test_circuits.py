from fractions import Fraction as F

import numpy as np
import pytest

from alcove.circuits import (
    Circuit, Local, can_via_cz, circuit_invariant, cnot_as_cz, evaluate, gate, iswap_cz_realize,
    iswap_realign, label_matrix, leak_system, leakiness_test, library_entries, realization_library,
    realize, realize_p2_cz, realize_p3_cz, realize_p3_iswap, realize_real_spectrum_iswap,
    verify_library,
)
from alcove.gates import CNOT, CZ, ISWAP, SWAP, gate_matrix
from alcove.su4 import (
    ValidationError, alcove_from_can, canonical_gate, equal_up_to_phase, haar_batch, pi_invariant,
    reconstruction_error, rx, rz, weyl_reduce,
)

from reference import E

PI = np.pi


def same_point(a, b, tol=1e-9):
    return np.allclose(np.array(a, float), np.array(b, float), atol=tol)


class TestEvaluate:
    def test_empty(self):
        assert np.allclose(evaluate(Circuit(())), np.eye(4))

    def test_involution(self):
        assert equal_up_to_phase(evaluate(Circuit((gate("CZ"), gate("CZ")))), np.eye(4))

    def test_three_cnots_make_swap(self):
        c = Circuit((gate("CNOT"), gate("CNOT", flipped=True), gate("CNOT")))
        assert equal_up_to_phase(evaluate(c), SWAP)

    def test_order_is_left_to_right(self):
        c = Circuit((Local.of("X(pi/2)", "I"), gate("CZ")))
        assert np.allclose(evaluate(c), CZ @ np.kron(rx(PI / 2), np.eye(2)))

    def test_label_product_order(self):
        # the rightmost factor acts first
        assert np.allclose(label_matrix("Z(-pi/4)X(pi/2)"), rz(-PI / 4) @ rx(PI / 2))

    def test_cnot_from_cz(self):
        assert equal_up_to_phase(evaluate(cnot_as_cz()), CNOT)

    def test_unknown_gate(self):
        with pytest.raises(ValidationError):
            gate("FROB")

    def test_json_round_trip(self):
        c = Circuit((Local.of("Y(pi/4)", "X(-pi/2)"), gate("ISWAP"), gate("CZ", flipped=True)))
        assert np.allclose(evaluate(Circuit.from_json(c.to_json())), evaluate(c))


class TestLibrary:
    def test_all_verify(self):
        bad = [(e.gate_set, e.depth, e.vertex) for e, _, ok in verify_library() if not ok]
        assert not bad

    def test_cz_e3(self):
        lib = realization_library()
        c = lib[(frozenset({"CZ"}), 2, E["e3"])]
        assert tuple(circuit_invariant(c)) == E["e3"] and c.two_qubit_count == 2

    def test_iswap_e1_depth2(self):
        c = realization_library()[(frozenset({"ISWAP"}), 2, E["e1"])]
        assert tuple(circuit_invariant(c)) == E["e1"]

    def test_cz_e5_depth3(self):
        c = realization_library()[(frozenset({"CZ"}), 3, E["e5"])]
        assert tuple(circuit_invariant(c)) == E["e5"]

    def test_gate_counts(self):
        for e in library_entries():
            assert e.circuit.two_qubit_count == e.depth
            assert e.circuit.gate_names() <= set(e.gate_set)


class TestCanViaCZ:
    @pytest.mark.parametrize("p,e", [((0, 0, 0), "e1"), ((PI / 4, 0, 0), "e2"),
                                     ((PI / 4, PI / 4, PI / 4), "e4")])
    def test_examples(self, p, e):
        assert tuple(circuit_invariant(can_via_cz(weyl_reduce(p)))) == E[e]

    def test_grid(self):
        ticks = np.linspace(0, PI / 4, 10)
        count = 0
        for a in ticks:
            for b in ticks:
                for c in np.linspace(-PI / 4, PI / 4, 10):
                    if not a >= b >= abs(c):
                        continue
                    p = weyl_reduce((a, b, c))
                    got = pi_invariant(evaluate(can_via_cz(p)), snap_values=False)
                    assert same_point(got, alcove_from_can(p), 1e-8)
                    count += 1
        assert count > 100

    def test_cz_native(self):
        c = can_via_cz(weyl_reduce((0.5, 0.3, 0.1)), native="CZ")
        assert c.gate_names() == {"CZ"} and c.two_qubit_count == 3


class TestRealSpectrum:
    @pytest.mark.parametrize("a,b,e", [(F(0), F(0), "e1"), (F(1, 2), F(0), "e3"),
                                       (F(1, 4), F(1, 4), "e2")])
    def test_examples(self, a, b, e):
        assert tuple(circuit_invariant(realize_real_spectrum_iswap(a, b))) == E[e]

    def test_general(self):
        for a, b in [(F(3, 8), F(1, 8)), (F(1, 3), F(1, 6)), (F(1, 5), F(1, 10))]:
            assert tuple(circuit_invariant(realize_real_spectrum_iswap(a, b))) == (a, b, -b, -a)
            assert tuple(circuit_invariant(realize_p2_cz(a, b))) == (a, b, -b, -a)

    def test_order_violation(self):
        with pytest.raises(ValidationError):
            realize_real_spectrum_iswap(F(1, 8), F(1, 4))


class TestIswapCZ:
    def test_face(self):
        for d2, d3 in [(F(1, 4), F(1, 4)), (F(1, 8), F(-1, 8)), (F(1, 6), F(0)), (F(0), F(0))]:
            p = (F(1, 2) - d2, d2, d3, -F(1, 2) - d3)
            c = iswap_cz_realize(p)
            assert c.two_qubit_count == 2 and c.gate_names() == {"ISWAP", "CZ"}
            assert tuple(circuit_invariant(c)) == tuple(pi_invariant(canonical_from(p)))

    def test_off_face(self):
        with pytest.raises(ValidationError):
            iswap_cz_realize(E["e5"])


def canonical_from(p):
    from alcove.su4 import can_from_alcove
    return canonical_gate(can_from_alcove(p))


class TestRealign:
    def test_random(self):
        from alcove.su4 import cartan_double, magic_conjugate, ry, to_special
        for u in haar_batch(30, seed=4):
            r = iswap_realign(u)
            v = to_special(u @ np.kron(ry(r.sigma), np.eye(2)) @ ISWAP)
            assert not r.degenerate
            assert abs(np.trace(cartan_double(magic_conjugate(v))).imag) < 1e-8

    def test_p3_iswap(self):
        for u in haar_batch(20, seed=5):
            c = realize_p3_iswap(u)
            assert c.two_qubit_count == 3 and c.gate_names() == {"ISWAP"}
            assert reconstruction_error(u, evaluate(c)) < 1e-7

    def test_p3_cz(self):
        for u in haar_batch(20, seed=6):
            c = realize_p3_cz(u)
            assert c.two_qubit_count == 3 and c.gate_names() == {"CZ"}
            assert reconstruction_error(u, evaluate(c)) < 1e-7


class TestRealize:
    @pytest.mark.parametrize("gates", [{"CZ"}, {"ISWAP"}, {"CZ", "ISWAP"}])
    def test_swap(self, gates):
        depth = 2 if gates == {"CZ", "ISWAP"} else 3
        c = realize(gates, E["e4"], depth)
        assert c is not None and c.two_qubit_count == depth
        assert tuple(circuit_invariant(c)) == E["e4"]

    def test_identity(self):
        c = realize({"CZ"}, E["e1"], 0)
        assert c is not None and c.two_qubit_count == 0

    def test_unsupported(self):
        assert realize({"XY"}, E["e3"], 1) is None


class TestLeak:
    @pytest.mark.parametrize("name", ["CZ", "ISWAP", "CPHASE(pi/3)", "PSWAP(pi/3)"])
    def test_leaky(self, name):
        v = leakiness_test(gate_matrix(name))
        assert v.leaks and v.null_dim == 1 and not v.indeterminate
        assert np.abs(leak_system(gate_matrix(name)) @ v.witness).max() < 1e-8

    @pytest.mark.parametrize("name", ["SQRT_ISWAP", "DB", "B", "XY(pi/3)"])
    def test_not_leaky(self, name):
        v = leakiness_test(gate_matrix(name))
        assert not v.leaks and v.null_dim == 0 and v.witness is None

    def test_swap(self):
        assert leakiness_test(SWAP).null_dim == 3

    def test_json(self):
        data = leakiness_test(CZ).to_json()
        assert data["leaks"] is True and len(data["witness"]) == 9
