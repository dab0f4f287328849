from fractions import Fraction as F

import pytest

from alcove.polytope import enumerate_vertices, fix_coordinates, project
from alcove.qlr import (
    QlrEntry, base_entries, c2_branches, entry_inequality, partition_bijection,
    partition_from_subset, q_sequences, qlr_table, rho_precompose, su2_inequalities,
    su4_inequalities,
)


def test_row_counts():
    assert len(base_entries(2)) == 3
    assert len(qlr_table(2)) == 4
    assert len(base_entries(4)) == 45
    assert all(e.degree_consistent for e in qlr_table(4))


def test_partition_bijection():
    assert partition_bijection((0, 0), 2, 2) == frozenset({3, 4})
    assert partition_bijection((2, 0), 2, 2) == frozenset({1, 4})
    seqs = q_sequences(2, 2)
    assert len(seqs) == 6
    for s in seqs:
        assert partition_from_subset(partition_bijection(s, 2, 2), 2, 2) == s


def test_entry_inequality():
    e = QlrEntry(r=2, k=2, a=(1, 0), b=(1, 0), c=(2, 0), d=0)
    ineq = entry_inequality(e)
    names = ("a1", "a2", "a3", "a4", "b1", "b2", "b3", "b4", "d1", "d2", "d3", "d4")
    got = {n: c for n, c in zip(names, ineq.coeffs) if c}
    assert got == {"d1": 1, "d4": 1, "a2": -1, "a4": -1, "b2": -1, "b4": -1}
    assert ineq.constant == 0


def _delta_range(a1, b1):
    p = su2_inequalities().free_polytope()
    fixed = fix_coordinates(p, {0: a1, 1: b1})
    return sorted(v[0] for v in enumerate_vertices(fixed).vertices)


@pytest.mark.parametrize("a1,b1,lo,hi", [
    (F(1, 10), F(3, 10), F(1, 5), F(2, 5)),
    (F(1, 4), F(1, 4), F(0), F(1, 2)),
    (F(0), F(0), F(0), F(0)),
    (F(1, 8), F(1, 8), F(0), F(1, 4)),
])
def test_su2_slices(a1, b1, lo, hi):
    r = _delta_range(a1, b1)
    assert (r[0], r[-1]) == (lo, hi)


def test_su2_projection():
    p = project(su2_inequalities().free_polytope(), [0, 2])
    verts = set(enumerate_vertices(p).vertices)
    assert verts == {(0, 0), (F(1, 2), 0), (0, F(1, 2)), (F(1, 2), F(1, 2))}


def test_rho_precompose():
    s = su4_inequalities()
    names = s.names
    off = names.index("d1")

    def row(**kw):
        c = [F(0)] * len(names)
        for k, v in kw.items():
            c[names.index(k)] = F(v)
        from alcove.qlr import LinearInequality
        return LinearInequality(tuple(c), F(-1, 3))

    r = rho_precompose(row(d1=1, d4=1), off)
    assert {n: c for n, c in zip(names, r.coeffs) if c} == {"d3": 1, "d2": 1}
    assert r.constant == F(-1, 3)
    r = rho_precompose(row(d1=1), off)
    assert {n: c for n, c in zip(names, r.coeffs) if c} == {"d3": 1}
    assert r.constant == F(-1, 3) + F(1, 2)


def test_branches_shape():
    b1, b2 = c2_branches(su4_inequalities())
    assert len(b1.inequalities) == len(b2.inequalities)
    assert b1.names == b2.names
