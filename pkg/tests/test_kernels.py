import random

import pytest

from alcove import _kernels_py, kernels

try:
    from alcove import _kernels as compiled
except ImportError:  # pragma: no cover
    compiled = None

needs_compiled = pytest.mark.skipif(compiled is None, reason="compiled kernels not built")


def rows(rng, n, width, lo=-50, hi=50):
    return [tuple(rng.randint(lo, hi) for _ in range(width)) for _ in range(n)]


def test_selection():
    assert kernels.IMPLEMENTATION in {"python", "cython"}


def test_primitive():
    assert _kernels_py.primitive((4, -6, 8)) == (2, -3, 4)
    assert _kernels_py.primitive((0, 0)) == (0, 0)


def test_int_rank_python():
    assert _kernels_py.int_rank([]) == 0
    assert _kernels_py.int_rank([(1, 2), (2, 4)]) == 1
    assert _kernels_py.int_rank([(1, 0, 0), (0, 1, 0), (1, 1, 0)]) == 2


@needs_compiled
@pytest.mark.parametrize("big", [False, True])
def test_fm_combine_parity(big):
    rng = random.Random(1)
    scale = 10 ** 12 if big else 1
    for _ in range(30):
        pos = [tuple(v * scale for v in r) for r in rows(rng, 5, 5)]
        pos = [r[:2] + (abs(r[2]) + 1,) + r[3:] for r in pos]
        neg = [r[:2] + (-abs(r[2]) - 1,) + r[3:] for r in rows(rng, 4, 5)]
        assert compiled.fm_combine(pos, neg, 2) == _kernels_py.fm_combine(pos, neg, 2)


@needs_compiled
def test_ff_pivot_parity():
    rng = random.Random(2)
    for _ in range(30):
        tab = [list(r) for r in rows(rng, 5, 6, -9, 9)]
        tab[0][0] = tab[0][0] or 1
        a, b = [r[:] for r in tab], [r[:] for r in tab]
        compiled.ff_pivot(a, 0, 0, 1)
        _kernels_py.ff_pivot(b, 0, 0, 1)
        assert a == b


@needs_compiled
@pytest.mark.parametrize("lo,hi", [(-3, 3), (-10 ** 15, 10 ** 15)])
def test_int_rank_parity(lo, hi):
    rng = random.Random(3)
    for _ in range(100):
        m = rows(rng, rng.randint(1, 6), rng.randint(1, 6), lo, hi)
        if rng.random() < 0.5 and len(m) > 1:
            m[-1] = tuple(a + b for a, b in zip(m[0], m[1]))
        assert compiled.int_rank(m) == _kernels_py.int_rank(m)


@needs_compiled
def test_row_values_parity():
    rng = random.Random(4)
    r = rows(rng, 10, 4)
    pt = (1, 2, -3, 4)
    assert compiled.row_values(r, pt) == _kernels_py.row_values(r, pt)
