"""Compare the compiled and pure-Python polytope kernels.

Runs each kernel on random integer data shaped like the monodromy systems,
checks that both implementations agree exactly, and times a full depth-2
coverage computation with each.

    python benchmarks/bench_kernels.py [--repeat N]
"""

from __future__ import annotations

import argparse
import copy
import importlib
import os
import random
import subprocess
import sys
import timeit

from alcove import _kernels_py


def _compiled():
    try:
        return importlib.import_module("alcove._kernels")
    except ImportError:
        return None


def fm_data(rng: random.Random, n: int = 60, width: int = 10, k: int = 3):
    pos, neg = [], []
    while len(pos) < n or len(neg) < n:
        row = [rng.randint(-3, 3) for _ in range(width)]
        if row[k] > 0 and len(pos) < n:
            pos.append(tuple(row))
        elif row[k] < 0 and len(neg) < n:
            neg.append(tuple(row))
    return pos, neg, k


def pivot_data(rng: random.Random, rows: int = 40, cols: int = 30):
    return [[rng.randint(-5, 5) for _ in range(cols)] for _ in range(rows)]


def pivot_sequence(mod, tab):
    tab = copy.deepcopy(tab)
    prev = 1
    for r in range(min(6, len(tab))):
        c = next((j for j, v in enumerate(tab[r]) if v), None)
        if c is None:
            continue
        mod.ff_pivot(tab, r, c, prev)
        prev = tab[r][c]
    return tab


def coverage_time(pure: bool) -> float:
    env = dict(os.environ, ALCOVE_PURE_PYTHON="1" if pure else "0")
    code = ("import time; from alcove.coverage import GateSet, depth_sets;"
            "t = time.perf_counter(); depth_sets(GateSet.of('XY'), 3);"
            "print(time.perf_counter() - t)")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                         text=True, check=True)
    return float(out.stdout.strip())


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--skip-coverage", action="store_true")
    args = ap.parse_args(argv)

    compiled = _compiled()
    rng = random.Random(0)
    pos, neg, k = fm_data(rng)
    tab = pivot_data(rng)
    rank_mats = [[[rng.randint(-8, 8) for _ in range(4)] for _ in range(rng.randint(2, 8))]
                 for _ in range(200)]
    impls = {"python": _kernels_py}
    if compiled is not None:
        impls["cython"] = compiled
    else:
        print("compiled kernels not built; timing the fallback only")

    results = {}
    for name, mod in impls.items():
        fm = min(timeit.repeat(lambda: mod.fm_combine(pos, neg, k), number=5, repeat=args.repeat)) / 5
        pv = min(timeit.repeat(lambda: pivot_sequence(mod, tab), number=20, repeat=args.repeat)) / 20
        rk = min(timeit.repeat(lambda: [mod.int_rank(m) for m in rank_mats], number=5,
                               repeat=args.repeat)) / 5
        results[name] = (fm, pv, rk)
        print(f"{name:>7}: fm_combine {fm * 1e3:8.3f} ms   ff_pivot x6 {pv * 1e3:8.3f} ms   "
              f"int_rank x200 {rk * 1e3:8.3f} ms")

    if compiled is not None:
        assert compiled.fm_combine(pos, neg, k) == _kernels_py.fm_combine(pos, neg, k)
        assert pivot_sequence(compiled, tab) == pivot_sequence(_kernels_py, tab)
        big = [tuple(v * 2 ** 40 for v in r) for r in pos[:5]]
        assert compiled.fm_combine(big, neg, k) == _kernels_py.fm_combine(big, neg, k)
        assert [compiled.int_rank(m) for m in rank_mats] == [_kernels_py.int_rank(m) for m in rank_mats]
        (fp, pp, rp), (fc, pc, rc) = results["python"], results["cython"]
        print(f"speedup: fm_combine {fp / fc:.1f}x, ff_pivot {pp / pc:.1f}x, "
              f"int_rank {rp / rc:.1f}x (outputs identical)")

    if not args.skip_coverage:
        print(f"depth-3 XY coverage: python {coverage_time(True):.2f} s", end="")
        if compiled is not None:
            print(f", cython {coverage_time(False):.2f} s")
        else:
            print()
    return 0


if __name__ == "__main__":
    sys.exit(main())
