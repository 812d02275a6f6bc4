"""Compare the compiled and pure-Python kernels on the main profile.

Inputs are the decker constraint systems of every enumerated scheme, so the
homology work is the same as a full unfiltered run.

    python benchmarks/bench_kernels.py [--genus 1] [--repeat 3]
"""

from __future__ import annotations

import argparse
import time

from deckerscan import _pykernels
from deckerscan.decker import arc_mask, build_decker_graph, distinguished_cycle, simple_cycles, straight_mask
from deckerscan.enumerator import enumerate_schemes
from deckerscan.homology import cycle_basis
from deckerscan.model import main_profile

try:
    from deckerscan import _ckernels
except ImportError:
    _ckernels = None


def prepare():
    cases = []
    for s in enumerate_schemes(main_profile()):
        g = build_decker_graph(s)
        cycles = simple_cycles(g)
        basis = cycle_basis(g)
        dc = distinguished_cycle(g)
        vecs = [basis.vector(c) for c in cycles] + [basis.vector(dc)]
        am = [arc_mask(c) for c in cycles] + [arc_mask(dc)]
        sm = [straight_mask(g, c) for c in cycles] + [straight_mask(g, dc)]
        cases.append((basis.rank, vecs, am, sm, vecs[-1]))
    return cases


def run(impl, cases, genus):
    t_pairs = t_reduce = t_search = 0.0
    unsat = 0
    for rank, vecs, am, sm, req in cases:
        t0 = time.perf_counter()
        pairs = impl.disjoint_pairs(am, sm)
        t1 = time.perf_counter()
        rows = impl.reduce_bilinear(vecs, pairs)
        t2 = time.perf_counter()
        found = None if rows is None else impl.search(rank, genus, rows, req)
        t3 = time.perf_counter()
        t_pairs += t1 - t0
        t_reduce += t2 - t1
        t_search += t3 - t2
        unsat += found is None
    return t_pairs, t_reduce, t_search, unsat


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--genus", type=int, default=1)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    cases = prepare()
    print(f"{len(cases)} schemes, genus {args.genus}, best of {args.repeat}")
    impls = [("python", _pykernels)] + ([("cython", _ckernels)] if _ckernels else [])
    best = {}
    for name, impl in impls:
        runs = [run(impl, cases, args.genus) for _ in range(args.repeat)]
        total = min(sum(r[:3]) for r in runs)
        r = min(runs, key=lambda r: sum(r[:3]))
        best[name] = total
        print(f"{name:7s} pairs {r[0]:.3f}s  reduce {r[1]:.3f}s  search {r[2]:.3f}s  total {total:.3f}s  unsat {r[3]}")
    if "cython" in best:
        print(f"speedup {best['python'] / best['cython']:.1f}x")
    else:
        print("compiled extension not available")


if __name__ == "__main__":
    main()
