"""Time the numba kernels against the pure-numpy fallbacks.

Run:  python benchmarks/bench_backends.py [--quick]

The backend is flipped per call through COVARRAY_BACKEND, so one process
measures both paths on identical inputs.  Numba timings exclude JIT
compilation (one warmup call per kernel).
"""
import argparse
import os
import time

import numpy as np

from covarray import (build_ca4_half, build_full_plane, build_truncated_planes,
                      half_generators, tower_for_q)
from covarray._backend import get_kernels
from covarray.geometry import _pack_bits
from covarray.verify import colex_subsets


def timed(fn, *args, repeat=3):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench(name, args, check=None):
    results = {}
    for backend in ("numba", "numpy"):
        os.environ["COVARRAY_BACKEND"] = backend
        kern = getattr(get_kernels(), name)
        if backend == "numba":
            kern(*args)  # warmup: compile outside the timed region
        results[backend], out = timed(kern, *args)
        if check is not None:
            check(out)
    speedup = results["numpy"] / results["numba"]
    print(f"{name:<14} numba {results['numba']*1e3:9.1f} ms   "
          f"numpy {results['numpy']*1e3:9.1f} ms   speedup {speedup:6.1f}x")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--quick", action="store_true",
                    help="smaller q (for smoke testing)")
    opts = ap.parse_args()
    q_cov, q_rank, q_geo = (3, 5, 5) if opts.quick else (5, 11, 11)

    ca = build_ca4_half(tower_for_q(q_cov, 4))
    combos = colex_subsets(ca.k, 4)
    print(f"coverage_scan: CA({ca.N}; 4, {ca.k}, {ca.v}), "
          f"{len(combos)} column 4-sets")
    bench("coverage_scan", (ca.rows, combos, ca.v, 1, 100),
          check=lambda out: None if out[1] == 0 else 1 / 0)

    tower = tower_for_q(q_rank, 4)
    gens = np.stack([g.entries for g in half_generators(tower)])
    combos = colex_subsets(gens.shape[2], 4)
    print(f"rank_scan: 3 generators 4x{gens.shape[2]} over GF({q_rank}), "
          f"{len(combos)} subsets")
    bench("rank_scan", (gens, combos, 4, tower.add_q, tower.mul_q,
                        tower.inv_q, tower.neg_q),
          check=lambda out: None if not out.any() else 1 / 0)

    tower = tower_for_q(q_geo, 4)
    m1, m2, mh = build_truncated_planes(build_full_plane(tower))
    p2b = {p: i for i, p in enumerate(m1.points)}
    packs = tuple(_pack_bits([c for c in p.circles if c], p2b, len(m1.points))
                  for p in (mh, m1, m2))
    print(f"triple_scan: {len(packs[0])} x {len(packs[1])} x {len(packs[2])} "
          f"circles (q={q_geo})")
    bench("triple_scan", packs,
          check=lambda out: None if out[0] <= 3 else 1 / 0)
    os.environ.pop("COVARRAY_BACKEND", None)


if __name__ == "__main__":
    main()
