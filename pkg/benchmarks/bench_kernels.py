"""Compare the Cython and pure-Python kernels on full Cambridge-scale runs.

    python benchmarks/bench_kernels.py [--reps 3] [--days 11]
"""

import argparse
import time
from dataclasses import replace

import numpy as np

from swimtrace import kernels
from swimtrace.contacts import detect_contacts
from swimtrace.scenario import cambridge_default, generate_world
from swimtrace.simulate import run_seeds
from swimtrace.swim import run_mobility


def bench(backend, cfg, reps):
    mob, det = [], []
    radio, _ = cfg.node_table()
    for r in range(reps):
        world_ss, mob_ss = run_seeds(cfg.rng_seed, r)
        world = generate_world(cfg, np.random.default_rng(world_ss))
        t = time.perf_counter()
        timeline = run_mobility(cfg, world, mob_ss, backend=backend)
        mob.append(time.perf_counter() - t)
        t = time.perf_counter()
        log = detect_contacts(timeline, radio, backend=backend)
        det.append(time.perf_counter() - t)
    return min(mob), min(det), len(timeline), len(log)


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--reps", type=int, default=3)
    p.add_argument("--days", type=float, default=11)
    args = p.parse_args()
    cfg = replace(cambridge_default(), sim_duration=args.days * 86400.0)
    print(f"{'backend':8} {'mobility_s':>11} {'detect_s':>9} {'intervals':>10} {'contacts':>9}")
    results = {}
    for name in kernels.available():
        results[name] = bench(name, cfg, args.reps)
        m, d, n_int, n_con = results[name]
        print(f"{name:8} {m:11.4f} {d:9.4f} {n_int:10d} {n_con:9d}")
    if len(results) == 2:
        (mc, dc, *_), (mp, dp, *_) = results["cython"], results["python"]
        print(f"speedup: mobility x{mp / mc:.1f}, detect x{dp / dc:.1f}")


if __name__ == "__main__":
    main()
