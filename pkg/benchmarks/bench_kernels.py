"""Benchmark the screening kernels: numba JIT vs plain numpy backends.

Usage:
    python benchmarks/bench_kernels.py [--batches N]

Times the batch hypothesis screen and the repair objective on the trees
the generator actually exercises, for every available backend plus the
vectorized numpy screen.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from treetp import make_pitchfork, make_star
from treetp import _kernels as kernels
from treetp.conjecture_lab import GenConfig, _Plan

BATCH = 50_000


def bench_screen(plan: _Plan, batches: int, augmented: bool) -> dict[str, float]:
    rng = np.random.default_rng(1)
    n = plan.paths_flat.max() + 1
    data = [
        rng.integers(1, 151, size=(BATCH, n, n), dtype=np.int64) for _ in range(batches)
    ]
    out = {}
    backends = [("numpy", kernels.py_backend)]
    if kernels.jit_backend is not None:
        backends.append(("numba", kernels.jit_backend))
    for name, backend in backends:
        backend.screen_batch(
            data[0][:16], plan.paths_flat, plan.path_offsets, plan.pend_flat,
            plan.pend_offsets, augmented,
        )
        t0 = time.perf_counter()
        for batch in data:
            backend.screen_batch(
                batch, plan.paths_flat, plan.path_offsets, plan.pend_flat,
                plan.pend_offsets, augmented,
            )
        out[name] = batches * BATCH / (time.perf_counter() - t0)
    t0 = time.perf_counter()
    for batch in data:
        kernels.screen_batch_vectorized(batch, plan.paths, plan.pend_blocks, augmented)
    out["numpy-vectorized"] = batches * BATCH / (time.perf_counter() - t0)
    return out


def bench_objective(plan: _Plan, evals: int, augmented: bool) -> dict[str, float]:
    # the full violation count is what every repair proposal recomputes
    rng = np.random.default_rng(2)
    n = plan.paths_flat.max() + 1
    mats = rng.integers(1, 151, size=(evals, n, n), dtype=np.int64)
    out = {}
    backends = [("numpy", kernels.py_backend)]
    if kernels.jit_backend is not None:
        backends.append(("numba", kernels.jit_backend))
    for name, backend in backends:
        backend.hypothesis_violations(
            mats[0], plan.paths_flat, plan.path_offsets, plan.pend_flat,
            plan.pend_offsets, augmented, False,
        )
        count = evals if name == "numba" else max(evals // 20, 1)
        t0 = time.perf_counter()
        for k in range(count):
            backend.hypothesis_violations(
                mats[k], plan.paths_flat, plan.path_offsets, plan.pend_flat,
                plan.pend_offsets, augmented, False,
            )
        out[name] = count / (time.perf_counter() - t0)
    return out


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--batches", type=int, default=10, help="batches of 50k candidates")
    args = parser.parse_args()

    jobs = [
        ("star-4 screen", _Plan(GenConfig(tree=make_star(4, 1))), False, "screen"),
        ("star-6 augmented screen", _Plan(GenConfig(tree=make_star(6, 1), augmented=True)), True, "screen"),
        ("pitchfork screen", _Plan(GenConfig(tree=make_pitchfork())), False, "screen"),
        ("star-6 augmented repair objective", _Plan(GenConfig(tree=make_star(6, 1), augmented=True)), True, "objective"),
    ]
    print(f"kernels backend active: {kernels.BACKEND}")
    for label, plan, augmented, kind in jobs:
        if kind == "screen":
            rates = bench_screen(plan, args.batches, augmented)
            unit = "candidates/s"
        else:
            rates = bench_objective(plan, 20_000, augmented)
            unit = "evals/s"
        base = rates.get("numpy", 1.0)
        print(f"\n{label}:")
        for name, rate in rates.items():
            speedup = rate / base
            print(f"  {name:18s} {rate:14,.0f} {unit}   ({speedup:5.1f}x vs numpy)")


if __name__ == "__main__":
    main()
