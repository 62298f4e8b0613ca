"""Benchmark of the compiled kernels against the pure-Python fallback.

Times the two hot paths that dominate sweep and audit workloads: the per-step
trust matrix update and a full episode of the canonical dyadic environment.
The backends are bit-identical, so this is purely a speed comparison.
"""

from __future__ import annotations

import time

import numpy as np

from . import _pykernels

try:
    from . import _ckernels
except ImportError:
    _ckernels = None


def _time(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def _bench_trust(kernels, n_agents: int = 6, steps: int = 5000):
    rng = np.random.default_rng(7)
    T = np.full((n_agents, n_agents), 0.5)
    R = np.full((n_agents, n_agents), 0.5)
    actions = rng.uniform(0, 100, size=(steps, n_agents))
    baselines = np.full(n_agents, 50.0)

    def run():
        for k in range(steps):
            kernels.trust_update_matrix(T, R, actions[k], baselines,
                                        1.0, 0.1, 0.3, 0.05)
    return run


def _bench_trust_paths(kernels, nseq: int = 2000, nstep: int = 1000):
    rng = np.random.default_rng(11)
    signals = rng.uniform(-1, 1, size=(nseq, nstep))

    def run():
        kernels.trust_path_extrema(1.0, signals, 0.1, 0.3)
    return run


def _bench_payoffs(kernels, steps: int = 20000, n_agents: int = 4):
    rng = np.random.default_rng(13)
    actions = rng.uniform(0, 100, size=(steps, n_agents))
    endow = np.full(n_agents, 100.0)
    out = np.empty(n_agents)

    def run():
        for k in range(steps):
            kernels.base_payoffs(actions[k], endow, 20.0, 0.75, True, 0.65, out)
    return run


def run_benchmark(repeats: int = 5) -> dict:
    cases = {
        "trust_update_matrix (6 agents x 5k steps)": _bench_trust,
        "trust_path_extrema (2k paths x 1k steps)": _bench_trust_paths,
        "base_payoffs (4 agents x 20k steps)": _bench_payoffs,
    }
    results: dict[str, dict[str, float]] = {}
    print(f"{'case':<45} {'pure':>10} {'compiled':>10} {'speedup':>8}")
    for label, factory in cases.items():
        pure = _time(factory(_pykernels), repeats)
        row = {"pure_s": pure}
        if _ckernels is not None:
            compiled = _time(factory(_ckernels), repeats)
            row["compiled_s"] = compiled
            row["speedup"] = pure / compiled
            print(f"{label:<45} {pure:>9.4f}s {compiled:>9.4f}s "
                  f"{pure / compiled:>7.1f}x")
        else:
            print(f"{label:<45} {pure:>9.4f}s {'n/a':>10} {'n/a':>8}")
        results[label] = row
    return results


if __name__ == "__main__":
    run_benchmark()
