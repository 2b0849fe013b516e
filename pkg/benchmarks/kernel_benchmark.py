"""Throughput comparison of the two scoring-kernel backends.

Times batched analytic scoring and the full parameter-shift evaluation
(1 + 2 * 6L circuit batches per call) under the numba and numpy backends,
and reports their agreement.
"""

from __future__ import annotations

import argparse
import os
import time

import numpy as np

from xorbench import kernels


def _time_call(fn, repeat: int) -> float:
    fn()  # warm-up (includes JIT compilation on the numba path)
    start = time.perf_counter()
    for _ in range(repeat):
        fn()
    return (time.perf_counter() - start) / repeat


def main() -> None:
    parser = argparse.ArgumentParser(description="Benchmark scoring-kernel backends")
    parser.add_argument("--points", type=int, default=320)
    parser.add_argument("--layers", type=int, default=2)
    parser.add_argument("--repeat", type=int, default=50)
    args = parser.parse_args()

    rng = np.random.default_rng(42)
    points = rng.uniform(-0.5, 1.5, (args.points, 2))
    params = rng.uniform(-np.pi, np.pi, 6 * args.layers)

    backends = ["numpy"] + (["numba"] if kernels.HAVE_NUMBA else [])
    results = {}
    for backend in backends:
        os.environ[kernels.BACKEND_ENV] = backend
        scores = kernels.circuit_scores(points, params)
        t_scores = _time_call(lambda: kernels.circuit_scores(points, params), args.repeat)
        t_shift = _time_call(lambda: kernels.circuit_scores_shifted(points, params), args.repeat)
        results[backend] = (scores, t_scores, t_shift)
    os.environ.pop(kernels.BACKEND_ENV, None)

    print(f"points={args.points} layers={args.layers} repeat={args.repeat}")
    print(f"{'backend':8s} {'scores_ms':>10s} {'shifted_ms':>11s} {'grad_evals/s':>13s}")
    for backend, (_, t_scores, t_shift) in results.items():
        print(f"{backend:8s} {1e3 * t_scores:10.3f} {1e3 * t_shift:11.3f} {1.0 / t_shift:13.1f}")
    if len(results) == 2:
        diff = float(np.max(np.abs(results["numpy"][0] - results["numba"][0])))
        speedup = results["numpy"][2] / results["numba"][2]
        print(f"max |numpy - numba| = {diff:.3e}; numba speedup on shifted eval: {speedup:.1f}x")


if __name__ == "__main__":
    main()
