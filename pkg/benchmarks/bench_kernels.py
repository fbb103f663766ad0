#!/usr/bin/env python3
"""Benchmark the compiled labeling kernel against the pure fallback.

Usage: python benchmarks/bench_kernels.py [--repeats N]

Times label_components on synthetic bin planes at the standard analysis
size and larger, then the full pipeline on a 640x480 capture with each
backend selected.
"""

import argparse
import os
import statistics
import subprocess
import sys
import time

import numpy as np

from phonecam.kernels import _fallback

try:
    from phonecam.kernels import _labeling
except ImportError:
    _labeling = None


def time_fn(fn, *args, repeats=20):
    samples = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        samples.append(time.perf_counter() - t0)
    return min(samples), statistics.median(samples)


def bench_labeling(repeats):
    rng = np.random.default_rng(42)
    cases = {
        "192x144 / 9 bins": rng.integers(0, 9, size=(144, 192)).astype(np.int32),
        "192x144 / 2 bins": rng.integers(0, 2, size=(144, 192)).astype(np.int32),
        "576x432 / 9 bins": rng.integers(0, 9, size=(432, 576)).astype(np.int32),
    }
    print(f"{'case':<20} {'backend':<10} {'best':>10} {'median':>10}")
    for name, bins in cases.items():
        backends = [("fallback", _fallback.label_components)]
        if _labeling is not None:
            backends.insert(0, ("cython", _labeling.label_components))
        for backend_name, fn in backends:
            best, median = time_fn(fn, bins, repeats=repeats)
            print(f"{name:<20} {backend_name:<10} {best * 1e3:9.2f}ms {median * 1e3:9.2f}ms")


def bench_pipeline(repeats):
    code = (
        "import time, numpy as np\n"
        "from phonecam import analyze_array, kernels\n"
        "img = np.random.default_rng(7).integers(0, 256, size=(480, 640, 3), dtype=np.uint8)\n"
        "analyze_array(img)\n"
        f"samples = []\n"
        f"for _ in range({repeats}):\n"
        "    t0 = time.perf_counter(); analyze_array(img); samples.append(time.perf_counter() - t0)\n"
        "print(f'{kernels.BACKEND:<10} best {min(samples)*1e3:7.1f}ms')\n"
    )
    print(f"\nfull 640x480 pipeline ({repeats} runs):", flush=True)
    for env_extra in ({}, {"PHONECAM_PURE_KERNELS": "1"}):
        env = dict(os.environ, **env_extra)
        subprocess.run([sys.executable, "-c", code], env=env, check=True)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeats", type=int, default=20)
    args = parser.parse_args()
    if _labeling is None:
        print("note: compiled kernel unavailable, benchmarking fallback only\n")
    bench_labeling(args.repeats)
    bench_pipeline(max(5, args.repeats // 2))


if __name__ == "__main__":
    main()
