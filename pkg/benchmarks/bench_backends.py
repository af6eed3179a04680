"""Compare the numba kernels against the pure-Python fallback.

    python benchmarks/bench_backends.py [--patch 28] [--repeat 5]

Kernel timings call the jitted function and its ``.py_func`` side by side.
The end-to-end timing runs one 224x224 TopoImage in a subprocess per backend,
since the backend is fixed at import time by ``TOPOGRAPH_DISABLE_NUMBA``.
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from topograph import _accel, _kernels

E2E = """
import time, numpy as np
from topograph import _accel
from topograph.topoimage import build_topoimage
g = np.random.default_rng(0).random((224, 224))
build_topoimage(g[:28, :28])
t0 = time.perf_counter()
for _ in range({repeat}):
    build_topoimage(g)
print(_accel.backend(), (time.perf_counter() - t0) / {repeat})
"""


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_kernels(side, repeat):
    flat = np.random.default_rng(1).random(side * side)
    order = np.argsort(-flat, kind="stable")
    rows = []
    for name, fn, args in [
        ("h0_sweep", _kernels.h0_sweep, (flat, order, side, side)),
        ("h1_dual_sweep", _kernels.h1_dual_sweep, (flat, side, side)),
    ]:
        fn(*args)  # compile
        fast = best_of(lambda: fn(*args), repeat)
        slow = best_of(lambda: fn.py_func(*args), repeat)
        rows.append((name, fast, slow))
    return rows


def bench_end_to_end(repeat):
    out = {}
    for disable in ("0", "1"):
        env = dict(os.environ, TOPOGRAPH_DISABLE_NUMBA=disable)
        res = subprocess.run(
            [sys.executable, "-c", E2E.format(repeat=repeat)], env=env, capture_output=True, text=True, check=True
        )
        backend, secs = res.stdout.split()
        out[backend] = float(secs)
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--patch", type=int, default=28)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    if not _accel.HAVE_NUMBA:
        sys.exit("numba is not importable (or TOPOGRAPH_DISABLE_NUMBA is set); nothing to compare")

    print(f"kernels on one {args.patch}x{args.patch} patch (best of {args.repeat})")
    for name, fast, slow in bench_kernels(args.patch, args.repeat):
        print(f"  {name:14s} numba {fast * 1e3:8.3f} ms   python {slow * 1e3:8.3f} ms   x{slow / fast:6.1f}")

    print("224x224 TopoImage, 28x28 patches, 7x7 PI (mean per image)")
    e2e = bench_end_to_end(args.repeat)
    for backend, secs in e2e.items():
        print(f"  {backend:6s} {secs:.3f} s")


if __name__ == "__main__":
    main()
