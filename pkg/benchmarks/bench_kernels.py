"""Compiled versus pure-Python kernels.

Times ``loggamma`` and ``mb_sum`` from both backends on the same inputs, then
an end-to-end Fox-H evaluation in a subprocess per backend (the backend is
fixed at import, so ``GWRIGHT_PURE_PYTHON`` has to be set before it).

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from gwright import _kernels_py

try:
    from gwright import _kernels
except ImportError:
    _kernels = None

END_TO_END = """
import time, numpy as np
from gwright import BACKEND
from gwright.foxh import gwf_via_foxh
x = np.geomspace(1e-2, 50, 200)
t = time.perf_counter()
gwf_via_foxh([(1, 1)], [(1, 0.9)], x)
print(BACKEND, time.perf_counter() - t)
"""


def best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def kernel_rows(repeat):
    rng = np.random.default_rng(0)
    z = rng.uniform(-30, 30, 20000) + 1j * rng.uniform(-30, 30, 20000)
    s = 0.5 + 1j * np.linspace(-200, 200, 4096)
    logk = _kernels_py.loggamma(s)
    w = np.full(s.size, 0.1)
    logz = np.log(np.geomspace(1e-3, 1e3, 256)).astype(complex)
    cases = [
        ("loggamma n=20000", lambda m: m.loggamma(z)),
        ("mb_sum 4096x256", lambda m: m.mb_sum(logk, s, w, logz)),
    ]
    rows = []
    for name, fn in cases:
        py = best(lambda: fn(_kernels_py), repeat)
        cy = best(lambda: fn(_kernels), repeat) if _kernels is not None else float("nan")
        diff = (np.max(np.abs(fn(_kernels) - fn(_kernels_py)) / np.maximum(1, np.abs(fn(_kernels_py))))
                if _kernels is not None else float("nan"))
        rows.append((name, py, cy, diff))
    return rows


def end_to_end():
    out = {}
    for pure in ("1", "0"):
        env = dict(os.environ, GWRIGHT_PURE_PYTHON=pure)
        res = subprocess.run([sys.executable, "-c", END_TO_END], env=env,
                             capture_output=True, text=True, check=True)
        backend, secs = res.stdout.split()
        out[backend] = float(secs)
    return out


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)
    print(f"{'kernel':<22}{'python [s]':>12}{'cython [s]':>12}{'speedup':>9}{'max rel diff':>14}")
    for name, py, cy, diff in kernel_rows(args.repeat):
        print(f"{name:<22}{py:>12.4f}{cy:>12.4f}{py / cy:>9.1f}{diff:>14.1e}")
    e2e = end_to_end()
    py, cy = e2e.get("python", np.nan), e2e.get("cython", np.nan)
    print(f"{'gwf_via_foxh x200':<22}{py:>12.4f}{cy:>12.4f}{py / cy:>9.1f}")


if __name__ == "__main__":
    main()
