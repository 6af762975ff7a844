"""Time the numba and numpy flavours of the inner kernels.

    python3 benchmarks/bench_kernels.py [--repeat N]

Runs both flavours on identical inputs, checks they agree, and prints the
best-of-N wall time for each plus an end-to-end energy table with the
numba switch on and off (each in a fresh interpreter).
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from virial_ansatz import _accel, _kernels
from virial_ansatz.quadrature import gauss_legendre

PIPELINE = (
    "import time; t=time.perf_counter();"
    "from virial_ansatz import Potential, build_report;"
    "[build_report(Potential.quartic(1.0, lam, 4.0), 5) for lam in (0.05, 0.25, 0.5, 1.0, 2.5, 5.0)];"
    "print(time.perf_counter()-t)"
)


def best(fn, repeat):
    fn()  # warm-up (jit compile)
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not _accel.HAVE_NUMBA:
        sys.exit("numba is not installed; nothing to compare")

    rng = np.random.default_rng(1)
    t = np.sort(rng.uniform(0.0, 6.0, 4000))
    q = np.array([1.0, 4.0, 0.3])
    x, w = gauss_legendre(20)
    u = rng.uniform(-4.0, 4.0, 20000)
    beta = np.linspace(1.0, 1.5, 13)
    off = np.linspace(0.0, 2.0, 13)
    off[:2] = 0.0

    cases = {
        "g_cumulative (4000 pts)": (
            lambda: _kernels.g_cumulative_numpy(t, 1, q, x, w, 0.125),
            lambda: _kernels.g_cumulative_loop(t, 1, q, x, w, 0.125),
        ),
        "recurrence (nmax=12, 20000 pts)": (
            lambda: _kernels.recurrence_numpy(u, beta, off),
            lambda: _kernels.recurrence_loop(u, beta, off),
        ),
    }
    print(f"{'kernel':<34}{'numpy [ms]':>12}{'numba [ms]':>12}{'speed-up':>10}")
    for name, (f_np, f_nb) in cases.items():
        assert np.allclose(f_np(), f_nb(), rtol=1e-12, atol=1e-12), name
        a, b = best(f_np, args.repeat), best(f_nb, args.repeat)
        print(f"{name:<34}{1e3 * a:>12.2f}{1e3 * b:>12.2f}{a / b:>10.1f}")

    print("\nsix-block energy table, fresh interpreter (includes jit warm-up or cache load):")
    for flag in ("1", "0"):
        env = dict(os.environ, VIRIAL_ANSATZ_NUMBA=flag)
        out = subprocess.run([sys.executable, "-c", PIPELINE], env=env, capture_output=True, text=True, check=True)
        print(f"  VIRIAL_ANSATZ_NUMBA={flag}: {float(out.stdout):.2f} s")


if __name__ == "__main__":
    main()
