"""Time the numba and numpy kernel backends on Monte Carlo-sized inputs.

    python3 benchmarks/bench_kernels.py [--repeat 200]

Also times one full 200-trial JSNR run per backend (each in a subprocess,
since the backend is fixed at import).
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from rassjam import _kernels
from rassjam.rng import make_rng

MC_SNIPPET = (
    "import time; from rassjam.analysis import jsnr_monte_carlo, RASS; "
    "from rassjam.scenario import default_scenario; sc = default_scenario(); "
    "jsnr_monte_carlo(sc, RASS, 5, 'both'); t = time.perf_counter(); "
    "jsnr_monte_carlo(sc, RASS, 200, 'both'); print(time.perf_counter() - t)"
)


def inputs(K=4, N=16, L=128, seed=0):
    rng = make_rng(seed)
    x = rng.standard_normal((K, L)) + 1j * rng.standard_normal((K, L))
    bits = (rng.random((N, L)) < 0.5).astype(np.float64)
    phase = np.exp(1j * rng.uniform(0, 2 * np.pi, (K, N)))
    u = x[:, :1] / np.linalg.norm(x[:, 0])
    return x, bits, phase, np.eye(K) - u @ u.conj().T


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=200)
    args = ap.parse_args()
    x, bits, phase, P = inputs()
    calls = {
        "switch_gains": lambda impl: impl["switch_gains"](bits, phase),
        "sample_covariance": lambda impl: impl["sample_covariance"](x),
        "projected_energy": lambda impl: impl["projected_energy"](P, x),
    }
    backends = {"numpy": _kernels.numpy_impl}
    if _kernels.numba_impl is not None:
        backends["numba"] = _kernels.numba_impl
    print(f"{'kernel':20s}" + "".join(f"{b + ' (us)':>14s}" for b in backends))
    for name, call in calls.items():
        row = []
        for impl in backends.values():
            call(impl)  # warm-up / JIT compile
            row.append(min(timeit.repeat(lambda: call(impl), number=args.repeat, repeat=3)) / args.repeat * 1e6)
        print(f"{name:20s}" + "".join(f"{t:14.2f}" for t in row))
    print()
    for b in backends:
        env = dict(os.environ, RASSJAM_BACKEND=b)
        out = subprocess.run([sys.executable, "-c", MC_SNIPPET], env=env, capture_output=True, text=True, check=True)
        print(f"200-trial JSNR Monte Carlo, {b:5s} backend: {float(out.stdout):.3f} s")


if __name__ == "__main__":
    main()
