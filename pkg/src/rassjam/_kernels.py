"""Hot inner loops of the Monte Carlo pipeline.

Two interchangeable implementations live here: plain numpy and numba
``@njit``. The numba path is used when numba imports and the environment
variable ``RASSJAM_BACKEND`` is not ``numpy``. Both produce the same values to
rounding; each is bitwise deterministic on its own.
"""
from __future__ import annotations

import os

import numpy as np


# -- numpy -------------------------------------------------------------------

def _np_switch_gains(bits, phase):
    # Fixed accumulation order over elements so every column is summed the
    # same way (a BLAS gemm may block columns differently).
    out = np.zeros((phase.shape[0], bits.shape[1]), dtype=np.complex128)
    for n in range(phase.shape[1]):
        out += phase[:, n:n + 1] * bits[n]
    return out


def _np_sample_covariance(x):
    r = (x @ x.conj().T) / x.shape[1]
    return 0.5 * (r + r.conj().T)


def _np_projected_energy(proj, x):
    y = proj @ x
    return float(np.sum(y.real**2 + y.imag**2))


numpy_impl = {
    "switch_gains": _np_switch_gains,
    "sample_covariance": _np_sample_covariance,
    "projected_energy": _np_projected_energy,
}


# -- numba -------------------------------------------------------------------

def _build_numba():
    from numba import njit

    @njit(cache=True)
    def switch_gains(bits, phase):
        k_dim, n_dim = phase.shape
        l_dim = bits.shape[1]
        out = np.zeros((k_dim, l_dim), dtype=np.complex128)
        for k in range(k_dim):
            for l in range(l_dim):
                acc = 0.0 + 0.0j
                for n in range(n_dim):
                    if bits[n, l] != 0.0:
                        acc += phase[k, n]
                out[k, l] = acc
        return out

    @njit(cache=True)
    def sample_covariance(x):
        k_dim, l_dim = x.shape
        out = np.zeros((k_dim, k_dim), dtype=np.complex128)
        for i in range(k_dim):
            for j in range(i, k_dim):
                acc = 0.0 + 0.0j
                for l in range(l_dim):
                    acc += x[i, l] * np.conj(x[j, l])
                acc /= l_dim
                if i == j:
                    out[i, i] = acc.real
                else:
                    out[i, j] = acc
                    out[j, i] = np.conj(acc)
        return out

    @njit(cache=True)
    def projected_energy(proj, x):
        k_dim, l_dim = x.shape
        total = 0.0
        for l in range(l_dim):
            for i in range(k_dim):
                acc = 0.0 + 0.0j
                for j in range(k_dim):
                    acc += proj[i, j] * x[j, l]
                total += acc.real * acc.real + acc.imag * acc.imag
        return total

    return {
        "switch_gains": switch_gains,
        "sample_covariance": sample_covariance,
        "projected_energy": projected_energy,
    }


try:
    numba_impl = _build_numba()
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba_impl = None


def select_backend(name: str | None = None) -> str:
    name = (name or os.environ.get("RASSJAM_BACKEND", "numba")).lower()
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and numba_impl is None:
        return "numpy"
    return name


BACKEND = select_backend()
_impl = numba_impl if BACKEND == "numba" else numpy_impl


def switch_gains(bits: np.ndarray, phase: np.ndarray) -> np.ndarray:
    return _impl["switch_gains"](np.ascontiguousarray(bits, dtype=np.float64),
                                 np.ascontiguousarray(phase, dtype=np.complex128))


def sample_covariance(x: np.ndarray) -> np.ndarray:
    return _impl["sample_covariance"](np.ascontiguousarray(x, dtype=np.complex128))


def projected_energy(proj: np.ndarray, x: np.ndarray) -> float:
    return float(_impl["projected_energy"](np.ascontiguousarray(proj, dtype=np.complex128),
                                           np.ascontiguousarray(x, dtype=np.complex128)))
