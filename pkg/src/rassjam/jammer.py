"""Jammer transmit patterns: full array and random antenna subset selection.

The gain seen by radar k in slot l is ``alpha(theta_k)^H (p[l] o alpha(theta_1))``
where ``p[l]`` is the on/off switch vector. With every element on this is the
ordinary full-array gain.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DimensionError

TRADITIONAL = "traditional"
RASS = "rass"


@dataclass(frozen=True)
class SwitchRealization:
    bits: np.ndarray  # (N, L) bool, column l is the switch vector of slot l
    p: float

    @property
    def active_counts(self) -> np.ndarray:
        return self.bits.sum(axis=0)


@dataclass(frozen=True)
class JammingGains:
    gains: np.ndarray  # (K, L) complex
    pattern: str


def sample_switch(p: float, num_elements: int, num_slots: int, rng: np.random.Generator) -> SwitchRealization:
    """I.i.d. Bernoulli(p) element activations."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"selection probability must be in [0, 1], got {p}")
    # uniform draws lie in [0, 1): p = 1 gives all ones, p = 0 all zeros
    bits = rng.random((num_elements, num_slots)) < p
    return SwitchRealization(bits, p)


def element_phases(sin_angles: np.ndarray, spacing: float, wavelength: float, num_elements: int) -> np.ndarray:
    """(K, N) matrix of ``conj(alpha_n(theta_k)) * alpha_n(theta_1)``.

    Written with the sine difference so the main-radar row is exactly 1.
    """
    n = np.arange(num_elements)
    delta = sin_angles[0] - np.asarray(sin_angles)
    return np.exp(2j * np.pi * spacing / wavelength * np.outer(delta, n))


def _phases(geometry, array, wavelength):
    return element_phases(geometry.sin_angles, array.spacing, wavelength, array.num_elements)


def rass_gains(switch: SwitchRealization, geometry, array, wavelength: float) -> JammingGains:
    bits = switch.bits
    if bits.ndim != 2 or bits.shape[0] != array.num_elements:
        raise DimensionError(f"switch has shape {bits.shape}, array has {array.num_elements} elements")
    g = _kernels.switch_gains(bits.astype(np.float64), _phases(geometry, array, wavelength))
    return JammingGains(g, RASS)


def traditional_gains(geometry, array, wavelength: float, num_slots: int = 1) -> JammingGains:
    """Time-constant full-array gains, replicated over ``num_slots`` columns.

    Evaluated through the same kernel as :func:`rass_gains` on an all-on
    switch, so the two agree bit for bit when ``p = 1``.
    """
    ones = np.ones((array.num_elements, num_slots))
    g = _kernels.switch_gains(ones, _phases(geometry, array, wavelength))
    return JammingGains(g, TRADITIONAL)
