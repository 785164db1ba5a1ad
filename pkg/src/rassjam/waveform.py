"""Baseband waveforms, steering vectors and power bookkeeping."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, NamedTuple

import numpy as np

from .errors import ValidationError

if TYPE_CHECKING:
    from .scenario import ArrayGeometry, Scenario

SPEED_OF_LIGHT = 299_792_458.0


@dataclass(frozen=True)
class WaveformSpec:
    kind: str  # "lfm" | "gaussian_noise"
    bandwidth: float
    duration: float
    carrier: float

    def __post_init__(self):
        if self.kind not in ("lfm", "gaussian_noise"):
            raise ValidationError("waveform.type", f"unknown waveform {self.kind!r}")
        for name, value in (("waveform.bandwidth_hz", self.bandwidth),
                            ("waveform.duration_s", self.duration),
                            ("waveform.carrier_hz", self.carrier)):
            if not (value > 0 and math.isfinite(value)):
                raise ValidationError(name, "must be positive")

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.carrier


@dataclass(frozen=True)
class BasebandSignal:
    samples: np.ndarray
    slot_duration: float

    def __len__(self):
        return self.samples.shape[0]


def steering_vector(theta: float, geom: "ArrayGeometry", wavelength: float) -> np.ndarray:
    """ULA response ``exp(j 2 pi n d sin(theta) / wavelength)``, n = 0..N-1."""
    n = np.arange(geom.num_elements)
    return np.exp(2j * np.pi * n * geom.spacing * np.sin(theta) / wavelength)


def gen_lfm(spec: WaveformSpec, num_slots: int) -> BasebandSignal:
    """Unit-modulus chirp sampled once per slot, symmetric about mid-pulse."""
    if spec.kind != "lfm":
        raise ValidationError("waveform.type", "gen_lfm needs an 'lfm' spec")
    T = spec.duration
    t = (np.arange(num_slots) + 0.5) * T / num_slots
    samples = np.exp(1j * np.pi * (spec.bandwidth / T) * (t - T / 2) ** 2)
    return BasebandSignal(samples, T / num_slots)


def gen_noise_jamming(r_rr: float, num_slots: int, rng: np.random.Generator,
                      slot_duration: float = 1.0) -> BasebandSignal:
    """Circular complex Gaussian samples with per-sample power ``r_rr``.

    One sample per slot; at the slot rate the waveform is white, which is what
    "same bandwidth as the radar" reduces to on this grid.
    """
    if not r_rr > 0:
        raise ValueError("jamming power must be positive")
    z = rng.standard_normal((2, num_slots))
    return BasebandSignal(np.sqrt(r_rr / 2.0) * (z[0] + 1j * z[1]), slot_duration)


class PowerLevels(NamedTuple):
    echo_amplitude: float
    r_rr: float
    signal_energy: float  # ||s[l]||^2 of one K-snapshot
    noise_energy: float  # E||n[l]||^2 of one K-snapshot
    num_slots: int

    @property
    def pulse_signal_energy(self) -> float:
        return self.signal_energy * self.num_slots

    @property
    def pulse_noise_energy(self) -> float:
        return self.noise_energy * self.num_slots

    @property
    def sn_energy(self) -> float:
        """E[||s||^2 + ||n||^2] per snapshot, the JSNR reference energy."""
        return self.signal_energy + self.noise_energy


def derive_power_levels(scenario: "Scenario") -> PowerLevels:
    """Echo amplitude and jamming power from the scenario's dB settings.

    Energies are those of one K-vector snapshot. For a constant-modulus echo
    the SNR is the same whether counted per snapshot or over the pulse, but the
    jamming reference ``K * R_rr / E[||s||^2 + ||n||^2]`` only agrees with the
    output-JSNR expression when both sides are per snapshot.
    """
    K = scenario.num_radars
    noise = K * scenario.noise_variance
    signal = 10.0 ** (scenario.target_snr_db / 10.0) * noise
    r_rr = 10.0 ** (scenario.input_jsnr_per_element_db / 10.0) * (signal + noise) / K
    return PowerLevels(math.sqrt(signal / K), r_rr, signal, noise, scenario.num_slots)
