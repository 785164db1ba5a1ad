"""Fusion-centre snapshot synthesis: echoes + jamming + noise on the slot grid."""
from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError
from .jammer import JammingGains
from .scenario import GeometrySolution, Scenario
from .waveform import BasebandSignal, derive_power_levels, gen_lfm


@dataclass(frozen=True)
class SnapshotMatrix:
    """K x L received samples with the ground-truth decomposition kept alongside."""

    s: np.ndarray
    q: np.ndarray
    n: np.ndarray
    data: np.ndarray

    @classmethod
    def from_parts(cls, s, q, n) -> "SnapshotMatrix":
        if not (s.shape == q.shape == n.shape):
            raise DimensionError(f"component shapes differ: {s.shape}, {q.shape}, {n.shape}")
        return cls(s, q, n, s + q + n)

    @property
    def shape(self):
        return self.data.shape

    def map(self, op) -> "SnapshotMatrix":
        """Apply a linear operator to every component (and to the data)."""
        return SnapshotMatrix(op(self.s), op(self.q), op(self.n), op(self.data))


def carrier_phase(delays, carrier: float) -> np.ndarray:
    """``exp(-j 2 pi f_c tau)`` with the integer cycles removed first."""
    cycles = np.asarray(delays) * carrier
    return np.exp(-2j * np.pi * (cycles - np.floor(cycles)))


def target_delay_offsets(geometry: GeometrySolution) -> np.ndarray:
    """Echo delay of each radar relative to the jammer range cell, in seconds.

    After alignment the jammer sits at delay zero on every channel. The target
    is placed at ``tau_t - 2 tau_j`` so both are expressed in the same doubled
    delay convention; the result is the target's range offset from the jammer.
    """
    return geometry.target_delays - 2.0 * geometry.jammer_delays


def fractional_shift(x: np.ndarray, delay: float, slot_duration: float) -> np.ndarray:
    """Circular delay by ``delay`` seconds via a linear phase ramp in frequency."""
    L = x.shape[-1]
    f = np.fft.fftfreq(L, d=slot_duration)
    return np.fft.ifft(np.fft.fft(x) * np.exp(-2j * np.pi * f * delay))


def echo_matrix(scenario: Scenario, geometry: GeometrySolution, amplitude: float | None = None) -> np.ndarray:
    """Deterministic target echoes, one row per radar."""
    if amplitude is None:
        amplitude = derive_power_levels(scenario).echo_amplitude
    pulse = gen_lfm(scenario.waveform, scenario.num_slots)
    offsets = target_delay_offsets(geometry)
    phases = carrier_phase(geometry.target_delays, scenario.waveform.carrier)
    rows = [amplitude * phases[k] * fractional_shift(pulse.samples, offsets[k], pulse.slot_duration)
            for k in range(scenario.num_radars)]
    return np.array(rows)


def align_jamming(gains: np.ndarray, r: np.ndarray, geometry: GeometrySolution, carrier: float) -> np.ndarray:
    """Jamming after the fusion centre removes each radar's known jammer delay.

    Slot l of the waveform lands in slot l on every channel; only the residual
    carrier phase of each path survives, giving the fixed inter-radar phase
    differences the defence relies on.
    """
    phases = carrier_phase(geometry.jammer_delays, carrier)
    return gains * phases[:, None] * r[None, :]


def synthesize(scenario: Scenario, geometry: GeometrySolution, gains: JammingGains, r: BasebandSignal,
               rng: np.random.Generator, *, noise_variance: float | None = None,
               echo_amplitude: float | None = None, echo: np.ndarray | None = None) -> SnapshotMatrix:
    """Received snapshots ``x = s + q + n``.

    ``noise_variance`` and ``echo_amplitude`` override the scenario's power
    levels (zero is allowed here, e.g. for noiseless checks). A precomputed
    ``echo`` matrix may be passed to skip recomputing the deterministic part.
    """
    K, L = scenario.num_radars, scenario.num_slots
    if gains.gains.shape != (K, L):
        raise DimensionError(f"gains have shape {gains.gains.shape}, expected {(K, L)}")
    if len(r) != L:
        raise DimensionError(f"jamming waveform has {len(r)} slots, expected {L}")
    if echo is None:
        echo = echo_matrix(scenario, geometry, echo_amplitude)
    elif echo.shape != (K, L):
        raise DimensionError(f"echo has shape {echo.shape}, expected {(K, L)}")
    q = align_jamming(gains.gains, r.samples, geometry, scenario.waveform.carrier)
    sigma2 = scenario.noise_variance if noise_variance is None else noise_variance
    z = rng.standard_normal((2, K, L))
    n = np.sqrt(sigma2 / 2.0) * (z[0] + 1j * z[1])
    return SnapshotMatrix.from_parts(echo, q, n)


# -- text dump ----------------------------------------------------------------

SNAPSHOT_HEADER = "radar,re_0,im_0,re_1,im_1,..."


def write_snapshot_csv(fh, data: np.ndarray, comment: str | None = None) -> None:
    """One row per radar: its index, then re/im pairs for slots 0..L-1."""
    if comment:
        fh.write(f"# {comment}\n")
    L = data.shape[1]
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["radar"] + [f"{part}_{l}" for l in range(L) for part in ("re", "im")])
    for k, row in enumerate(data):
        inter = np.empty(2 * L)
        inter[0::2], inter[1::2] = row.real, row.imag
        writer.writerow([k] + [repr(float(v)) for v in inter])


def read_snapshot_csv(fh) -> np.ndarray:
    rows = [line for line in fh if not line.startswith("#")]
    body = list(csv.reader(rows))[1:]
    vals = np.array([[float(v) for v in row[1:]] for row in body])
    return vals[:, 0::2] + 1j * vals[:, 1::2]
