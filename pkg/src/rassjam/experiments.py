"""Range-profile experiment: one pulse, eigenprojection, matched filter."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .analysis import RASS, TRADITIONAL, Experiment, exact_projector
from .receiver import SnapshotMatrix
from .suppression import RangeProfile, range_profile

# Pass thresholds on peak-to-median (dB) of the suppressed profile
TRADITIONAL_MIN_PTM_DB = 15.0
RASS_MAX_PTM_DB = 3.0


@dataclass(frozen=True)
class ProfileRun:
    pattern: str
    p: float
    trial_index: int
    snapshot: SnapshotMatrix
    profile: RangeProfile
    clean: RangeProfile  # echo only, no jamming, noise or projection

    @property
    def target_bin(self) -> int:
        return self.clean.peak_bin

    @property
    def target_is_peak(self) -> bool:
        return self.profile.peak_bin == self.target_bin

    def summary(self) -> dict:
        return {
            "pattern": self.pattern,
            "p": self.p,
            "trial_index": self.trial_index,
            "peak_bin": self.profile.peak_bin,
            "target_bin": self.target_bin,
            "target_is_peak": self.target_is_peak,
            "peak_to_median_db": self.profile.peak_to_median_db(),
            "clean_echo_peak_to_median_db": self.clean.peak_to_median_db(),
            "bin_resolution_m": self.profile.bin_resolution,
        }


def run_profile(exp: Experiment, pattern: str, trial_index: int = 0, p: float | None = None) -> ProfileRun:
    """Suppress jamming on one simulated pulse and form its range profile.

    The true target bin is the peak of the clean-echo profile, computed from
    the same echoes without jamming, noise or projection.
    """
    if pattern not in (TRADITIONAL, RASS):
        raise ValueError(f"unknown pattern {pattern!r}")
    if p is None:
        p = exp.scenario.p if pattern == RASS else 1.0
    snap = exp.snapshot(pattern, p, trial_index)
    proj = exact_projector(snap)
    replica = exp.replica()
    projected = snap.map(lambda m: proj @ m)
    return ProfileRun(pattern, p, trial_index, snap, range_profile(projected, replica),
                      range_profile(exp.echo, replica))


def masking_rate(exp: Experiment, runs: int = 100, p: float | None = None) -> tuple[float, np.ndarray]:
    """Fraction of seeded RASS runs whose profile peak is not the target bin,
    plus the per-run peak-to-median values."""
    ptm = np.empty(runs)
    masked = 0
    for i in range(runs):
        run = run_profile(exp, RASS, i, p)
        ptm[i] = run.profile.peak_to_median_db()
        masked += not run.target_is_peak
    return masked / runs, ptm
