"""Closed-form covariance and JSNR, first-order eigen-perturbation, and the
Monte Carlo harness that checks them against the simulated pipeline."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import DegenerateConfigurationError, DegenerateSpectrumError, DimensionError
from .jammer import RASS, TRADITIONAL, JammingGains, element_phases, rass_gains, sample_switch, traditional_gains
from .receiver import carrier_phase, echo_matrix, synthesize
from .rng import trial_streams
from .scenario import GeometrySolution, Scenario, solve_geometry
from .suppression import (EigenSystem, check_hermitian, eig_hermitian, orthogonal_projector,
                          projected_energies, sample_covariance, split_subspaces)
from .waveform import PowerLevels, derive_power_levels, gen_lfm, gen_noise_jamming

EXACT = "exact"
PERTURBATION = "perturbation"
MODES = (EXACT, PERTURBATION)


def to_db(x: float) -> float:
    return 10.0 * math.log10(x) if x > 0 else -math.inf


# -- closed forms ---------------------------------------------------------------

def prop1_covariance(p: float, num_elements: int, r_rr: float, R_JJ: np.ndarray) -> np.ndarray:
    """RASS jamming covariance ``p^2 R_JJ + N p (1 - p) R_rr I``."""
    R_JJ = np.asarray(R_JJ, dtype=np.complex128)
    K = R_JJ.shape[0]
    return p * p * R_JJ + num_elements * p * (1.0 - p) * r_rr * np.eye(K)


def exact_rass_covariance(p: float, r_rr: float, geometry: GeometrySolution, array, wavelength: float,
                          carrier: float) -> np.ndarray:
    """Bernoulli-switch jamming covariance without the orthogonality shortcut.

    ``E[q q^H] = p^2 R_JJ + p (1 - p) R_rr (phi phi^H) o G`` with ``G`` the Gram
    matrix of the per-radar element phase rows. When the jammer's steering
    vectors toward distinct radars are orthogonal, ``G = N I`` and this reduces
    to :func:`prop1_covariance`.
    """
    phase = element_phases(geometry.sin_angles, array.spacing, wavelength, array.num_elements)
    phi = carrier_phase(geometry.jammer_delays, carrier)
    a = phase.sum(axis=1) * phi
    gram = phase @ phase.conj().T
    return r_rr * (p * p * np.outer(a, a.conj()) + p * (1.0 - p) * np.outer(phi, phi.conj()) * gram)


def traditional_jamming_covariance(gains: JammingGains, r_rr: float, carrier_phases: np.ndarray) -> np.ndarray:
    """Rank-one ``R_rr a a^H`` with ``a_k = g_k exp(-j 2 pi f_c tau_k)``."""
    if gains.pattern != TRADITIONAL:
        raise ValueError(f"expected traditional gains, got pattern {gains.pattern!r}")
    a = gains.gains[:, 0] * np.asarray(carrier_phases)
    return r_rr * np.outer(a, a.conj())


def prop2_jsnr(num_radars: int, num_elements: int, p: float, r_rr: float, expected_sn_energy: float) -> float:
    """Closed-form output JSNR (linear), ``K R_rr N p (1 - p) / E[||s||^2 + ||n||^2]``."""
    if not expected_sn_energy > 0:
        raise ValueError("expected signal-plus-noise energy must be positive")
    return num_radars * r_rr / expected_sn_energy * num_elements * p * (1.0 - p)


# -- perturbation -----------------------------------------------------------------

@dataclass(frozen=True)
class PerturbationResult:
    delta_lambdas: np.ndarray
    approx_eigenvectors: np.ndarray  # column k is u_k + U b_k; NaN where not requested
    coefficients: np.ndarray  # column k is b_k
    base: EigenSystem

    @property
    def approx_eigenvalues(self) -> np.ndarray:
        return self.base.values + self.delta_lambdas


def perturb_eigs(base: EigenSystem, delta_R: np.ndarray, indices: Iterable[int] | None = None,
                 gap_rtol: float = 1e-9) -> PerturbationResult:
    """First-order eigenpair updates of ``R + delta_R`` from those of ``R``.

    ``delta_lambda_k = u_k^H dR u_k`` and ``b_k[i] = u_i^H dR u_k / (lambda_i - lambda_k)``
    for ``i != k``. Eigenvector corrections are computed only for ``indices``
    (all by default); a gap ``|lambda_i - lambda_k|`` at or below
    ``gap_rtol * |lambda_1|`` for a needed pair raises
    :class:`DegenerateSpectrumError`.
    """
    check_hermitian(delta_R)
    U, lam = base.vectors, base.values
    K = lam.shape[0]
    if delta_R.shape != (K, K):
        raise DimensionError(f"perturbation has shape {delta_R.shape}, expected {(K, K)}")
    M = U.conj().T @ delta_R @ U  # M[i, k] = u_i^H dR u_k
    delta_lambdas = M.diagonal().real.copy()
    idx = range(K) if indices is None else list(indices)
    eps_gap = gap_rtol * abs(lam[0])
    B = np.zeros((K, K), dtype=np.complex128)
    approx = np.full((K, K), np.nan, dtype=np.complex128)
    for k in idx:
        gaps = lam - lam[k]
        gaps[k] = np.inf
        if np.any(np.abs(gaps) <= eps_gap):
            i = int(np.argmin(np.abs(gaps)))
            raise DegenerateSpectrumError(
                f"eigenvalues {i} and {k} are within {eps_gap:.3g}; first-order perturbation undefined")
        B[:, k] = M[:, k] / gaps
        B[k, k] = 0.0
        approx[:, k] = U[:, k] + U @ B[:, k]
    return PerturbationResult(delta_lambdas, approx, B, base)


# -- pipeline context ---------------------------------------------------------------

@dataclass(frozen=True)
class Experiment:
    """Everything about a scenario that does not change between trials."""

    scenario: Scenario
    geometry: GeometrySolution
    power: PowerLevels
    echo: np.ndarray
    trad: JammingGains
    jammer_phases: np.ndarray
    R_JJ: np.ndarray
    R_SS: np.ndarray

    @classmethod
    def prepare(cls, scenario: Scenario) -> "Experiment":
        geometry = solve_geometry(scenario)
        power = derive_power_levels(scenario)
        trad = traditional_gains(geometry, scenario.jammer_array, scenario.wavelength, scenario.num_slots)
        phases = carrier_phase(geometry.jammer_delays, scenario.waveform.carrier)
        echo = echo_matrix(scenario, geometry, power.echo_amplitude)
        return cls(scenario, geometry, power, echo, trad, phases,
                   traditional_jamming_covariance(trad, power.r_rr, phases),
                   sample_covariance(echo))

    @property
    def R_XX(self) -> np.ndarray:
        """Ensemble covariance under the full-array pattern."""
        K = self.scenario.num_radars
        return self.R_SS + self.R_JJ + self.scenario.noise_variance * np.eye(K)

    def delta_R(self, p: float) -> np.ndarray:
        N = self.scenario.jammer_array.num_elements
        K = self.scenario.num_radars
        return (p * p - 1.0) * self.R_JJ + N * p * (1.0 - p) * self.power.r_rr * np.eye(K)

    def perturbed_jamming_vector(self, p: float) -> np.ndarray:
        """Unit-norm first-order estimate of the dominant eigenvector under RASS."""
        res = perturb_eigs(eig_hermitian(self.R_XX), self.delta_R(p), indices=[0])
        u = res.approx_eigenvectors[:, 0]
        return u / np.linalg.norm(u)

    def replica(self):
        return gen_lfm(self.scenario.waveform, self.scenario.num_slots)

    def snapshot(self, pattern: str, p: float, trial_index: int):
        sc = self.scenario
        streams = trial_streams(sc.master_seed, trial_index)
        if pattern == RASS:
            switch = sample_switch(p, sc.jammer_array.num_elements, sc.num_slots, streams.switch)
            gains = rass_gains(switch, self.geometry, sc.jammer_array, sc.wavelength)
        elif pattern == TRADITIONAL:
            gains = self.trad
        else:
            raise ValueError(f"unknown pattern {pattern!r}")
        slot = sc.waveform.duration / sc.num_slots
        r = gen_noise_jamming(self.power.r_rr, sc.num_slots, streams.jamming, slot)
        return synthesize(sc, self.geometry, gains, r, streams.noise, echo=self.echo)


def exact_projector(snap) -> np.ndarray:
    """Projector removing the dominant eigenvector of the sample covariance."""
    split = split_subspaces(eig_hermitian(sample_covariance(snap)), 1, 1)
    return orthogonal_projector(split.jamming)


# -- Monte Carlo ----------------------------------------------------------------------

@dataclass
class JsnrReport:
    pattern: str
    p: float
    num_elements: int
    num_radars: int
    r_rr: float
    trials: int
    seed: int
    closed_form_db: float
    empirical_exact_db: float | None = None
    empirical_perturbation_db: float | None = None
    numerators: dict[str, float] = field(default_factory=dict)
    denominators: dict[str, float] = field(default_factory=dict)
    ratios: dict[str, list[float]] = field(default_factory=dict)

    @property
    def empirical_db(self) -> float:
        return self.empirical_exact_db if self.empirical_exact_db is not None else self.empirical_perturbation_db

    def to_dict(self, include_trials: bool = True) -> dict:
        out = {
            "pattern": self.pattern,
            "p": self.p,
            "N": self.num_elements,
            "K": self.num_radars,
            "R_rr": self.r_rr,
            "trials": self.trials,
            "seed": self.seed,
            "closed_form_db": self.closed_form_db,
            "empirical_exact_db": self.empirical_exact_db,
            "empirical_perturbation_db": self.empirical_perturbation_db,
            "mean_numerator": self.numerators,
            "mean_denominator": self.denominators,
        }
        if include_trials:
            out["per_trial_ratios"] = self.ratios
        return out


def _modes(mode: str) -> tuple[str, ...]:
    if mode == "both":
        return MODES
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    return (mode,)


def jsnr_monte_carlo(scenario: Scenario, pattern: str, trials: int, mode: str = EXACT, *,
                     workers: int = 1, experiment: Experiment | None = None) -> JsnrReport:
    """Average residual JSNR over ``trials`` independently seeded pulses.

    Numerator and denominator energies are averaged separately, then divided.
    Trial ``i`` draws only from streams derived from ``(master_seed, i)`` and
    the sums are taken with ``math.fsum`` in trial order, so the report does
    not depend on ``workers``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    modes = _modes(mode)
    exp = experiment or Experiment.prepare(scenario)
    sc = exp.scenario
    p = sc.p if pattern == RASS else 1.0
    proj_pert = orthogonal_projector(exp.perturbed_jamming_vector(p)[:, None]) if PERTURBATION in modes else None

    def run(i):
        snap = exp.snapshot(pattern, p, i)
        out = {}
        if EXACT in modes:
            out[EXACT] = projected_energies(snap, exact_projector(snap))
        if PERTURBATION in modes:
            out[PERTURBATION] = projected_energies(snap, proj_pert)
        return out

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, range(trials)))
    else:
        results = [run(i) for i in range(trials)]

    N, K = sc.jammer_array.num_elements, sc.num_radars
    report = JsnrReport(pattern, p, N, K, exp.power.r_rr, trials, sc.master_seed,
                        to_db(prop2_jsnr(K, N, p, exp.power.r_rr, exp.power.sn_energy)))
    for m in modes:
        nums = [r[m][0] for r in results]
        dens = [r[m][1] for r in results]
        num, den = math.fsum(nums), math.fsum(dens)
        if den == 0.0:
            raise DegenerateConfigurationError("echo-plus-noise energy is zero after projection")
        report.numerators[m] = num / trials
        report.denominators[m] = den / trials
        report.ratios[m] = [a / b for a, b in zip(nums, dens)]
        setattr(report, f"empirical_{m}_db", to_db(num / den))
    return report


def sweep(scenario: Scenario, axis: str, values: Sequence, trials: int, mode: str = "both",
          *, workers: int = 1) -> list[JsnrReport]:
    """One RASS report per grid point; ``axis`` is ``"p"`` or ``"n"``.

    Along ``n`` the jamming power per element is held fixed.
    """
    values = list(values)
    if not values:
        raise ValueError("sweep grid is empty")
    out = []
    for v in values:
        if axis == "p":
            sc = scenario.with_(p=float(v))
        elif axis == "n":
            sc = scenario.with_elements(int(v))
        else:
            raise ValueError(f"unknown sweep axis {axis!r}")
        out.append(jsnr_monte_carlo(sc, RASS, trials, mode, workers=workers))
    return out
