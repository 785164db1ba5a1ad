"""Self-checks behind ``rassjam validate``.

Each check returns a :class:`CheckResult` carrying the measured value and
the bound it was held to.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .analysis import RASS, TRADITIONAL, Experiment, jsnr_monte_carlo, perturb_eigs, prop1_covariance
from .jammer import rass_gains, sample_switch
from .receiver import align_jamming
from .rng import hash64, make_rng
from .scenario import Scenario
from .suppression import eig_hermitian, orthogonal_projector, sample_covariance, split_subspaces
from .waveform import gen_noise_jamming

REFERENCE_OMEGA_F_DB = -24.19


@dataclass
class CheckResult:
    name: str
    passed: bool
    measured: float | None = None
    bound: float | str | None = None
    note: str = ""
    skipped: bool = False

    def as_dict(self) -> dict:
        return asdict(self)


def rass_jamming_draws(exp: Experiment, p: float, draws: int, seed: int) -> np.ndarray:
    """``draws`` independent aligned RASS jamming snapshots (K x draws)."""
    sc = exp.scenario
    rng = make_rng(hash64(seed, 0xC0FFEE))
    switch = sample_switch(p, sc.jammer_array.num_elements, draws, rng)
    gains = rass_gains(switch, exp.geometry, sc.jammer_array, sc.wavelength)
    r = gen_noise_jamming(exp.power.r_rr, draws, rng)
    return align_jamming(gains.gains, r.samples, exp.geometry, sc.waveform.carrier)


def check_prop1_monte_carlo(scenario: Scenario, draws: int = 100_000, tol: float = 0.02,
                            experiment: Experiment | None = None) -> CheckResult:
    exp = experiment or Experiment.prepare(scenario)
    p, N = scenario.p, scenario.jammer_array.num_elements
    q = rass_jamming_draws(exp, p, draws, scenario.master_seed)
    sample = sample_covariance(q)
    closed = prop1_covariance(p, N, exp.power.r_rr, exp.R_JJ)
    err = float(np.linalg.norm(sample - closed) / np.linalg.norm(closed))
    return CheckResult("prop1_monte_carlo", err <= tol, err, tol,
                       f"relative Frobenius error over {draws} slot draws at p={p}, N={N}")


def rank_structure(R_JJ: np.ndarray, p: float, num_elements: int, r_rr: float) -> list[CheckResult]:
    """Rank-one full-array covariance and the RASS noise-floor eigenvalue."""
    K = R_JJ.shape[0]
    if K < 2:
        reason = "K < 2: a single receiver has no rank structure to test"
        return [CheckResult("traditional_rank_one", True, skipped=True, note=reason),
                CheckResult("rass_min_eigenvalue", True, skipped=True, note=reason)]
    lam = eig_hermitian(R_JJ).values
    ratio = float(lam[1] / lam[0])
    out = [CheckResult("traditional_rank_one", ratio <= 1e-10, ratio, 1e-10, "lambda_2 / lambda_1 of R_JJ")]
    expected = num_elements * p * (1 - p) * r_rr
    if 0 < p < 1:
        lam_min = eig_hermitian(prop1_covariance(p, num_elements, r_rr, R_JJ)).values[-1]
        rel = float(abs(lam_min - expected) / expected)
        out.append(CheckResult("rass_min_eigenvalue", rel <= 1e-10, rel, 1e-10,
                               "relative error of lambda_min against N p (1-p) R_rr"))
    else:
        out.append(CheckResult("rass_min_eigenvalue", True, skipped=True, note="p in {0, 1}: no noise floor"))
    return out


def perturbation_slope(R: np.ndarray, epsilons=(1e-2, 1e-3, 1e-4), seed: int = 0) -> tuple[float, list[float]]:
    """Log-log slope of the first-order eigenvalue error against the perturbation size.

    The perturbation is a random Hermitian direction scaled to ``eps`` times the
    smallest eigengap of ``R``, so every ``eps`` lies in the regime where the
    expansion converges.
    """
    base = eig_hermitian(R)
    K = R.shape[0]
    rng = make_rng(hash64(seed, 0x5107E))
    H = rng.standard_normal((K, K)) + 1j * rng.standard_normal((K, K))
    H = 0.5 * (H + H.conj().T)
    H /= np.linalg.norm(H, 2)
    gap = float(np.min(np.abs(np.diff(base.values))))
    errors = []
    for eps in epsilons:
        dR = eps * gap * H
        exact = np.linalg.eigvalsh(R + dR)[::-1]
        first = base.values + perturb_eigs(base, dR).delta_lambdas
        errors.append(float(np.max(np.abs(exact - first))))
    slope = float(np.polyfit(np.log10(epsilons), np.log10(errors), 1)[0])
    return slope, errors


def check_perturbation(scenario: Scenario, experiment: Experiment | None = None) -> list[CheckResult]:
    exp = experiment or Experiment.prepare(scenario)
    slope, errors = perturbation_slope(exp.R_XX, seed=scenario.master_seed)
    u_approx = exp.perturbed_jamming_vector(scenario.p)
    u_exact = eig_hermitian(exp.R_XX + exp.delta_R(scenario.p)).vectors[:, 0]
    align = float(abs(np.vdot(u_approx, u_exact)))
    return [
        CheckResult("perturbation_order", abs(slope - 2.0) <= 0.2, slope, "2 +/- 0.2",
                    f"eigenvalue errors {errors} at eps 1e-2, 1e-3, 1e-4"),
        CheckResult("perturbation_alignment", align >= 0.99, align, 0.99,
                    "|u1_perturbed^H u1_exact| for the RASS perturbation"),
    ]


def hygiene_instance(K: int, rng: np.random.Generator) -> dict[str, float]:
    """Relative violations of the projector/eigen/PSD/energy invariants on one random case."""
    L = int(rng.integers(K, 4 * K + 8))
    x = rng.standard_normal((K, L)) + 1j * rng.standard_normal((K, L))
    a = rng.standard_normal(K) + 1j * rng.standard_normal(K)
    x += 30.0 * np.outer(a, rng.standard_normal(L) + 1j * rng.standard_normal(L))
    R = sample_covariance(x)
    es = eig_hermitian(R)
    U_J = split_subspaces(es, 1, min(1, K - 1)).jamming
    P = U_J @ U_J.conj().T
    Pp = orthogonal_projector(U_J)
    recon = es.vectors @ np.diag(es.values) @ es.vectors.conj().T
    e_all = np.linalg.norm(x) ** 2
    e_split = np.linalg.norm(P @ x) ** 2 + np.linalg.norm(Pp @ x) ** 2
    return {
        "idempotence": max(np.linalg.norm(P @ P - P) / np.linalg.norm(P),
                           np.linalg.norm(Pp @ Pp - Pp) / np.linalg.norm(Pp)),
        "reconstruction": np.linalg.norm(recon - R) / np.linalg.norm(R),
        "psd": max(0.0, -es.values[-1] / np.trace(R).real),
        "energy_split": abs(e_all - e_split) / e_all,
    }


HYGIENE_BOUNDS = {"idempotence": 1e-10, "reconstruction": 1e-8, "psd": 1e-10, "energy_split": 1e-10}


def check_hygiene(instances: int = 100, seed: int = 0) -> list[CheckResult]:
    rng = make_rng(hash64(seed, 0x4719))
    worst = dict.fromkeys(HYGIENE_BOUNDS, 0.0)
    for i in range(instances):
        K = 2 + i % 7
        for key, val in hygiene_instance(K, rng).items():
            worst[key] = max(worst[key], float(val))
    return [CheckResult(f"hygiene_{k}", worst[k] <= b, worst[k], b, f"worst over {instances} cases, K in 2..8")
            for k, b in HYGIENE_BOUNDS.items()]


def check_baseline(scenario: Scenario, trials: int, experiment: Experiment | None = None,
                   reference_db: float = REFERENCE_OMEGA_F_DB) -> CheckResult:
    """Full-array residual JSNR against the reference value.

    Within +/-2 dB passes outright. Otherwise it still passes if the value is
    at most -15 dB and the RASS (p = 0.5) output exceeds it by 50 dB or more,
    and the note records the discrepancy.
    """
    exp = experiment or Experiment.prepare(scenario)
    omega_f = jsnr_monte_carlo(scenario, TRADITIONAL, trials, "exact", experiment=exp).empirical_exact_db
    rass_sc = scenario.with_(p=0.5)
    omega_r = jsnr_monte_carlo(rass_sc, RASS, trials, "exact").empirical_exact_db
    delta = omega_r - omega_f
    if abs(omega_f - reference_db) <= 2.0:
        return CheckResult("baseline_omega_f", True, omega_f, f"{reference_db} +/- 2 dB",
                           f"Omega_R(0.5) - Omega_F = {delta:.2f} dB")
    ok = omega_f <= -15.0 and delta >= 50.0
    note = (f"DISCREPANCY: Omega_F = {omega_f:.2f} dB is {omega_f - reference_db:+.2f} dB from the reference "
            f"{reference_db} dB; fallback requires Omega_F <= -15 dB and Omega_R(0.5) - Omega_F >= 50 dB "
            f"(measured delta {delta:.2f} dB)")
    return CheckResult("baseline_omega_f", ok, omega_f, "fallback: <= -15 dB and delta >= 50 dB", note)


def run_all(scenario: Scenario, trials: int = 1000, prop1_tol: float = 0.02, draws: int = 100_000) -> list[CheckResult]:
    exp = Experiment.prepare(scenario)
    results = [check_prop1_monte_carlo(scenario, draws, prop1_tol, exp)]
    results += rank_structure(exp.R_JJ, scenario.p, scenario.jammer_array.num_elements, exp.power.r_rr)
    results += check_perturbation(scenario, exp)
    results += check_hygiene(seed=scenario.master_seed)
    results.append(check_baseline(scenario, trials, exp))
    return results

