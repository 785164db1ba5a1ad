"""The radar side: covariance, eigen-subspaces, eigenprojection, range profiles."""
from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DegenerateConfigurationError, DimensionError, NotHermitianError
from .receiver import SnapshotMatrix
from .waveform import SPEED_OF_LIGHT, BasebandSignal

HERMITIAN_RTOL = 1e-10


@dataclass(frozen=True)
class EigenSystem:
    values: np.ndarray  # descending
    vectors: np.ndarray  # column i pairs with values[i]


@dataclass(frozen=True)
class SubspaceSplit:
    jamming: np.ndarray  # U_J, K x J
    signal: np.ndarray  # U_S, K x T
    noise: np.ndarray  # U_N, K x (K-J-T)
    jamming_values: np.ndarray
    signal_values: np.ndarray
    noise_values: np.ndarray


@dataclass(frozen=True)
class RangeProfile:
    bins: np.ndarray  # noncoherent power sum over radars
    bin_resolution: float  # metres per bin
    per_radar: np.ndarray | None = None

    @property
    def magnitude_db(self) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return 10.0 * np.log10(self.bins)

    @property
    def peak_bin(self) -> int:
        return int(np.argmax(self.bins))

    def peak_to_median_db(self) -> float:
        return float(10.0 * np.log10(self.bins.max() / np.median(self.bins)))

    @property
    def ranges(self) -> np.ndarray:
        return np.arange(self.bins.shape[0]) * self.bin_resolution


def _data(x) -> np.ndarray:
    return x.data if isinstance(x, SnapshotMatrix) else np.asarray(x)


def sample_covariance(x) -> np.ndarray:
    """``(1/L) sum_l x[:, l] x[:, l]^H``, exactly Hermitian."""
    data = _data(x)
    if data.ndim != 2 or data.shape[1] < 1:
        raise DimensionError("need a K x L snapshot matrix with L >= 1")
    return _kernels.sample_covariance(data)


def check_hermitian(R: np.ndarray, rtol: float = HERMITIAN_RTOL) -> None:
    R = np.asarray(R)
    if R.ndim != 2 or R.shape[0] != R.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {R.shape}")
    scale = np.linalg.norm(R)
    if np.linalg.norm(R - R.conj().T) > rtol * max(scale, np.finfo(float).tiny):
        raise NotHermitianError("matrix is not Hermitian within tolerance")


def eig_hermitian(R: np.ndarray) -> EigenSystem:
    """Eigenpairs in descending order with a fixed phase per eigenvector.

    Each eigenvector is rotated so that its largest-modulus entry (first one
    on ties) is real and positive.
    """
    check_hermitian(R)
    R = np.asarray(R, dtype=np.complex128)
    w, V = np.linalg.eigh(0.5 * (R + R.conj().T))
    w, V = w[::-1].copy(), V[:, ::-1].copy()
    for i in range(V.shape[1]):
        col = V[:, i]
        lead = col[np.argmax(np.abs(col))]
        V[:, i] = col * (abs(lead) / lead)
    return EigenSystem(w, V)


def split_subspaces(es: EigenSystem, num_jammers: int = 1, num_targets: int = 1) -> SubspaceSplit:
    K = es.values.shape[0]
    if num_jammers < 0 or num_targets < 0 or num_jammers + num_targets > K:
        raise DimensionError(f"J + T = {num_jammers + num_targets} exceeds K = {K}")
    j, t = num_jammers, num_jammers + num_targets
    U, w = es.vectors, es.values
    return SubspaceSplit(U[:, :j], U[:, j:t], U[:, t:], w[:j], w[j:t], w[t:])


def orthogonal_projector(U_J: np.ndarray) -> np.ndarray:
    """``I - U_J U_J^H``."""
    U_J = np.atleast_2d(np.asarray(U_J, dtype=np.complex128))
    if U_J.shape[0] == 1 and U_J.shape[1] > 1:
        U_J = U_J.T
    K = U_J.shape[0]
    return np.eye(K) - U_J @ U_J.conj().T


def eigenproject(x, U_J: np.ndarray):
    """Project every snapshot (and every ground-truth component) onto the
    orthogonal complement of the jamming subspace."""
    proj = orthogonal_projector(U_J)
    data = _data(x)
    if data.shape[0] != proj.shape[0]:
        raise DimensionError(f"snapshots have {data.shape[0]} channels, subspace has {proj.shape[0]}")
    if isinstance(x, SnapshotMatrix):
        return x.map(lambda m: proj @ m)
    return proj @ data


def projected_energies(snap: SnapshotMatrix, proj: np.ndarray) -> tuple[float, float]:
    """(||P q||^2, ||P (s + n)||^2) summed over all slots."""
    return (_kernels.projected_energy(proj, snap.q),
            _kernels.projected_energy(proj, snap.s + snap.n))


def output_jsnr_empirical(projected: SnapshotMatrix) -> float:
    """Single-trial residual JSNR ``||P q||^2 / ||P (s + n)||^2`` (linear)."""
    num = float(np.sum(np.abs(projected.q) ** 2))
    den = float(np.sum(np.abs(projected.s + projected.n) ** 2))
    if den == 0.0:
        raise DegenerateConfigurationError("echo-plus-noise energy is zero after projection")
    return num / den


def range_profile(y, replica: BasebandSignal) -> RangeProfile:
    """Matched filter every channel, then sum |.|^2 across channels.

    Bin m holds the circular correlation at a delay of m slots.
    """
    data = np.atleast_2d(_data(y))
    if data.shape[1] != len(replica):
        raise DimensionError(f"replica has {len(replica)} slots, data has {data.shape[1]}")
    spec = np.fft.fft(data, axis=1) * np.conj(np.fft.fft(replica.samples))[None, :]
    corr = np.fft.ifft(spec, axis=1)
    per_radar = corr.real**2 + corr.imag**2
    return RangeProfile(per_radar.sum(axis=0), SPEED_OF_LIGHT * replica.slot_duration / 2.0, per_radar)


def write_profile_csv(fh, profile: RangeProfile, per_radar: bool = False, comment: str | None = None) -> None:
    if comment:
        fh.write(f"# {comment}\n")
    writer = csv.writer(fh, lineterminator="\n")
    head = ["bin_index", "range_m", "magnitude_db"]
    if per_radar:
        head += [f"radar_{k}_db" for k in range(profile.per_radar.shape[0])]
    writer.writerow(head)
    mag = profile.magnitude_db
    with np.errstate(divide="ignore"):
        radar_db = 10.0 * np.log10(profile.per_radar) if per_radar else None
    for m in range(profile.bins.shape[0]):
        row = [m, repr(float(m * profile.bin_resolution)), repr(float(mag[m]))]
        if per_radar:
            row += [repr(float(v)) for v in radar_db[:, m]]
        writer.writerow(row)
