import numpy as np
import pytest

from rassjam import _kernels
from rassjam.rng import hash64, make_rng, trial_streams

numba_impl = _kernels.numba_impl
numpy_impl = _kernels.numpy_impl


def _data(seed, K=4, L=64, N=16):
    rng = make_rng(seed)
    x = rng.standard_normal((K, L)) + 1j * rng.standard_normal((K, L))
    bits = (rng.random((N, L)) < 0.5).astype(np.float64)
    phase = np.exp(1j * rng.uniform(0, 2 * np.pi, (K, N)))
    P = np.eye(K) - np.outer(x[:, 0], x[:, 0].conj()) / np.vdot(x[:, 0], x[:, 0])
    return x, bits, phase, P


@pytest.mark.parametrize("seed", range(5))
def test_backends_agree(seed):
    x, bits, phase, P = _data(seed)
    np.testing.assert_array_equal(numba_impl["switch_gains"](bits, phase), numpy_impl["switch_gains"](bits, phase))
    np.testing.assert_allclose(numba_impl["sample_covariance"](x), numpy_impl["sample_covariance"](x), rtol=1e-13)
    assert numba_impl["projected_energy"](P, x) == pytest.approx(numpy_impl["projected_energy"](P, x), rel=1e-12)


def test_numpy_kernels_against_direct_formulas():
    x, bits, phase, P = _data(9)
    np.testing.assert_allclose(numpy_impl["switch_gains"](bits, phase), phase @ bits, atol=1e-12)
    np.testing.assert_allclose(numpy_impl["projected_energy"](P, x), np.linalg.norm(P @ x) ** 2, rtol=1e-12)


def test_backend_selection():
    assert _kernels.select_backend("numpy") == "numpy"
    assert _kernels.select_backend("numba") == "numba"
    with pytest.raises(ValueError):
        _kernels.select_backend("fortran")
    assert _kernels.BACKEND in ("numba", "numpy")


def test_seed_derivation():
    assert hash64(1, 2) == hash64(1, 2)
    assert hash64(1, 2) != hash64(2, 1)
    assert 0 <= hash64(2**64 - 1) < 2**64
    a, b = trial_streams(5, 0), trial_streams(5, 0)
    assert a.switch.random() == b.switch.random()
    c = trial_streams(5, 0)
    assert c.switch.random() != c.jamming.random()
