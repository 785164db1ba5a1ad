import io

import numpy as np
import pytest

from rassjam.errors import DimensionError
from rassjam.jammer import JammingGains, traditional_gains
from rassjam.receiver import (SnapshotMatrix, align_jamming, carrier_phase, echo_matrix, fractional_shift,
                              read_snapshot_csv, synthesize, write_snapshot_csv)
from rassjam.rng import make_rng
from rassjam.scenario import solve_geometry
from rassjam.waveform import BasebandSignal, gen_noise_jamming


def test_integer_fractional_shift_is_a_roll():
    x = make_rng(0).standard_normal(32) + 0j
    np.testing.assert_allclose(fractional_shift(x, 5 * 0.25, 0.25), np.roll(x, 5), atol=1e-12)


def test_carrier_phase_removes_whole_cycles():
    fc = 5e9
    np.testing.assert_allclose(carrier_phase([3.0 / fc, 3.25 / fc], fc), [1.0, -1j], atol=1e-6)


def test_noiseless_full_array_jamming_is_rank_one(scenario):
    geo = solve_geometry(scenario)
    L = scenario.num_slots
    gains = traditional_gains(geo, scenario.jammer_array, scenario.wavelength, L)
    r = gen_noise_jamming(1.0, L, make_rng(1))
    snap = synthesize(scenario, geo, gains, r, make_rng(2), noise_variance=0.0, echo_amplitude=0.0)
    sv = np.linalg.svd(snap.data, compute_uv=False)
    assert sv[1] / sv[0] < 1e-12
    assert not snap.n.any() and not snap.s.any()


def test_components_add_up(scenario):
    geo = solve_geometry(scenario)
    L = scenario.num_slots
    gains = traditional_gains(geo, scenario.jammer_array, scenario.wavelength, L)
    r = gen_noise_jamming(2.0, L, make_rng(3))
    snap = synthesize(scenario, geo, gains, r, make_rng(4))
    np.testing.assert_array_equal(snap.data, snap.s + snap.q + snap.n)
    np.testing.assert_array_equal(snap.q, align_jamming(gains.gains, r.samples, geo, scenario.waveform.carrier))
    np.testing.assert_array_equal(snap.s, echo_matrix(scenario, geo))
    # linear in each part
    proj = make_rng(5).standard_normal((4, 4))
    m = snap.map(lambda x: proj @ x)
    np.testing.assert_allclose(m.data, m.s + m.q + m.n, atol=1e-9)


def test_echo_power_matches_snr(scenario):
    geo = solve_geometry(scenario)
    s = echo_matrix(scenario, geo)
    per_snapshot = np.mean(np.sum(np.abs(s) ** 2, axis=0))
    noise = scenario.num_radars * scenario.noise_variance
    assert 10 * np.log10(per_snapshot / noise) == pytest.approx(20.0, abs=1e-9)


def test_dimension_checks(scenario):
    geo = solve_geometry(scenario)
    bad = JammingGains(np.ones((4, 10)), "traditional")
    r = BasebandSignal(np.ones(scenario.num_slots, complex), 1.0)
    with pytest.raises(DimensionError):
        synthesize(scenario, geo, bad, r, make_rng(0))
    with pytest.raises(DimensionError):
        SnapshotMatrix.from_parts(np.zeros((2, 3)), np.zeros((2, 3)), np.zeros((3, 2)))


def test_snapshot_csv_round_trip():
    x = make_rng(6).standard_normal((3, 7)) + 1j * make_rng(7).standard_normal((3, 7))
    buf = io.StringIO()
    write_snapshot_csv(buf, x, comment="seed=1")
    buf.seek(0)
    assert buf.readline() == "# seed=1\n"
    buf.seek(0)
    np.testing.assert_array_equal(read_snapshot_csv(buf), x)
