import numpy as np
import pytest

from rassjam.analysis import RASS, TRADITIONAL
from rassjam.experiments import TRADITIONAL_MIN_PTM_DB, masking_rate, run_profile


def test_traditional_profile_shows_target(experiment):
    run = run_profile(experiment, TRADITIONAL)
    assert run.p == 1.0
    assert run.target_is_peak
    assert run.profile.peak_to_median_db() >= TRADITIONAL_MIN_PTM_DB
    # target sits just beyond the jammer range cell
    assert 0 < run.target_bin < experiment.scenario.num_slots // 2


def test_rass_masks_target(experiment):
    rate, ptm = masking_rate(experiment, runs=30)
    assert rate >= 0.9
    assert ptm.shape == (30,)
    assert np.all(ptm < run_profile(experiment, TRADITIONAL).profile.peak_to_median_db())


def test_rass_at_p_one_is_traditional(experiment):
    a = run_profile(experiment, RASS, 3, p=1.0)
    b = run_profile(experiment, TRADITIONAL, 3)
    assert a.profile.bins.tobytes() == b.profile.bins.tobytes()


def test_unknown_pattern(experiment):
    with pytest.raises(ValueError):
        run_profile(experiment, "sidelobe")
