import pytest

from rassjam.analysis import Experiment
from rassjam.scenario import default_scenario

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def scenario():
    return default_scenario()


@pytest.fixture(scope="session")
def experiment(scenario):
    return Experiment.prepare(scenario)


@pytest.fixture
def base_doc():
    return {
        "radars": [[0, 0, 0], [10e3, 0, 0], [0, 10e3, 0], [10e3, 10e3, 0]],
        "target": [2e3, 3e3, 15.3e3],
        "jammer": [2e3, 3e3, 15e3],
        "array": {"n": 16, "d_m": 0.03},
        "waveform": {"type": "lfm", "bandwidth_hz": 10e6, "duration_s": 10e-6, "carrier_hz": 5e9},
        "slots": 128,
        "target_snr_db": 20.0,
        "input_jsnr_per_element_db": 31.0,
        "noise_variance": 0.01,
        "p": 0.5,
        "seed": 7,
    }


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
