import json

import numpy as np
import pytest

from rassjam.cli import main, parse_n_set, parse_p_grid
from rassjam.receiver import read_snapshot_csv


def _files(d):
    return {p.name: p.read_bytes() for p in sorted(d.iterdir())}


@pytest.fixture
def scenario_file(tmp_path, base_doc):
    def make(**patch):
        doc = dict(base_doc, **patch)
        path = tmp_path / f"sc_{len(list(tmp_path.glob('sc_*')))}.json"
        path.write_text(json.dumps(doc))
        return path
    return make


def test_grid_parsers():
    assert parse_p_grid("0.1:0.9:0.1") == pytest.approx([0.1 * i for i in range(1, 10)])
    assert parse_p_grid("0.5:0.5:0.1") == [0.5]
    assert parse_n_set("16,32") == [16, 32]


@pytest.mark.parametrize("argv", [
    ["profile", "--trials", "0"],
    ["sweep-p", "--p-grid", "0.9:0.1:0.1"],
    ["sweep-p", "--p-grid", "0:1.5:0.5"],
    ["sweep-n", "--n-set", "16,-4"],
    ["validate", "--prop1-tol", "-0.1"],
    ["baseline", "--workers", "0"],
    ["frobnicate"],
])
def test_usage_errors(tmp_path, argv):
    with pytest.raises(SystemExit) as exc:
        code = main(argv + ["--out", str(tmp_path)])
        raise SystemExit(code)
    assert exc.value.code == 2


def test_bad_scenarios_exit_2(tmp_path, scenario_file, capsys):
    assert main(["profile", "--scenario", str(scenario_file(p=1.2)), "--out", str(tmp_path / "o")]) == 2
    assert "p" in capsys.readouterr().err
    one_radar = scenario_file(radars=[[0, 0, 0]])
    assert main(["validate", "--scenario", str(one_radar), "--out", str(tmp_path / "o")]) == 2
    missing = tmp_path / "nope.json"
    assert main(["profile", "--scenario", str(missing), "--out", str(tmp_path / "o")]) == 4


def test_unwritable_output_exits_4(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert main(["profile", "--out", str(blocker / "sub")]) == 4


def test_profile_outputs(tmp_path):
    out = tmp_path / "o"
    assert main(["profile", "--out", str(out), "--per-radar", "--dump-snapshots"]) == 0
    assert set(_files(out)) == {"profile_traditional.csv", "profile_rass.csv", "profile_summary.json",
                                "snapshots_traditional.csv", "snapshots_rass.csv"}
    lines = (out / "profile_rass.csv").read_text().splitlines()
    assert lines[0].startswith("# tool=rassjam") and "seed=" in lines[0] and "scenario_sha256=" in lines[0]
    assert lines[1].startswith("bin_index,range_m,magnitude_db,radar_0_db")
    assert len(lines) == 2 + 128
    summary = json.loads((out / "profile_summary.json").read_text())
    assert summary["patterns"]["traditional"]["target_is_peak"]
    with open(out / "snapshots_rass.csv") as fh:
        assert read_snapshot_csv(fh).shape == (4, 128)


def test_p_one_rass_equals_traditional(tmp_path, scenario_file):
    sc = scenario_file(p=1.0)
    assert main(["profile", "--scenario", str(sc), "--out", str(tmp_path / "o")]) == 0
    trad = (tmp_path / "o" / "profile_traditional.csv").read_bytes()
    rass = (tmp_path / "o" / "profile_rass.csv").read_bytes()
    assert trad == rass


def test_sweeps_small(tmp_path):
    out = tmp_path / "o"
    assert main(["sweep-p", "--trials", "8", "--p-grid", "0.3:0.7:0.2", "--out", str(out)]) == 0
    doc = json.loads((out / "jsnr_vs_p.json").read_text())
    assert [r["p"] for r in doc["reports"]] == pytest.approx([0.3, 0.5, 0.7])
    assert main(["sweep-n", "--trials", "4", "--n-set", "16", "--out", str(out)]) == 0
    header = (out / "jsnr_vs_n.csv").read_text().splitlines()[1]
    assert "gap" not in header  # no gap column with a single N


def test_seed_override_changes_output(tmp_path):
    main(["profile", "--pattern", "rass", "--out", str(tmp_path / "a")])
    main(["profile", "--pattern", "rass", "--seed", "99", "--out", str(tmp_path / "b")])
    a = np.loadtxt(tmp_path / "a" / "profile_rass.csv", delimiter=",", skiprows=2)
    b = np.loadtxt(tmp_path / "b" / "profile_rass.csv", delimiter=",", skiprows=2)
    assert not np.array_equal(a[:, 2], b[:, 2])
