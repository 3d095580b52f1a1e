import json
import math

import numpy as np
import pytest

from phaseflow.cli import main
from phaseflow.emit import read_csv_table

DIMLESS = ["--set", "xi0=0", "--set", "eta0=0.1", "--set", "delta=2"]


def run(tmp_path, *args):
    return main([*args, "--out", str(tmp_path)])


def write_config(tmp_path, **values):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(values))
    return str(path)


def config_line(path):
    first = path.read_text().splitlines()[0]
    assert first.startswith("# config: ")
    return json.loads(first[len("# config: "):])


def test_packet_report(tmp_path, capsys):
    cfg = write_config(tmp_path, hbar=1, mass=1, alpha0_re=0, alpha0_im=0.5, p0=1, x0=0, q=5, t_count=3, t_stop=2)
    assert run(tmp_path, "packet", "--config", cfg) == 0
    out = capsys.readouterr().out
    assert "t_cl = 5" in out and "L = 1" in out and "eps0 = 0" in out
    columns, rows = read_csv_table(tmp_path / "packet.csv")
    assert columns[:2] == ["t", "tau"]
    assert rows[1][0] == 1.0 and rows[1][4:6] == pytest.approx([0.25, 0.25])
    assert config_line(tmp_path / "packet.csv")["q"] == 5


def test_packet_moving_away_annotation(tmp_path, capsys):
    cfg = write_config(tmp_path, alpha0_re=0, alpha0_im=0.5, p0=-1, x0=0, q=5)
    assert run(tmp_path, "packet", "--config", cfg) == 0
    assert "moving away" in capsys.readouterr().out


@pytest.mark.parametrize("args", [
    ["packet"],
    ["packet", "--set", "xi0=0", "--set", "eta0=0", "--set", "eps0=0", "--set", "delta=1", "--set", "q=1"],
    ["packet", "--set", "xi0=0"],
    ["packet", "--set", "xi0=0", "--set", "eta0=0", "--set", "eps0=0", "--set", "delta=1", "--set", "bogus=1"],
    ["flow", *DIMLESS, "--set", "eps0=-4", "--set", "tau_count=0"],
    ["flow", *DIMLESS, "--set", "eps0=-4", "--set", "tau_start=1", "--set", "tau_stop=0"],
    ["flow", *DIMLESS, "--set", "eps0=-4", "--strict-scenario"],
    ["montecarlo", "--n", "0"],
    ["packet", "--set", "xi0=0", "--set", "eta0=0", "--set", "eps0=0", "--set", "delta=1", "--set", "L=-1"],
])
def test_configuration_errors_exit_2(tmp_path, args, capsys):
    assert run(tmp_path, *args) == 2
    assert "phaseflow:" in capsys.readouterr().err


def test_missing_config_file(tmp_path):
    assert run(tmp_path, "packet", "--config", str(tmp_path / "nope.json")) == 2


def test_bad_subcommand_exits_2(tmp_path):
    with pytest.raises(SystemExit) as exc:
        run(tmp_path, "nonsense")
    assert exc.value.code == 2


def test_flow_negative_intervals(tmp_path):
    assert run(tmp_path, "flow", *DIMLESS, "--set", "eps0=-4") == 0
    summary = json.loads((tmp_path / "flow_summary.json").read_text())
    intervals = summary["negative_intervals"]
    assert intervals and intervals[0]["start"] < 20.0  # centre reaches delta at tau = 20
    assert all(i["min_total_rate"] < 0 for i in intervals)
    columns, rows = read_csv_table(tmp_path / "flow.csv")
    assert columns == ["tau", "pi", "shift_rate", "shear_rate", "total_rate", "negative_flag"]
    assert len(rows) == 2001 and rows[0][0] == 0.0 and rows[-1][0] == 4.0
    lines = (tmp_path / "flow.csv").read_text().splitlines()
    assert any(line.startswith("# packet: xi0=0.0 eta0=0.1 eps0=-4.0 delta=2.0") for line in lines)


def test_flow_positive_eps_has_no_intervals(tmp_path):
    assert run(tmp_path, "flow", *DIMLESS, "--set", "eps0=1") == 0
    summary = json.loads((tmp_path / "flow_summary.json").read_text())
    assert summary["negative_intervals"] == []


def test_flow_physical_time_grid(tmp_path):
    cfg = write_config(tmp_path, hbar=2, mass=3, alpha0_re=-0.5, alpha0_im=0.5, p0=0.2, x0=0, q=1,
                       t_start=0, t_stop=1.5, t_count=4)
    assert run(tmp_path, "flow", "--config", cfg) == 0
    _, rows = read_csv_table(tmp_path / "flow.csv")
    # tau = t hbar / (m L^2) with L^2 = (hbar/2) Im a / |a|^2 = 1
    assert [r[0] for r in rows] == pytest.approx([0.0, 1 / 3, 2 / 3, 1.0])


def test_csv_and_json_values_identical(tmp_path):
    assert run(tmp_path / "c", "flow", *DIMLESS, "--set", "eps0=-2", "--set", "tau_count=50") == 0
    assert run(tmp_path / "j", "flow", *DIMLESS, "--set", "eps0=-2", "--set", "tau_count=50", "--format", "json") == 0
    _, csv_rows = read_csv_table(tmp_path / "c" / "flow.csv")
    doc = json.loads((tmp_path / "j" / "flow.json").read_text())
    assert doc["columns"][0] == "tau" and doc["config"]["format"] == "json"
    assert np.array_equal(np.array(csv_rows), np.array(doc["rows"], dtype=float))


def test_figures(tmp_path):
    assert run(tmp_path, "figures") == 0
    for name in ("fig1_contour.csv", "fig1_axis.csv", "fig2_theta.csv", "fig3_snapshots.csv",
                 "fig4_angles.json", "fig5_region.csv"):
        assert (tmp_path / name).exists()
        if name.endswith(".csv"):
            assert config_line(tmp_path / name)["eps0"] == -2.0

    _, theta = read_csv_table(tmp_path / "fig2_theta.csv")
    taus = np.array([r[0] for r in theta])
    assert 2.0 not in taus  # tau = -eps0
    assert np.all(np.diff([r[1] for r in theta]) < 0)

    _, snaps = read_csv_table(tmp_path / "fig3_snapshots.csv")
    snaps = np.array(snaps)
    middle = snaps[snaps[:, 0] == 1]
    assert middle[:, 2].mean() == pytest.approx(0.0 + 0.1 * 1.0, abs=1e-12)
    assert middle[:, 3].mean() == pytest.approx(0.1, abs=1e-12)

    _, region = read_csv_table(tmp_path / "fig5_region.csv")
    flags = np.array([r[2] for r in region])
    assert 0 < flags.mean() < 1

    fig4 = json.loads((tmp_path / "fig4_angles.json").read_text())
    assert fig4["theta_bar"] == pytest.approx(math.pi - fig4["theta"])
    assert math.tan(fig4["phi"]) == pytest.approx(0.1 / 2.0)


def test_montecarlo_default_and_small(tmp_path):
    assert run(tmp_path / "a", "montecarlo") == 0
    columns, rows = read_csv_table(tmp_path / "a" / "montecarlo.csv")
    assert columns == ["tau", "pi_cl", "stderr", "pi_quantum", "zscore"]
    assert len(rows) == 20 and max(r[4] for r in rows) < 6
    assert run(tmp_path / "b", "montecarlo", "--n", "10") == 0


def test_montecarlo_reproducible(tmp_path):
    assert run(tmp_path / "a", "montecarlo", "--n", "20000", "--seed", "77") == 0
    assert run(tmp_path / "b", "montecarlo", "--n", "20000", "--seed", "77") == 0
    assert (tmp_path / "a" / "montecarlo.csv").read_bytes() == (tmp_path / "b" / "montecarlo.csv").read_bytes()
    assert run(tmp_path / "c", "montecarlo", "--n", "20000", "--seed", "78") == 0
    assert (tmp_path / "a" / "montecarlo.csv").read_bytes() != (tmp_path / "c" / "montecarlo.csv").read_bytes()


def test_montecarlo_failure_exit_code(tmp_path, monkeypatch):
    from phaseflow import cli
    monkeypatch.setattr(cli, "ZSCORE_LIMIT", 1e-9)
    assert run(tmp_path, "montecarlo", "--n", "1000") == 1


def test_wigner_grid(tmp_path):
    assert run(tmp_path, "wigner-grid", *DIMLESS, "--set", "eps0=-2", "--set", "grid_n=5") == 0
    lines = (tmp_path / "wigner_grid.csv").read_text().splitlines()
    assert lines[0].startswith("# config: ")
    assert any("convention" in ln for ln in lines if ln.startswith("#"))
    header = [ln for ln in lines if ln.startswith("# xi,eta,omega")]
    assert header == ["# xi,eta,omega tau=0.0 eps0=-2.0 xi0=0.0 eta0=0.1"]
    rows = np.array([[float(v) for v in ln.split(",")] for ln in lines if not ln.startswith("#")])
    assert rows.shape == (25, 3)
    assert np.all(np.diff(rows[:, 0]) >= 0)
    assert rows[12, 2] == pytest.approx(1 / math.pi)
    for ln in lines:
        if not ln.startswith("#"):
            for v in ln.split(","):
                assert float(f"{float(v):.17g}") == float(v)
