import math

import numpy as np
import pytest

from pendulum_pid.cli import main
from pendulum_pid.cli.config import SCENARIOS, parse_number, read_config_file
from pendulum_pid.cli.csvio import HEADER, read_trajectory, trajectory_metrics
from pendulum_pid.control import PidGains
from pendulum_pid.simulate import SimConfig, run


def read_kv(path):
    return read_config_file(path)


def read_report(path):
    return dict(line.split(" = ", 1) for line in path.read_text().splitlines())


def test_parse_number():
    assert parse_number("0.5") == 0.5
    assert parse_number("pi/6") == math.pi / 6
    assert parse_number("-pi/4") == -math.pi / 4
    assert parse_number("2pi/3") == 2 * math.pi / 3
    with pytest.raises(ValueError):
        parse_number("banana")
    with pytest.raises(ValueError):
        parse_number("inf")


@pytest.mark.parametrize("name", ["fig2", "fig3", "fig4", "fig5", "fig6", "fig7"])
def test_every_scenario_runs(tmp_path, name):
    out = tmp_path / f"{name}.csv"
    assert main(["simulate", "--scenario", name, "--out", str(out)]) == 0
    data = read_trajectory(out)
    assert data.shape == (15000, 7)
    manifest = read_kv(out.with_suffix(".manifest"))
    gains = SCENARIOS[name]
    assert float(manifest["k_p"]) == gains["k_p"]
    assert float(manifest["theta0"]) == gains.get("theta0", math.pi / 4)
    assert out.with_suffix(".svg").read_text().startswith("<svg")


def test_csv_schema_exact(tmp_path):
    out = tmp_path / "fig4.csv"
    main(["simulate", "--scenario", "fig4", "--out", str(out)])
    raw = out.read_bytes()
    assert raw.startswith(HEADER.encode() + b"\n")
    assert raw.endswith(b"\n") and b"\r" not in raw
    tr = run(SimConfig(gains=PidGains(-200, -20, -100)))
    assert np.array_equal(read_trajectory(out), tr.data)


def test_fig4_settles_fig2_oscillates(tmp_path):
    main(["simulate", "--scenario", "fig4", "--out", str(tmp_path / "a.csv")])
    main(["simulate", "--scenario", "fig2", "--out", str(tmp_path / "b.csv")])
    a = read_trajectory(tmp_path / "a.csv")[:, 3]
    b = read_trajectory(tmp_path / "b.csv")[:, 3]
    assert abs(a[-1]) < 0.02
    assert np.max(np.abs(b[-5000:])) > 0.05


def test_zero_duration_is_usage_error(tmp_path, capsys):
    assert main(["simulate", "--duration", "0", "--out", str(tmp_path / "x.csv")]) == 1
    assert "duration" in capsys.readouterr().err
    assert not (tmp_path / "x.csv").exists()


def test_missing_config_is_io_error(tmp_path):
    assert main(["simulate", "--config", str(tmp_path / "nope.cfg"), "--out", str(tmp_path / "x.csv")]) == 2


def test_bad_config_key(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("k_p = -200\nwarp_drive = 1\n")
    assert main(["simulate", "--config", str(cfg), "--out", str(tmp_path / "x.csv")]) == 1
    assert "warp_drive" in capsys.readouterr().err


def test_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# PD run\nscenario = fig3\nduration = 2   # short\ntheta0 = pi/6\n")
    out = tmp_path / "x.csv"
    assert main(["simulate", "--config", str(cfg), "--dt", "0.002", "--out", str(out)]) == 0
    manifest = read_kv(out.with_suffix(".manifest"))
    assert manifest["scenario"] == "fig3"
    assert float(manifest["k_d"]) == -100.0
    assert float(manifest["theta0"]) == math.pi / 6
    assert read_trajectory(out).shape[0] == 1000


def test_manifest_replay_byte_identical(tmp_path):
    first = tmp_path / "first.csv"
    main(["simulate", "--scenario", "fig7", "--theta0", "pi/6", "--out", str(first)])
    second = tmp_path / "second.csv"
    assert main(["simulate", "--config", str(first.with_suffix(".manifest")), "--out", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()


def test_diverged_run_warns_and_succeeds(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("cart_mass = 1e-300\nball_mass = 1e-300\nk_p = 1e4\nduration = 1\n"
                   "saturation_low = -1e308\nsaturation_high = 1e308\n")
    out = tmp_path / "x.csv"
    assert main(["simulate", "--config", str(cfg), "--out", str(out)]) == 0
    assert "warning" in capsys.readouterr().err
    manifest = read_kv(out.with_suffix(".manifest"))
    assert manifest["diverged"] == "true"
    assert read_trajectory(out).shape[0] == int(manifest["samples"]) < 1000


def test_tune_writes_report_and_tuned_run(tmp_path):
    out = tmp_path / "tune"
    assert main(["tune", "--metric", "rmse", "--seed", "-300,0,-100", "--duration", "3",
                 "--max-evals", "40", "--theta0", "pi/6", "--out", str(out)]) == 0
    report = read_report(out / "tune_report.txt")
    assert float(report["best_cost"]) <= float(report["seed_cost"])
    assert int(report["evaluation_count"]) <= 44
    history = np.loadtxt(out / "cost_history.csv", delimiter=",", skiprows=1)
    assert np.all(np.diff(history[:, 1]) <= 0)
    assert history[-1, 1] == float(report["best_cost"])
    manifest = read_kv(out / "tuned.manifest")
    assert float(manifest["theta0"]) == math.pi / 6
    assert float(manifest["k_p"]) == float(report["best_k_p"])
    assert read_trajectory(out / "tuned.csv").shape == (3000, 7)


def test_tune_rejects_two_component_seed(tmp_path, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["tune", "--seed", "-300,0", "--out", str(tmp_path)])
    assert exc.value.code == 1
    assert "usage" in capsys.readouterr().err


def test_compare_self_has_zero_deltas(tmp_path):
    csv = tmp_path / "a.csv"
    main(["simulate", "--scenario", "fig4", "--out", str(csv)])
    report_path = tmp_path / "cmp.txt"
    assert main(["compare", str(csv), str(csv), "--out", str(report_path)]) == 0
    report = read_report(report_path)
    deltas = [float(v) for k, v in report.items() if k.startswith("delta_")]
    assert len(deltas) == 4 and all(d == 0.0 for d in deltas)
    assert report_path.with_suffix(".svg").exists()


def test_compare_fig4_vs_fig3(tmp_path):
    a, b = tmp_path / "fig4.csv", tmp_path / "fig3.csv"
    main(["simulate", "--scenario", "fig4", "--out", str(a)])
    main(["simulate", "--scenario", "fig3", "--out", str(b)])
    report_path = tmp_path / "cmp.txt"
    main(["compare", str(a), str(b), "--out", str(report_path)])
    report = read_report(report_path)
    assert float(report["b_final_third_mean_abs_theta"]) > float(report["a_final_third_mean_abs_theta"])


@pytest.mark.parametrize(
    "content, needle",
    [
        ("", "empty"),
        (HEADER + "\n", "no data"),
        ("t,x\n1,2\n", "line 1"),
        (HEADER + "\n" + "0.001,0,0,0,0,0,0\n0.002,0,0,0\n", "line 3"),
        (HEADER + "\n" + "0.001,0,0,zero,0,0,0\n", "line 2"),
    ],
)
def test_compare_rejects_bad_csv(tmp_path, capsys, content, needle):
    bad = tmp_path / "bad.csv"
    bad.write_text(content)
    good = tmp_path / "good.csv"
    main(["simulate", "--scenario", "fig4", "--duration", "1", "--out", str(good)])
    assert main(["compare", str(bad), str(good), "--out", str(tmp_path / "r.txt")]) == 1
    assert needle in capsys.readouterr().err


def test_round_trip_metrics(tmp_path):
    csv = tmp_path / "fig5.csv"
    main(["simulate", "--scenario", "fig5", "--out", str(csv)])
    in_memory = trajectory_metrics(run(SimConfig(gains=PidGains(-308.08, -63.55, -94.96))).theta)
    parsed = trajectory_metrics(read_trajectory(csv)[:, 3])
    for key, value in in_memory.items():
        assert parsed[key] == pytest.approx(value, rel=1e-12, abs=1e-12)


def test_svg_is_well_formed_xml():
    import xml.etree.ElementTree as ET

    from pendulum_pid.cli.svg import line_chart

    doc = line_chart([("a", [0, 1, 2], [0.1, -0.2, 0.0]), ("b <&>", [0, 1], [3.0, 3.0])], title="t & t")
    root = ET.fromstring(doc)
    polylines = [el for el in root.iter() if el.tag.endswith("polyline")]
    assert len(polylines) == 2
    with pytest.raises(ValueError):
        line_chart([])
