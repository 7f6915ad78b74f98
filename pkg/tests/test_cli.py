"""End-to-end command-line interface tests."""
import json

import pytest

from ncihf.cli import main


def test_validate_passes(tmp_path):
    rc = main(["validate", "--out", str(tmp_path), "--grid-n", "256"])
    assert rc == 0
    rep = json.loads((tmp_path / "validate_report.json").read_text())
    assert rep["all_pass"] is True
    assert rep["n_checks"] >= 12
    assert all({"name", "value", "tol", "pass"} <= set(c) for c in rep["checks"])


def test_validate_perturbed_fails(tmp_path):
    rc = main(["validate", "--out", str(tmp_path), "--grid-n", "128", "--perturb", "1e-6"])
    assert rc == 1


def test_usage_error():
    assert main(["breather"]) == 2  # --out is required


def test_bad_config_rejected(tmp_path):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"p": 0, "q": 1, "m": 0.5, "x0_in_K": 1.0}))
    rc = main(["jacobi", "--config", str(cfg), "--out", str(tmp_path / "run")])
    assert rc == 2


@pytest.fixture(scope="module")
def tw_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("tw")
    rc = main([
        "traveling-wave", "--out", str(out), "--t-end", "2.0",
        "--tol", "1e-10", "--grid-n", "256", "--snapshots", "33",
    ])
    assert rc == 0
    return out


def test_manifest_lists_existing_outputs(tw_run):
    manifest = json.loads((tw_run / "manifest.json").read_text())
    for name in manifest["outputs"]:
        assert (tw_run / name).exists(), name
    assert manifest["version"]
    assert manifest["config"]["t_end"] == 2.0
    assert "integrate_s" in manifest["timings"]


def test_traveling_wave_runs_to_end(tw_run):
    manifest = json.loads((tw_run / "manifest.json").read_text())
    assert manifest["results"]["termination"] == "time-limit"
    assert manifest["results"]["max_residual"] < 1e-7


def test_traveling_wave_complex_speed_event(tmp_path):
    rc = main([
        "traveling-wave", "--out", str(tmp_path), "--t-end", "5.0",
        "--rho-re", "0.0", "--rho-im", "1.0", "--grid-n", "128", "--snapshots", "65",
    ])
    assert rc == 0
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["results"]["termination"] == "admissibility-event"
    assert manifest["results"]["event_time"] == pytest.approx(1.854, abs=2e-3)


def test_determinism(tmp_path):
    args = ["traveling-wave", "--t-end", "1.0", "--grid-n", "128", "--snapshots", "17"]
    rc1 = main(args + ["--out", str(tmp_path / "r1")])
    rc2 = main(args + ["--out", str(tmp_path / "r2")])
    assert rc1 == rc2 == 0
    for name in ("trajectory.csv", "initial_state.json"):
        assert (tmp_path / "r1" / name).read_bytes() == (tmp_path / "r2" / name).read_bytes()


def test_residual_command_recertifies(tw_run, tmp_path):
    rc = main([
        "residual", "--run-dir", str(tw_run), "--times", "0,1.0",
        "--grid-n", "256", "--out", str(tmp_path),
    ])
    assert rc == 0
    reports = json.loads((tmp_path / "residual_report.json").read_text())
    assert len(reports) == 2
    for rep in reports:
        assert set(rep) == {"time", "grid_n", "method", "max_residual", "excluded"}
        assert rep["max_residual"] < 1e-6


def test_residual_threshold_failure(tw_run, tmp_path):
    rc = main([
        "residual", "--run-dir", str(tw_run), "--times", "0",
        "--grid-n", "256", "--threshold", "1e-18", "--out", str(tmp_path),
    ])
    assert rc == 1


def test_fields_csv_schema(tw_run):
    files = sorted(tw_run.glob("fields_t*.csv"))
    assert files
    header = files[0].read_text().splitlines()[0].split(",")
    assert header[0] == "x"
    for col in ("u1_re", "u3_im", "v2_re", "usq_re", "eps_u", "eps_v"):
        assert col in header


def test_jacobi_reproduces_breather_initial_state(tmp_path):
    """The generic constructor with p=q=1, m=1/2, x0=K emits bit-identical
    initial data to the dedicated breather command."""
    rc1 = main(["breather", "--out", str(tmp_path / "b"), "--t-end", "0.5",
                "--grid-n", "128", "--snapshots", "9"])
    rc2 = main(["jacobi", "--p", "1", "--q", "1", "--m", "0.5", "--x0-in-K", "1.0",
                "--real-mode", "--out", str(tmp_path / "j"), "--t-end", "0.5",
                "--grid-n", "128", "--snapshots", "9"])
    assert rc1 == rc2 == 0
    b = (tmp_path / "b" / "initial_state.json").read_bytes()
    j = (tmp_path / "j" / "initial_state.json").read_bytes()
    assert b == j
