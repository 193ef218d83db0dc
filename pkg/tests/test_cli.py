import numpy as np
import pytest
import yaml

from q4nl.cli import main
from q4nl.io import read_checkpoint, read_series

BASE = {
    "grid": {"d": 1, "n": 64, "L": 20.0},
    "system": {"N": 1, "p": 2.0, "kappa": 1, "beta": [[1.0]], "lambda": [[0.0]]},
    "time": {"dt": 0.001, "t_end": 0.01, "record_every": 1},
    "initial": {"kind": "gaussian_packet", "seed": 3,
                "params": {"amplitude": 1.0, "sigma": 1.0}},
    "diagnostics": {"q_list": [4.0], "interaction": True,
                    "weight": {"kind": "quadratic"}},
    "scattering": {"checkpoint_times": [0.005]},
}


def write_config(tmp_path, overrides=None, name="run.yaml"):
    import copy
    raw = copy.deepcopy(BASE)
    for path, value in (overrides or {}).items():
        node = raw
        keys = path.split(".")
        for k in keys[:-1]:
            node = node.setdefault(k, {})
        node[keys[-1]] = value
    raw.setdefault("output", {})["directory"] = str(tmp_path / "out")
    cfg_path = tmp_path / name
    cfg_path.write_text(yaml.safe_dump(raw), encoding="utf-8")
    return cfg_path


def test_simulate_row_count_and_schema(tmp_path):
    cfg = write_config(tmp_path)
    assert main(["simulate", "--config", str(cfg)]) == 0
    header, data = read_series(tmp_path / "out" / "series.csv")
    assert data.shape[0] == 11  # t=0 included, 10 steps at record_every=1
    assert header[0] == "t" and "interaction_action" in header
    assert (tmp_path / "out" / "config.yaml").exists()
    _, ck = read_checkpoint(tmp_path / "out" / "checkpoint_0.005.q4nl")
    assert ck.t == pytest.approx(0.005)


def test_simulate_checkpoint_time_exact_despite_stride(tmp_path):
    cfg = write_config(tmp_path, {"time.record_every": 4,
                                  "scattering.checkpoint_times": [0.003]})
    assert main(["simulate", "--config", str(cfg)]) == 0
    _, ck = read_checkpoint(tmp_path / "out" / "checkpoint_0.003.q4nl")
    assert ck.t == pytest.approx(0.003, abs=1e-12)
    _, data = read_series(tmp_path / "out" / "series.csv")
    assert data.shape[0] == 4  # steps 0, 4, 8, final(10)


def test_fft_workers_env(monkeypatch):
    from q4nl.grid import fft_workers
    monkeypatch.setenv("Q4NL_THREADS", "1")
    assert fft_workers() == 1
    monkeypatch.setenv("Q4NL_THREADS", "not-a-number")
    assert fft_workers() >= 1


def test_simulate_zero_field_all_zero_series(tmp_path):
    cfg = write_config(tmp_path, {"initial.params": {"amplitude": 0.0}})
    assert main(["simulate", "--config", str(cfg)]) == 0
    header, data = read_series(tmp_path / "out" / "series.csv")
    physical = data[:, 1:]  # every column except t
    assert np.all(physical == 0.0)


def test_simulate_rerun_byte_identical(tmp_path):
    cfg = write_config(tmp_path)
    assert main(["simulate", "--config", str(cfg)]) == 0
    first = (tmp_path / "out" / "series.csv").read_bytes()
    assert main(["simulate", "--config", str(cfg)]) == 0
    assert (tmp_path / "out" / "series.csv").read_bytes() == first


def test_simulate_invalid_config_exit_1(tmp_path):
    cfg = write_config(tmp_path, {"grid.d": 7})
    assert main(["simulate", "--config", str(cfg)]) == 1


def test_simulate_boundary_contamination_exit_1(tmp_path):
    cfg = write_config(tmp_path, {"initial.params": {"amplitude": 1.0, "sigma": 9.0}})
    assert main(["simulate", "--config", str(cfg)]) == 1


def test_verify_free_flow_passes(tmp_path, capsys):
    cfg = write_config(tmp_path, {
        "system.beta": [[0.0]],
        "time.t_end": 0.008,
        "initial.params": {"amplitude": 1.0, "sigma": 1.2, "velocity": [0.5]},
    })
    code = main(["verify", "--config", str(cfg), "--refinements", "2"])
    out = capsys.readouterr().out
    assert code == 0 and "PASS" in out
    assert (tmp_path / "out" / "verify_residuals.csv").exists()


def test_verify_corrupted_sign_fails(tmp_path, capsys):
    cfg = write_config(tmp_path, {
        "time.t_end": 0.008,
        "initial.params": {"amplitude": 1.0, "sigma": 1.2, "velocity": [0.5]},
    })
    code = main(["verify", "--config", str(cfg), "--refinements", "2",
                 "--corrupt-rhs-sign"])
    out = capsys.readouterr().out
    assert code == 3 and "FAIL" in out


def test_scatter_gamma_zero_control(tmp_path, capsys):
    cfg = write_config(tmp_path, {
        "system.beta": [[0.0]],
        "scattering.checkpoint_times": [0.004, 0.008, 0.016],
    })
    code = main(["scatter", "--config", str(cfg)])
    out = capsys.readouterr().out
    assert code == 0
    max_entry = float(out.split("max_cauchy_entry=")[1].split()[0])
    assert max_entry < 1e-12
    assert (tmp_path / "out" / "scatter_report.csv").exists()


def test_scatter_needs_three_checkpoints(tmp_path):
    cfg = write_config(tmp_path, {"scattering.checkpoint_times": [0.01]})
    assert main(["scatter", "--config", str(cfg)]) == 1


def test_waveop_gamma_zero(tmp_path, capsys):
    cfg = write_config(tmp_path, {"system.beta": [[0.0]], "time.dt": 0.0025})
    code = main(["waveop", "--config", str(cfg), "--horizon", "0.02"])
    out = capsys.readouterr().out
    assert code == 0
    err = float(out.split("roundtrip_h2_error=")[1].split()[0])
    assert err < 1e-12


def test_check_exponents(capsys):
    assert main(["check", "--d", "3", "--p", "2", "--N", "1"]) == 0
    out = capsys.readouterr().out
    assert "scattering_ok=true" in out and "pd=6" in out


def test_check_admissibility(capsys):
    assert main(["check", "--q", "2", "--r", "inf", "--n", "4"]) == 0
    out = capsys.readouterr().out
    assert "admissible=false" in out


def test_check_without_args_is_usage_error():
    assert main(["check"]) == 1


def test_overrides(tmp_path):
    cfg = write_config(tmp_path)
    out2 = str(tmp_path / "out2")
    assert main(["simulate", "--config", str(cfg), "--dt", "0.002",
                 "--steps", "5", "--output", out2]) == 0
    header, data = read_series(tmp_path / "out2" / "series.csv")
    assert data.shape[0] == 6
    assert data[-1, 0] == pytest.approx(0.01)
