import json

import pytest

from secalign import cli
from secalign.errors import ConfigError


def _write(tmp_path, payload, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


def _zf_payload():
    return {
        "scheme": "zero_force",
        "channel": {"M": 3, "J1": 2, "J2": 2, "seed": 1},
        "powers": [2.0**10, 2.0**20, 2.0**30, 2.0**40],
        "seed": 1,
    }


def test_config_validation():
    with pytest.raises(ConfigError):
        cli.ExperimentConfig(scheme="nope", channel_spec={"M": 2, "J1": 1, "J2": 1})
    with pytest.raises(ConfigError):
        cli.ExperimentConfig(
            scheme="zero_force",
            channel_spec={"M": 2, "J1": 1, "J2": 1},
            powers=(4.0, 4.0),
        )
    with pytest.raises(ConfigError):
        cli.ExperimentConfig(
            scheme="zero_force",
            channel_spec={"M": 2, "J1": 1, "J2": 1},
            powers=(4.0, 2.0),
        )
    with pytest.raises(ConfigError):
        cli.ExperimentConfig(
            scheme="zero_force",
            channel_spec={"M": 2, "J1": 1, "J2": 1},
            trials=0,
        )
    with pytest.raises(ConfigError):
        cli.ExperimentConfig(scheme="zero_force", channel_spec=None)
    cli.ExperimentConfig(scheme="multilevel", channel_spec=None)


def test_load_config_flag_overrides(tmp_path):
    path = _write(tmp_path, _zf_payload())
    cfg = cli.load_config(path, {"seed": 9, "scheme": "artificial_noise"})
    assert cfg.seed == 9
    assert cfg.scheme == "artificial_noise"
    cfg = cli.load_config(path, {"seed": None})
    assert cfg.seed == 1


def test_load_config_rejects_unknown_keys(tmp_path):
    path = _write(tmp_path, dict(_zf_payload(), typo=1))
    with pytest.raises(ConfigError):
        cli.load_config(path)


def test_run_bounds_grid_shape():
    text = cli.run_bounds((2,), (2,), (2,))
    lines = text.strip().split("\n")
    assert len(lines) == 2
    assert "2/3" in lines[1]
    text = cli.run_bounds((1, 2, 3), (1, 2), (1, 2, 3, 4))
    assert len(text.strip().split("\n")) == 1 + 3 * 2 * 4


def test_run_sweep_rows_and_summary(tmp_path):
    cfg = cli.load_config(_write(tmp_path, _zf_payload()))
    text = cli.run_sweep(cfg)
    lines = text.strip().split("\n")
    assert lines[0].split(",") == list(cli.SWEEP_COLUMNS)
    assert len(lines) == 1 + 4 + 1
    assert lines[-1].startswith("summary,")
    slope = float(lines[-1].split(",")[-2])
    assert abs(slope - 1.0) < 0.02


def test_sweep_byte_identical(tmp_path):
    cfg = cli.load_config(_write(tmp_path, _zf_payload()))
    assert cli.run_sweep(cfg) == cli.run_sweep(cfg)


def test_main_bounds_exit_zero(tmp_path, capsys):
    assert cli.main(["bounds"]) == 0
    out = capsys.readouterr().out
    assert len(out.strip().split("\n")) == 1 + 6 * 8 * 8


def test_main_sweep_to_file(tmp_path):
    path = _write(tmp_path, _zf_payload())
    out = tmp_path / "sweep.csv"
    assert cli.main(["sweep", "--config", path, "--out", str(out)]) == 0
    assert out.read_text().startswith(",".join(cli.SWEEP_COLUMNS))


def test_main_config_error_exit_two(tmp_path, capsys):
    payload = _zf_payload()
    payload["scheme"] = "nope"
    path = _write(tmp_path, payload)
    assert cli.main(["sweep", "--config", path]) == 2
    assert "config error" in capsys.readouterr().err


def test_main_precondition_exit_two(tmp_path, capsys):
    payload = _zf_payload()
    payload["channel"] = {"M": 2, "J1": 2, "J2": 2}
    path = _write(tmp_path, payload)
    assert cli.main(["sweep", "--config", path]) == 2
    assert "PreconditionFailed" in capsys.readouterr().err


def test_main_simulate_multilevel(tmp_path, capsys):
    payload = {
        "scheme": "multilevel",
        "powers": [2 * 3**30, 2 * 3**40],
        "eps": 0.001,
        "trials": 50,
        "seed": 2,
    }
    path = _write(tmp_path, payload)
    assert cli.main(["simulate", "--config", path]) == 0
    row = capsys.readouterr().out.strip().split("\n")[1].split(",")
    assert row[0] == "multilevel"
    assert row[10] == "50"


def test_main_simulate_rejects_rate_only_scheme(tmp_path, capsys):
    path = _write(tmp_path, _zf_payload())
    assert cli.main(["simulate", "--config", path]) == 2
    assert "simulate" in capsys.readouterr().err


def test_main_verify_suites(capsys):
    assert cli.main(["verify", "f3", "bounds"]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out and "FAIL" not in out
    assert cli.main(["verify", "bogus"]) == 2


def test_verify_full_registry_via_cli(capsys):
    assert cli.main(["verify"]) == 0
    out = capsys.readouterr().out
    assert "19/19 invariants passed" in out
