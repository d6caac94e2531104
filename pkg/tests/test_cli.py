"""Config handling, orchestration determinism, and the command surface."""

import json
from fractions import Fraction
from pathlib import Path

import pytest

from kolmlab.cli import ExperimentConfig, emit_report, main, run_experiment
from kolmlab.errors import ConfigError
from kolmlab.reports import ASSERTED_EXACT, BoundReport, from_record

BASE_CONFIG = {
    "budgets": {"L": 12, "S": 1000},
    "seed": 11,
    "registry": [
        {"variant": "uniform", "alphabet_size": 2},
        {"variant": "iid", "probs": ["1/16", "15/16"]},
        {"variant": "lemma5", "l": 3},
    ],
    "experiments": ["eq1"],
    "outputs": {"structured": "reports.jsonl", "tabular": "reports.csv"},
    "params": {"eq1_pairs": 10, "eq1_horizon": 3},
}


def write_config(tmp_path, **overrides):
    cfg = json.loads(json.dumps(BASE_CONFIG))
    for key, value in overrides.items():
        if isinstance(value, dict):
            cfg.setdefault(key, {}).update(value)
        else:
            cfg[key] = value
    path = tmp_path / "config.json"
    path.write_text(json.dumps(cfg))
    return path


def test_config_requires_experiments(tmp_path):
    path = write_config(tmp_path, experiments=[])
    with pytest.raises(ConfigError):
        ExperimentConfig.from_file(path)


def test_config_rejects_unknown_selector(tmp_path):
    path = write_config(tmp_path, experiments=["eq1", "nope"])
    with pytest.raises(ConfigError):
        ExperimentConfig.from_file(path)


def test_config_rejects_bad_json(tmp_path):
    path = tmp_path / "config.json"
    path.write_text("{not json")
    with pytest.raises(ConfigError):
        ExperimentConfig.from_file(path)


def test_eq1_experiment_counts(tmp_path):
    config = ExperimentConfig.from_file(write_config(tmp_path))
    code, reports = run_experiment(config, selectors="verify", out_dir=tmp_path)
    assert code == 0
    assert len(reports) == 50  # 10 pairs x 5 distance kinds
    assert all(r.verdict == ASSERTED_EXACT and r.passed for r in reports)


def test_identical_runs_are_byte_identical(tmp_path):
    config = ExperimentConfig.from_file(
        write_config(tmp_path, experiments=["eq1", "eq4", "lemma8"])
    )
    out1, out2 = tmp_path / "a", tmp_path / "b"
    run_experiment(config, selectors="verify", out_dir=out1)
    run_experiment(config, selectors="verify", out_dir=out2)
    for name in ("reports.jsonl", "reports.csv"):
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()


def test_emit_empty_tabular_has_header_only(tmp_path):
    path = tmp_path / "empty.csv"
    emit_report([], "tabular", path)
    lines = path.read_text().strip().splitlines()
    assert len(lines) == 1 and lines[0].startswith("name,")


def test_identity_slack_renders_as_zero(tmp_path):
    rep = BoundReport(
        "identity", Fraction(1, 3), {"other": Fraction(1, 3)}, ASSERTED_EXACT, relation="=="
    )
    path = tmp_path / "one.csv"
    emit_report([rep], "tabular", path)
    row = path.read_text().splitlines()[1].split(",")
    assert row[3] == "0"


def test_structured_round_trip(tmp_path):
    config = ExperimentConfig.from_file(write_config(tmp_path))
    _, reports = run_experiment(config, selectors="verify", out_dir=tmp_path)
    parsed = [
        from_record(json.loads(line))
        for line in (tmp_path / "reports.jsonl").read_text().splitlines()
    ]
    assert parsed == reports


def test_unknown_format_rejected(tmp_path):
    with pytest.raises(ConfigError):
        emit_report([], "fancy", tmp_path / "x")


def test_main_verify_and_exit_codes(tmp_path, capsys):
    path = write_config(tmp_path)
    code = main(["verify", "--config", str(path), "--out-dir", str(tmp_path / "out")])
    assert code == 0
    assert "PASS" in capsys.readouterr().out
    assert (tmp_path / "out" / "reports.jsonl").exists()


def test_main_config_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{}")
    assert main(["verify", "--config", str(bad)]) == 2
    assert "config error" in capsys.readouterr().err


def test_main_enumerate_with_cache(tmp_path, capsys):
    cache = tmp_path / "cache"
    args = [
        "enumerate",
        "--kind",
        "PREFIX",
        "--budget-L",
        "9",
        "--budget-S",
        "100",
        "--cache-dir",
        str(cache),
    ]
    assert main(args) == 0
    first = capsys.readouterr().out
    assert "enumerated" in first and "kraft=" in first
    assert main(args) == 0
    assert "loaded" in capsys.readouterr().out


def test_main_report_runs_measured_only(tmp_path, capsys):
    path = write_config(
        tmp_path,
        experiments=["t1", "lemma5"],
        params={"theorem_triples": 2, "lemma5_ls": [2]},
    )
    code = main(["report", "--config", str(path), "--out-dir", str(tmp_path / "out")])
    assert code == 0
    out = capsys.readouterr().out
    assert "MeasuredOnly" in out and "AssertedExact" not in out


def test_main_construct_writes_tables(tmp_path, capsys):
    path = write_config(
        tmp_path,
        experiments=["eq1"],
        params={"construct_depth": 3, "d_window": [-2, 2]},
    )
    code = main(["construct", "--config", str(path), "--out-dir", str(tmp_path / "out")])
    assert code == 0
    table = (tmp_path / "out" / "nu_tables.jsonl").read_text().splitlines()
    assert len(table) == 2**4 - 1
    assert json.loads(table[0])["z"] == ""
