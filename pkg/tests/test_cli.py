"""Tests for the qentry40 command line and its report."""

import json

import pytest

from qentry40 import cli
from qentry40.report import VerifyReport, format_number
from qentry40.verify import SampleConfig, run_suite


@pytest.fixture(autouse=True)
def clean_env(monkeypatch, tmp_path):
    """No rc file and no precision override leak in from the user."""
    monkeypatch.delenv("QENTRY40_PRECISION", raising=False)
    monkeypatch.setenv("HOME", str(tmp_path))


def test_defaults() -> None:
    config = cli.parse_args([])
    assert config == cli.RunConfig()
    assert config.precision_bits == 256
    assert config.suite == "all"


def test_suite_seed_trials() -> None:
    config = cli.parse_args(["--suite", "watson", "--seed", "7", "--trials", "5"])
    assert (config.suite, config.seed, config.trials) == ("watson", 7, 5)


@pytest.mark.parametrize(
    "argv",
    [
        ["--precision", "16"],
        ["--precision", "many"],
        ["--suite", "lemma99"],
        ["--frobnicate"],
        ["--list", "--explain", "watson"],
        ["--explain", "lemma99"],
    ],
)
def test_usage_errors_exit_2(argv) -> None:
    with pytest.raises(SystemExit) as info:
        cli.parse_args(argv)
    assert info.value.code == 2


def test_environment_and_rc_file(monkeypatch, tmp_path) -> None:
    rc = tmp_path / "rc.json"
    rc.write_text(json.dumps({"seed": 9, "trials": 3, "precision_bits": 320}), encoding="utf-8")
    monkeypatch.setenv("QENTRY40_PRECISION", "192")
    config = cli.parse_args([], rc_path=str(rc))
    assert (config.seed, config.trials, config.precision_bits) == (9, 3, 192)
    assert cli.parse_args(["--precision", "128"], rc_path=str(rc)).precision_bits == 128


def test_list_and_explain(capsys) -> None:
    assert cli.run(cli.parse_args(["--list"])) == 0
    out = capsys.readouterr().out
    assert "watson: watson" in out
    assert out.splitlines()[0].startswith("lemmas: lemma1 eq24")
    assert cli.run(cli.parse_args(["--explain", "corollary8"])) == 0
    assert "corollary8 [corollary8]" in capsys.readouterr().out


def _json_run(tmp_path, name, *extra) -> tuple:
    path = tmp_path / name
    argv = ["--suite", "watson", "--trials", "2", "--precision", "128", "--format", "json", "--output", str(path)]
    status = cli.main(argv + list(extra))
    return status, path.read_text(encoding="utf-8")


def test_json_report_is_reproducible(tmp_path) -> None:
    status, first = _json_run(tmp_path, "a.json")
    _, second = _json_run(tmp_path, "b.json")
    assert status == 0
    assert first == second
    payload = json.loads(first)
    assert payload["meta"]["seed"] == 1
    assert payload["meta"]["precision"] == 128
    assert len(payload["meta"]["q_samples"]) == 2
    assert payload["summary"]["failures"] == 0
    record = payload["results"][0]
    assert {"id", "params", "lhs", "rhs", "residual", "tol", "pass"} <= set(record)
    assert isinstance(record["lhs"], str) and isinstance(record["residual"], str)


def test_fault_injection_exits_1(tmp_path) -> None:
    path = tmp_path / "fault.json"
    argv = ["--suite", "theorem4", "--trials", "1", "--precision", "128", "--format", "json", "--output", str(path)]
    assert cli.main(argv + ["--inject-fault"]) == 1
    payload = json.loads(path.read_text(encoding="utf-8"))
    failing = [r for r in payload["results"] if not r["pass"]]
    assert [r["id"] for r in failing] == ["theorem4"]


def test_unwritable_output_exits_2(tmp_path) -> None:
    target = tmp_path / "missing" / "report.json"
    config = cli.RunConfig(suite="watson", trials=1, precision_bits=128, format="json", output=str(target))
    assert cli.run(config) == 2


def _leaves(value):
    if isinstance(value, dict):
        for item in value.values():
            yield from _leaves(item)
    elif isinstance(value, list):
        for item in value:
            yield from _leaves(item)
    elif value is not None and not isinstance(value, bool):
        yield str(value)


@pytest.mark.parametrize("suite", ["watson", "theorem4"])
def test_text_and_json_share_numbers(suite) -> None:
    config = SampleConfig(trials=2, precision_bits=128)
    report = VerifyReport.build(config, suite, run_suite(config, suite))
    text = report.render_text()
    payload = json.loads(report.to_json())
    missing = [leaf for leaf in _leaves(payload) if leaf not in text]
    assert missing == []
    assert "failures 0" in text
    assert report.passed
    # diagnostics such as the condition number of Watson's products reach the text
    if suite == "watson":
        assert "condition=" in text


def test_number_formatting() -> None:
    assert format_number(None, 10) is None
    assert format_number(True, 10) == "true"
    assert format_number(7, 10) == "7"
    assert format_number(complex(1.5, 0.0), 10) == "1.5"
    assert format_number(complex(1.5, 2.0), 10).startswith("(1.5")
