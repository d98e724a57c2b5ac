import json

import pytest

from qha.cli import main, run_suite
from qha.report import NormReport, emit_report, load_report
from qha.suites import SuiteConfig


def test_empty_report_serializes():
    rep = NormReport()
    assert rep.passed
    assert json.loads(rep.to_json()) == {"entries": [], "metadata": {}}


def test_report_round_trip(tmp_path):
    rep = NormReport(metadata={"k": 1})
    rep.add("a", 1e-14, 1e-12, "identity")
    rep.add("b", 0.5, (0.0, 1.0))
    rep.add("c", 3.0)
    rep.add("d", 2.0, 1.0)
    loaded = load_report(emit_report(rep, tmp_path / "r.json"))
    assert [e.to_dict() for e in loaded.entries] == [e.to_dict() for e in rep.entries]
    assert not loaded.passed and [e.name for e in loaded.failures()] == ["d"]


def test_csv_has_one_row_per_entry(tmp_path):
    rep = NormReport()
    for k in range(4):
        rep.add(f"e{k}", k, 10)
    text = emit_report(rep, tmp_path / "r.csv", "csv").read_text()
    assert len(text.strip().splitlines()) == 5


def test_inconsistent_verdict_rejected():
    data = {"entries": [{"name": "x", "value": 2.0, "tolerance": 1.0, "pass": True}]}
    with pytest.raises(ValueError):
        NormReport.from_dict(data)


def test_nan_and_none_fail():
    rep = NormReport()
    rep.add("nan", float("nan"), 1.0)
    assert not rep.passed and rep["nan"].value is None


def test_unwritable_path_names_the_path(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    with pytest.raises(OSError, match="file"):
        emit_report(NormReport(), blocker / "sub" / "r.json")
    with pytest.raises(ValueError):
        emit_report(NormReport(), tmp_path / "r.xml", "xml")


def test_cli_finite_suite(tmp_path, capsys):
    assert main(["run", "--suite", "finite", "--N", "5", "--out", str(tmp_path)]) == 0
    rep = load_report(tmp_path / "qha_report.json")
    assert rep.passed and all(e.name.startswith("finite.N5_") for e in rep.entries)
    assert "checks passed" in capsys.readouterr().err


def test_cli_small_grid_enables_naive_checks(tmp_path):
    assert main(["run", "--suite", "fourier", "--n", "8", "--L", "6", "--out", str(tmp_path)]) == 0
    names = [e.name for e in load_report(tmp_path / "qha_report.json").entries]
    assert any("naive" in n for n in names)


def test_cli_output_env_fallback(tmp_path, monkeypatch):
    monkeypatch.setenv("QHA_OUT", str(tmp_path))
    assert main(["verify-finite", "--N", "3", "--format", "csv"]) == 0
    assert (tmp_path / "qha_report.csv").exists()


def test_cli_stdout_when_no_destination(monkeypatch, capsys):
    monkeypatch.delenv("QHA_OUT", raising=False)
    assert main(["verify-finite", "--N", "3"]) == 0
    assert json.loads(capsys.readouterr().out)["entries"]


def test_cli_tolerance_override_can_fail_a_check(tmp_path):
    args = ["run", "--suite", "finite", "--N", "3", "--out", str(tmp_path),
            "--tol", "finite.N3_ccr=-1"]
    assert main(args) == 1


@pytest.mark.parametrize("argv", [["run", "--N", "4"], ["run", "--suite", "bogus"],
                                  ["run", "--n", "3"], ["run", "--tol", "novalue"]])
def test_cli_usage_errors(argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_cli_io_error_exit_code(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert main(["verify-finite", "--N", "3", "--out", str(blocker / "x")]) == 2


def test_results_independent_of_worker_count():
    base = dict(n=32, L=12.0, N=(3,), suites=("algebra", "finite", "quantize"))
    one = run_suite(SuiteConfig(workers=1, **base))
    two = run_suite(SuiteConfig(workers=2, **base))
    assert [(e.name, e.value) for e in one.entries] == [(e.name, e.value) for e in two.entries]
