import csv
import io
import json
from dataclasses import replace
from importlib import resources
from pathlib import Path

import jsonschema
import pytest

from fuzzy_voi import cli
from fuzzy_voi.report import num, to_text

GOLDEN = Path(__file__).parent / "golden"
GOLDEN_RUNS = {
    "neurologist_analyze.json": ["analyze", "neurologist.json", "--json"],
    "neurologist_evsi_pinned.json": ["evsi", "neurologist.json", "--json", "--override-threshold", "104.0102"],
    "quality_control_analyze.json": ["analyze", "quality_control.json", "--json"],
    "quality_control_compare.json": ["compare", "quality_control.json", "--json"],
}


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture(scope="module")
def schema():
    text = (resources.files("fuzzy_voi") / "data" / "report.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def problem_file(tmp_path, **changes):
    doc = json.loads((resources.files("fuzzy_voi") / "data" / "quality_control.json").read_text(encoding="utf-8"))
    doc.update(changes)
    path = tmp_path / "qc.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    return path


@pytest.mark.parametrize("golden", sorted(GOLDEN_RUNS))
def test_golden_reports(golden):
    code, out, _ = run(*GOLDEN_RUNS[golden])
    assert code == 0
    assert out == (GOLDEN / golden).read_text(encoding="utf-8")


def test_reports_repeat_byte_identical():
    first = run("analyze", "neurologist.json", "--json")[1]
    assert run("analyze", "neurologist.json", "--json")[1] == first


@pytest.mark.parametrize(
    "argv",
    [
        ["analyze", "neurologist.json", "--json"],
        ["analyze", "quality_control.json", "--json"],
        ["posterior", "neurologist.json", "--x", "80", "--json"],
        ["posterior", "quality_control.json", "--experiment", "P1", "--outcome", "pass", "--json"],
        ["evpi", "neurologist.json", "--json"],
        ["evsi", "quality_control.json", "--experiment", "P3", "--json"],
        ["compare", "neurologist.json", "--json"],
        ["check", "--trials", "5", "--json"],
    ],
)
def test_reports_match_schema(schema, argv):
    code, out, _ = run(*argv)
    assert code == 0
    report = json.loads(out)
    jsonschema.validate(report, schema)
    assert report["command"] == argv[0]


def test_analyze_prior_stage():
    report = json.loads(run("analyze", "neurologist.json", "--json")[1])
    assert report["prior_best"] == "operate"
    assert report["r_matrix"][0][1] == pytest.approx(0, abs=1e-9)
    assert report["caveat"]


def test_evsi_pinned_coefficients():
    report = json.loads(run("evsi", "neurologist.json", "--experiment", "score", "--override-threshold", "104.0102", "--json")[1])
    assert report["coefficients"]["operate"]["no_surgery"] == pytest.approx(0.1234, abs=5e-4)
    assert report["coefficients"]["do_not_operate"]["needs_surgery"] == pytest.approx(0.0136, abs=5e-4)
    assert "threshold-override" in report["diagnostics"]


def test_text_output():
    code, out, _ = run("evpi", "neurologist.json")
    assert code == 0
    assert "evpi: (0.04, 0) (0.12, 1) (0.2, 0)" in out
    assert "prior_best: operate" in out


def test_check_passes():
    code, out, err = run("check", "--trials", "20", "--seed", "42", "--json")
    report = json.loads(out)
    assert code == 0 and report["passed"] == 20 and report["failures"] == [] and err == ""


def test_plot_csv(tmp_path):
    code, out, _ = run("plot", "neurologist.json", "--out", str(tmp_path), "--json")
    assert code == 0
    files = json.loads(out)["files"]
    assert {Path(f).name for f in files} == {
        "eu_operate.csv",
        "eu_do_not_operate.csv",
        "perfect_info_value.csv",
        "evpi.csv",
        "evsi_score.csv",
    }
    rows = list(csv.reader((tmp_path / "evpi.csv").open()))
    assert rows[0] == ["series", "w", "mu"]
    body = rows[1:]
    assert len(body) == 3 + 64
    assert ["evpi", "0.12", "1"] in body
    ws = [float(r[1]) for r in body]
    assert ws == sorted(ws)


def test_number_format():
    assert num(1 / 3) == 0.3333333333
    assert num(float("inf")) is None
    assert num(-0.0) == 0.0 and str(num(-0.0)) == "0.0"


# -- exit codes --------------------------------------------------------------


def test_exit_parse_error(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{", encoding="utf-8")
    code, _, err = run("analyze", str(bad))
    assert code == 2 and "parse error" in err
    assert run("analyze", str(tmp_path / "absent.json"))[0] == 2
    with pytest.raises(SystemExit) as info:
        cli.run(["frobnicate"], io.StringIO(), io.StringIO())
    assert info.value.code == 2


def test_exit_invariant_error(tmp_path):
    code, _, err = run("analyze", str(problem_file(tmp_path, prior=[0.5, 0.4])))
    assert code == 3 and "prior" in err
    assert run("evsi", "quality_control.json")[0] == 3
    assert run("posterior", "neurologist.json")[0] == 3
    assert run("evsi", "quality_control.json", "--experiment", "P1", "--override-threshold", "1")[0] == 3
    assert run("check", "--trials", "0")[0] == 3


def test_exit_numeric_error(tmp_path):
    exps = [{"name": "E", "outcomes": ["seen", "never"], "likelihood": [[1, 0], [1, 0]]}]
    code, _, err = run("posterior", str(problem_file(tmp_path, experiments=exps)), "--outcome", "never")
    assert code == 4 and "impossible" in err


def test_exit_theorem_failure(monkeypatch):
    real = cli.verify_theorem51

    def broken(*args, **kwargs):
        return replace(real(*args, **kwargs), r_evsi_vs_zero=0.9)

    monkeypatch.setattr(cli, "verify_theorem51", broken)
    code, out, err = run("check", "--trials", "3", "--seed", "7")
    assert code == 5
    assert "failed seed 7" in err and "failed seed 9" in err
    assert "passed: 0" in to_text(json.loads(run("check", "--trials", "1", "--json")[1]))
