import json

import pytest
from jsonschema import ValidationError

from app.cli import load_finite, main
from app.config import ROOT_DIR
from app.errors import ConfigError
from app.models.groups import preset_group
from app.models.report import CheckResult, Report
from app.models.run_config import RunConfig, load_sweep, parse_lambda, parse_q
from app.services import finite_backend as fb


def test_parse_lambda():
    assert parse_lambda("1") == 1
    assert parse_lambda("-1") == -1
    assert parse_lambda("0.3+0.7i") == 0.3 + 0.7j
    with pytest.raises(ConfigError):
        parse_lambda("seven")


def test_parse_q():
    assert parse_q("exact") is None
    assert parse_q("0.5") == 0.5
    for bad in ("0", "1.5", "q"):
        with pytest.raises(ConfigError):
            parse_q(bad)


def test_run_config_defaults():
    config = RunConfig("pseries", backend="suq2:3/2")
    assert config.backend_kind == "suq2"
    assert config.twice_cutoff == 3
    assert config.exact and config.mode == "exact"
    assert config.to_dict()["cutoff"] == "3/2"


@pytest.mark.parametrize("kwargs", [
    {"command": "plot"},
    {"command": "axioms", "backend": "lie:SU2"},
    {"command": "axioms", "backend": "finite:"},
    {"command": "axioms", "tol": -1.0},
    {"command": "axioms", "log_level": "LOUD"},
    {"command": "sweep"},
    {"command": "pseries", "backend": "finite:S3"},
    {"command": "pseries", "backend": "suq2:5"},
    {"command": "axioms", "backend": "suq2:1/3"},
])
def test_run_config_rejects(kwargs):
    with pytest.raises(ConfigError):
        RunConfig(**kwargs)


def test_numeric_context_from_config():
    config = RunConfig("pseries", backend="suq2:1", q="0.25", tol=1e-6)
    ctx = config.numeric_context()
    assert ctx.q_value == 0.25 and ctx.tolerance == 1e-6
    assert config.mode == "numeric"


def test_load_sweep(tmp_path):
    records = load_sweep(ROOT_DIR / "data" / "sweeps" / "example.json")
    assert len(records) == 4
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"records": [{"lambda": 1}]}))
    with pytest.raises(ConfigError):
        load_sweep(bad)


def test_report_schema():
    report = Report("axioms", backend="finite:S3")
    report.add(CheckResult.from_flag("ok", True, identity="x = x", samples=1))
    data = report.to_dict()
    assert data["passed"] and "created_at" not in data
    assert Report.from_dict(data).checks[0].name == "ok"
    data["checks"][0]["status"] = "maybe"
    with pytest.raises(ValidationError):
        Report.from_dict(data)


def test_report_keeps_discrepancies():
    report = Report("verify", backend="suq2:1/2")
    report.add([
        CheckResult.from_flag("ok", True),
        CheckResult("measured", "discrepancy", detail="κ=1, κ'=1: lhs = q^-2·rhs"),
    ])
    data = report.to_dict()
    assert data["passed"]
    assert [c.name for c in report.discrepancies] == ["measured"]
    assert Report.from_dict(data).checks[1].status == "discrepancy"
    assert report.summary_lines()[1].startswith("DISCREPANCY")


def test_load_finite_descriptor_file(tmp_path):
    path = tmp_path / "z3.json"
    path.write_text(json.dumps(fb.fun_qgroup(preset_group("Z3")).to_dict()))
    group, descriptors = load_finite(str(path))
    assert group is None and len(descriptors) == 1
    with pytest.raises(ConfigError):
        load_finite("missing.json")


def test_main_axioms_finite(tmp_path):
    out = tmp_path / "report.json"
    assert main(["axioms", "--backend", "finite:S3", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["passed"] and data["command"] == "axioms"


def test_main_induce(tmp_path):
    out = tmp_path / "induce.json"
    code = main(["induce", "--backend", "finite:S3", "--subgroup", "(0 1)", "--out", str(out)])
    assert code == 0
    data = json.loads(out.read_text())
    assert data["passed"]
    assert data["results"]["induced"]["dimension"] == 3


def test_main_config_errors(tmp_path):
    assert main(["axioms", "--backend", "lie:SU2"]) == 2
    assert main(["induce", "--backend", "finite:S3", "--subgroup", "(0 5)"]) == 2
    data = fb.fun_qgroup(preset_group("Z3")).to_dict()
    del data["antipode"]
    path = tmp_path / "corrupt.json"
    path.write_text(json.dumps(data))
    assert main(["axioms", "--backend", f"finite:{path}"]) == 2


def test_main_pseries_exact(tmp_path):
    out = tmp_path / "pseries.json"
    assert main(["pseries", "--backend", "suq2:1/2", "--mu", "1", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["results"]["dimension"] == 2


def test_main_sweep(tmp_path):
    sweep = tmp_path / "sweep.json"
    sweep.write_text(json.dumps({"records": [
        {"mu": 1, "lambda": 0, "cutoff": "1/2", "mode": "exact"},
        {"mu": -1, "lambda": 0, "cutoff": "1/2"},
    ]}))
    out = tmp_path / "sweep_report.json"
    assert main(["sweep", "--sweep-file", str(sweep), "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert len(data["results"]["records"]) == 2
    assert all(check["name"].startswith("record[") for check in data["checks"])
