import json
import subprocess
import sys

import jsonschema
import pytest

from otcert.cli import build_parser, main, resolve_config, run
from otcert.report import REPORT_SCHEMA


def _run(argv, capsys):
    code = main(argv)
    return code, capsys.readouterr().out


def _json(argv, capsys):
    code, out = _run(argv + ["--json"], capsys)
    doc = json.loads(out)
    jsonschema.validate(doc, REPORT_SCHEMA)
    return code, doc


def test_certify_inoue(capsys):
    code, doc = _json(["certify", "example", "inoue"], capsys)
    assert code == 0
    assert doc["status"] == "CertifiedNoSubvarieties"
    assert doc["certificate"]["evidence"]["shortcut"] == "prime degree"


def test_certify_ot6(capsys):
    code, doc = _json(["certify", "example", "ot6"], capsys)
    assert code == 1
    w = doc["certificate"]["witness"]
    assert w["exponents"] == [1, 0] and w["minpoly_degree"] == 3


def test_certify_heuristic(capsys):
    code, doc = _json(["certify", "example", "ot6-primitive", "--exponent-bound", "3"], capsys)
    assert code == 2
    assert doc["config"]["exponent_bound"] == 3


def test_analyze_rejects_totally_real(tmp_path, capsys):
    job = tmp_path / "real.txt"
    job.write_text("poly = -3 0 1\nunit = 2 1\n")
    code, doc = _json(["analyze", str(job)], capsys)
    assert code == 3
    assert any("t = 0" in e for e in doc["errors"])


def test_parse_error_exit(tmp_path, capsys):
    job = tmp_path / "bad.txt"
    job.write_text("poly = -2 0 0 1\nunit = -1 1\n")
    code, out = _run(["certify", str(job)], capsys)
    assert code == 3
    assert "line 2" in out


def test_missing_file(capsys):
    code, _ = _run(["analyze", "/nonexistent/job.txt"], capsys)
    assert code == 3


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        build_parser().parse_args(["certify"])
    assert exc.value.code == 3


def test_witness(capsys):
    code, doc = _json(["witness", "example", "ot6", "--exponents", "2 0", "--translation", "0 1 0 0 0 0"], capsys)
    assert code == 1
    assert doc["witness"]["exponents"] == [2, 0]
    assert doc["witness"]["identity_holds"]


def test_witness_primitive_unit_is_invalid(capsys):
    code, doc = _json(["witness", "example", "ot6", "--exponents", "0 1"], capsys)
    assert code == 3


def test_orbit_tsv(capsys):
    code, out = _run(["orbit", "example", "inoue", "--word-bound", "1"], capsys)
    assert code == 0
    rows = [l for l in out.splitlines() if not l.startswith("#")]
    assert rows[0].split("\t")[0] == "word"
    assert len(rows) == 1 + 9


def test_orbit_bad_point(capsys):
    code, _ = _run(["orbit", "example", "inoue", "--point=-1j;0"], capsys)
    assert code == 3


def test_example_listing(capsys):
    assert main(["example"]) == 0
    assert "inoue" in capsys.readouterr().out
    assert main(["example", "ot6"]) == 0
    assert "poly = -2 0 0 0 0 0 1" in capsys.readouterr().out


def test_override_precedence():
    args = build_parser().parse_args(["certify", "example", "inoue", "--seed", "5"])
    from otcert.jobspec import parse_jobspec

    spec = parse_jobspec("poly = -2 0 0 1\nunit = -1 1 0\nseed = 1\nheight_bound = 2\nexponent_bound = 7\n")
    env = {"OTCERT_SEED": "3", "OTCERT_HEIGHT_BOUND": "4"}
    cfg = resolve_config(args, spec, env)
    assert (cfg.seed, cfg.height_bound, cfg.exponent_bound) == (5, 4, 7)


def test_reports_are_deterministic():
    args = build_parser().parse_args(["certify", "example", "ot6"])
    a, _ = run(args, {})
    b, _ = run(args, {})
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def test_console_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "otcert.cli", "certify", "example", "inoue"], capture_output=True, text=True
    )
    assert out.returncode == 0
    assert "CertifiedNoSubvarieties" in out.stdout
