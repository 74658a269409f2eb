#!/usr/bin/env python3
"""
Tests for the saalschutz-l command line
"""

import io
import json

import pytest

from saalschutz_l.cli import EXIT_FAILED, EXIT_OK, EXIT_USAGE, main, parse_params
from saalschutz_l.errors import UsageError
from saalschutz_l.relation_catalog import load_catalog


def run_cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_group_info():
    code, out, _ = run_cli("group", "info")
    assert code == EXIT_OK
    assert out == "order=1920 sigma=48 coxeter=ok\n"


def test_group_cosets():
    code, out, _ = run_cli("group", "cosets")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert len(lines) == 6
    assert lines[0].startswith("I size=48 word=I")
    assert lines[4].startswith("V size=96 word=((123)A)^3")


def test_eval_sample_point():
    code, out, _ = run_cli("eval", "--params", "0.1,0.2,0.3,0.4,0.5,0.7,0.8")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["method"] == "barnes"
    assert payload["abs_error_estimate"] <= 1e-8
    assert payload["evaluator"] == "barnes"
    assert len(payload["value"]) == 2


def test_eval_complex_literals():
    # g = 1 + a + b + c + d - e - f
    code, out, _ = run_cli("eval", "--params", "0.3+0.1i,0.45,0.5-0.2i,0.6,0.25+0.05i,1.2,1.4-0.15i", "--method", "series")
    assert code == EXIT_OK
    assert json.loads(out)["evaluator"] == "series"


def test_eval_is_deterministic():
    argv = ("eval", "--params", "0.1,0.2,0.3,0.4,0.5,0.7,0.8", "--method", "series")
    assert run_cli(*argv)[1] == run_cli(*argv)[1]


@pytest.mark.parametrize(
    "argv",
    [
        ("eval", "--params", "1,2"),
        ("eval", "--params", "0.1,0.2,0.3,0.4,0.5,0.7,0.9"),
        ("eval", "--params", "0.1,0.2,0.3,0.4,1.0,0.2,0.8"),
        ("eval", "--params", "0.1,0.2,0.3,0.9,0.5,0.5,1.5", "--method", "7f6"),
        ("eval", "--params", "0.1,0.2,0.3,0.4,0.5,0.7,0.8", "--method", "trapezoid"),
        ("frobnicate",),
        ("group",),
        ("verify", "relations", "--elements", "some"),
        ("eval", "--params", "0.1,0.2,0.3,0.4,0.5,0.7,0.8", "--unknown-flag"),
    ],
)
def test_usage_errors_exit_2(argv):
    code, out, err = run_cli(*argv)
    assert code == EXIT_USAGE
    assert out == ""
    assert err.startswith("saalschutz-l: error:")


def test_parse_params():
    assert parse_params("1,2,3,4,5,6,0.5+1i") == [1, 2, 3, 4, 5, 6, 0.5 + 1j]
    with pytest.raises(UsageError):
        parse_params("1,2,3,4,5,6,bad")


def test_catalog_to_file(tmp_path):
    path = tmp_path / "catalog.json"
    code, out, _ = run_cli("catalog", "--format", "json", "--out", str(path))
    assert code == EXIT_OK
    assert out == ""
    assert len(load_catalog(path)) == 1920


def test_catalog_text_to_stdout():
    code, out, _ = run_cli("catalog", "--format", "text")
    assert code == EXIT_OK
    assert out.splitlines()[0] == "L[a,b,c,d;e;f,g] = L[a,b,c,d;e;f,g]"


def test_verify_classical_bailey_seed_7():
    code, out, _ = run_cli("verify", "classical", "--which", "bailey", "--seed", "7")
    assert code == EXIT_OK
    assert json.loads(out)["summary"]["failed"] == 0


def test_verify_relations_is_reproducible(tmp_path):
    argv = ("verify", "relations", "--samples", "1", "--elements", "reps", "--seed", "5")
    first = run_cli(*argv)
    second = run_cli(*argv)
    assert first[0] == EXIT_OK
    assert first[1] == second[1]
    code, out, _ = run_cli(*argv, "--out", str(tmp_path / "report.json"))
    assert code == EXIT_OK
    assert out == ""
    assert (tmp_path / "report.json").read_text(encoding="utf-8") == first[1]


def test_verify_relations_reports_failures():
    code, out, _ = run_cli("verify", "relations", "--samples", "1", "--elements", "reps", "--tol", "0")
    report = json.loads(out)
    assert code == EXIT_FAILED
    # the identity relation is exact even at zero tolerance
    assert report["checks"][0]["pass"] is True
    assert report["summary"]["failed"] >= 1
