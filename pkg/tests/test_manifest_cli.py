import json
import subprocess
import sys
from pathlib import Path

import pytest
from hypothesis import given

from almostcx import Form, Scalar
from almostcx.cli import main
from almostcx.errors import ParseError, RangeError, RationalError
from almostcx.fixtures import f2, kodaira_thurston, phi_t, top_form, torus
from almostcx.manifest import (
    dump_manifest, manifest_for, manifest_from_dict, manifest_to_dict, parse_manifest,
    parse_rational,
)
from almostcx.report import Report, emit_report, run_suite

from strategies import beltramis, forms

ROOT = Path(__file__).resolve().parent.parent
MANIFESTS = ROOT / "manifests"

F2_DICT = {"n": 3, "dtheta": [{"gamma": "1", "terms": [
    {"word": ["2bar", "3bar"], "re": "1", "im": "0"}]}]}


def write(tmp_path, obj, name="m.json"):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj), encoding="utf-8")
    return str(p)


# manifest parsing

def test_torus_manifest():
    m = manifest_from_dict({"n": 2})
    assert m.spec().n == 2 and not any(m.spec().dtheta)


def test_f2_manifest_entry():
    assert manifest_from_dict(F2_DICT).spec().dtheta == f2().dtheta


def test_index_out_of_range():
    obj = {"n": 3, "forms": [{"name": "a", "terms": [{"word": ["4bar"], "re": "1"}]}]}
    with pytest.raises(RangeError):
        manifest_from_dict(obj)


@pytest.mark.parametrize("obj,err", [
    ({"n": 5}, RangeError),
    ({"n": 2, "seed": -1}, RangeError),
    ({"n": 2, "max_degree": 9}, RangeError),
    ({"n": 2, "dtheta": [{"gamma": "1bar", "terms": []}]}, RangeError),
    ({"n": 2, "colour": 1}, ParseError),
    ({"n": "2"}, ParseError),
    ({"n": 2, "dtheta": [{"gamma": "1", "terms": [{"word": ["1"], "re": "1"}]}]}, ParseError),
    ({"n": 2, "beltrami": [{"name": "p", "entries": [[{"re": "1"}]]}]}, ParseError),
    ({"n": 2, "forms": [{"name": "a", "terms": [{"word": ["1"], "re": "1/0"}]}]},
     RationalError),
    ({"n": 2, "forms": [{"name": "a", "terms": [{"word": ["1"], "re": "one"}]}]},
     RationalError),
    ({"n": 2, "forms": [{"name": "a", "terms": [{"word": ["1"], "re": 0.5}]}]},
     RationalError),
])
def test_invalid_manifests(obj, err):
    with pytest.raises(err):
        manifest_from_dict(obj)


def test_rationals():
    assert parse_rational("-3/6", "x") == Scalar(-1, 0).re / 2
    assert parse_rational(" 7 ", "x") == 7


def test_parse_error_reports_line(tmp_path):
    path = write(tmp_path, '{\n  "n": 2,\n  "dtheta": [,]\n}\n')
    with pytest.raises(ParseError) as exc:
        parse_manifest(path)
    assert exc.value.line == 3


@given(beltramis(2), forms(2))
def test_round_trip(phi, a):
    m = manifest_for(kodaira_thurston(), {"phi": phi}, {"a": a}, seed=5, max_degree=3)
    back = manifest_from_dict(json.loads(dump_manifest(m)))
    assert back.spec().dtheta == m.spec().dtheta
    assert back.beltrami["phi"].entries == phi.entries
    assert back.forms["a"] == a
    assert (back.seed, back.max_degree, back.name) == (5, 3, m.name)
    assert manifest_to_dict(back) == manifest_to_dict(m)


@pytest.mark.parametrize("path", sorted(MANIFESTS.glob("*.json")), ids=lambda p: p.stem)
def test_shipped_manifests_parse(path):
    m = parse_manifest(path)
    assert m.name == path.stem


# reports

def test_empty_report_json():
    out = json.loads(emit_report(Report(0, ("validate",))))
    assert out["records"] == [] and out["summary"] == {"pass": 0, "fail": 0, "skip": 0}


def test_torus_all_suites_pass():
    rep = run_suite(manifest_for(torus(2)), "all", seed=1)
    assert {r.status for r in rep.records} == {"pass"}


def test_failing_validate_report_has_residual(tmp_path):
    rep = run_suite(parse_manifest(MANIFESTS / "broken.json"), "validate")
    assert not rep.passed
    out = json.loads(emit_report(rep, "json", tmp_path / "r.json"))
    bad = next(r for r in out["records"] if r["name"] == "validate.d_squared")
    assert bad["status"] == "fail"
    assert bad["residual"] == {"form": [{"word": ["1", "2", "2bar"], "re": "1", "im": "0"}]}
    assert json.loads((tmp_path / "r.json").read_text()) == out


def test_identity_suite_reports_singular_input(tmp_path):
    m = manifest_for(f2(), {"sing": phi_t(t=1)})
    rep = run_suite(m, "cohomology", n_random=1)
    assert any(r.name == "input.beltrami[sing]" and r.status == "skip" for r in rep.records)


# command line

def run(argv, capsys):
    code = main(argv)
    return code, capsys.readouterr()


def test_cli_validate(capsys):
    code, out = run(["--manifest", str(MANIFESTS / "F2.json"), "validate"], capsys)
    assert code == 0
    code, out = run(["--manifest", str(MANIFESTS / "broken.json"), "validate"], capsys)
    assert code == 1 and "θ1∧θ2∧θ2bar" in out.out


def test_cli_invalid_input_exit_2(tmp_path, capsys):
    bad = write(tmp_path, {"n": 3, "forms": [{"name": "a", "terms": [{"word": ["4bar"]}]}]})
    code, out = run(["--manifest", bad, "validate"], capsys)
    assert code == 2 and "invalid input" in out.err
    code, _ = run(["--manifest", str(tmp_path / "missing.json"), "validate"], capsys)
    assert code == 2
    code, out = run(["--manifest", str(MANIFESTS / "broken.json"), "cohomology"], capsys)
    assert code == 2 and json.loads(out.err.splitlines()[-1])["residual"]


def test_cli_cohomology(capsys):
    code, out = run(["--manifest", str(MANIFESTS / "F2.json"), "cohomology", "--p", "3",
                     "--q", "0"], capsys)
    assert code == 0 and "dim H_mubar = 0, dim H_Dol = 0" in out.out
    code, out = run(["--manifest", str(MANIFESTS / "F0_n2.json"), "cohomology"], capsys)
    assert code == 0 and "  1/1     2/2     1/1" in out.out


def test_cli_deform(capsys):
    m = str(MANIFESTS / "F2.json")
    code, out = run(["--manifest", m, "deform", "--check", "mc", "--phi", "phi_t"], capsys)
    assert code == 0
    code, out = run(["--manifest", m, "deform", "--check", "n0-closed", "--phi", "phi_t",
                     "--form", "Omega"], capsys)
    assert code == 0 and json.loads(out.out) == {
        "agree": True, "check": "n0-closed", "criterion": True, "native": True}
    code, out = run(["--manifest", m, "deform", "--check", "n0-class", "--phi", "phi_t",
                     "--form", "Omega"], capsys)
    assert code == 1 and "mu_bar_closed" in out.out
    code, _ = run(["--manifest", m, "deform", "--check", "mc", "--phi", "nope"], capsys)
    assert code == 2


def test_cli_sign_witness(capsys):
    m = str(MANIFESTS / "sign_witness.json")
    code, out = run(["--manifest", m, "deform", "--check", "n0-closed", "--phi",
                     "phi", "--form", "Omega"], capsys)
    assert code == 0 and json.loads(out.out)["criterion"] is True


def test_cli_check_and_report(tmp_path, capsys):
    m = str(MANIFESTS / "F0_n2.json")
    code, out = run(["--manifest", m, "check", "--suite", "cohomology", "--format", "json"],
                    capsys)
    assert code == 0 and json.loads(out.out)["summary"]["fail"] == 0
    code, out = run(["--manifest", m, "check", "--suite", "validate"], capsys)
    assert code == 0 and out.out.startswith("manifest F0_n2")
    dest = tmp_path / "report.json"
    code, out = run(["--manifest", m, "report", "--out", str(dest)], capsys)
    assert code == 0 and json.loads(dest.read_text())["schema"] == "almostcx-report/1"
    code, _ = run(["--manifest", str(MANIFESTS / "broken.json"), "check", "--suite",
                   "validate"], capsys)
    assert code == 1


def test_console_script():
    res = subprocess.run([sys.executable, "-m", "almostcx.cli", "--manifest",
                          str(MANIFESTS / "KT.json"), "validate"], capture_output=True, text=True)
    assert res.returncode == 0, res.stderr
