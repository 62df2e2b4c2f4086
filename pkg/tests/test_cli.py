import json

import pytest

from pncalc.cli import main
from pncalc.errors import ParseError, SchemaError
from pncalc.models import Report, fixture_names, load_model, plan_for, run_checks

EXPECTED = {
    "manifold_symplectic_pass": 0,
    "manifold_nonpoisson_fail": 1,
    "heisenberg_algebra": 0,
    "cyclic_table_fail": 1,
    "heisenberg_lambda13": 0,
    "heisenberg_lambda12_fail": 1,
    "heisenberg_group": 0,
    "nonassociative_group_fail": 1,
    "group_pn_heisenberg13": 0,
    "group_pn_heisenberg12_fail": 1,
    "trivial_groupoid_pass": 0,
    "trivial_groupoid_fail": 1,
    "invalid_unknown_variable": 2,
    "invalid_empty": 2,
    "invalid_schema": 2,
}


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_every_fixture_is_covered():
    assert sorted(EXPECTED) == fixture_names()


@pytest.mark.parametrize("name", sorted(EXPECTED))
def test_exit_codes(capsys, name):
    code, out, err = run(capsys, "check", "--model", f"fixture:{name}", "--oracle-samples", "3")
    assert code == EXPECTED[name]
    if code == 2:
        assert err.startswith("pncalc: input error:") and out == ""
    else:
        assert out.rstrip().endswith("OVERALL: " + ("PASS" if code == 0 else "FAIL"))


def test_json_is_deterministic(capsys, tmp_path):
    args = ("check", "--model", "fixture:group_pn_heisenberg13", "--format", "json", "--seed", "7")
    _, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args, "--report", str(tmp_path / "r.json"))
    assert first == second
    assert (tmp_path / "r.json").read_text() == first
    data = json.loads(first)
    assert data["plan"]["seed"] == 7 and "timings" not in data


def test_report_round_trip():
    model = load_model("fixture:heisenberg_lambda12_fail")
    rep = run_checks(model, plan_for(model))
    again = Report.from_json(rep.to_json())
    assert again == rep and again.to_json() == rep.to_json()
    assert not again.passed


def test_text_shows_witness(capsys):
    _, out, _ = run(capsys, "check", "--model", "fixture:heisenberg_lambda12_fail")
    line = next(l for l in out.splitlines() if l.strip().startswith("schouten:"))
    assert "FAIL" in line and "witness:" in line


def test_seed_precedence(capsys, monkeypatch):
    monkeypatch.setenv("PNCALC_SEED", "99")
    _, out, _ = run(capsys, "check", "--model", "fixture:manifold_symplectic_pass", "--format", "json")
    assert json.loads(out)["plan"]["seed"] == 99
    _, out, _ = run(capsys, "check", "--model", "fixture:manifold_symplectic_pass",
                    "--format", "json", "--seed", "5")
    assert json.loads(out)["plan"]["seed"] == 5
    monkeypatch.setenv("PNCALC_SEED", "not-a-number")
    code, _, err = run(capsys, "check", "--model", "fixture:manifold_symplectic_pass")
    assert code == 2 and "input error" in err


def test_skip_oracle_and_timings(capsys):
    _, out, _ = run(capsys, "check", "--model", "fixture:manifold_symplectic_pass",
                    "--format", "json", "--skip-oracle", "--timings")
    data = json.loads(out)
    assert data["plan"] is None
    assert all(c["oracle"] is None for c in data["checks"])
    assert data["timings"]["total_seconds"] >= 0


def test_parse_error_names_field(tmp_path):
    with pytest.raises(ParseError) as err:
        load_model("fixture:invalid_unknown_variable")
    assert "/bivector/x1,x2" in str(err.value) and "x9" in str(err.value)


@pytest.mark.parametrize("text", ["", "   ", "[]", "42"])
def test_empty_or_non_object_is_schema_error(tmp_path, text):
    path = tmp_path / "m.json"
    path.write_text(text)
    with pytest.raises(SchemaError) as err:
        load_model(path)
    # RFC 6901: the whole document is the empty pointer
    assert err.value.pointer == ""
    assert "at /:" in str(err.value)


def test_bad_json_and_missing_file(capsys, tmp_path):
    path = tmp_path / "m.json"
    path.write_text("{not json")
    assert run(capsys, "check", "--model", str(path))[0] == 2
    assert run(capsys, "check", "--model", str(tmp_path / "absent.json"))[0] == 2
    assert run(capsys, "check", "--model", "fixture:no_such_fixture")[0] == 2


def test_group_axiom_violation_is_input_error(capsys, tmp_path):
    doc = {
        "kind": "group_pn",
        "group": {"mu": ["x1 + y1 + 1"], "inverse": ["-x1"]},
        "lambda": [["0"]],
        "n": "identity",
    }
    path = tmp_path / "g.json"
    path.write_text(json.dumps(doc))
    code, _, err = run(capsys, "check", "--model", str(path))
    assert code == 2 and "mu(x, 0) = x" in err


def test_model_oracle_override(tmp_path):
    doc = {"kind": "manifold_pn", "chart": ["x1", "x2"], "bivector": {"x1,x2": "1"},
           "endomorphism": "identity", "oracle": {"count": 4, "tolerance": "1/1000"}}
    path = tmp_path / "m.json"
    path.write_text(json.dumps(doc))
    plan = plan_for(load_model(path))
    assert plan.count == 4 and plan.tolerance == pytest.approx(0.001)
    assert plan_for(load_model(path), count=9).count == 9


def test_fixtures_subcommand(capsys):
    code, out, _ = run(capsys, "fixtures")
    assert code == 0 and out.split() == fixture_names()
