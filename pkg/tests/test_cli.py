import json
import os
import subprocess
import sys

import pytest

from fi_involutions.cli import main


@pytest.fixture
def run(data_dir, capsys):
    def _run(*args):
        argv = [os.path.join(data_dir, a) if a.endswith(".json") else a for a in args]
        code = main(argv)
        out = capsys.readouterr()
        return code, out.out, out.err
    return _run


def test_validate_diamond(run):
    code, out, _ = run("validate", "diamond.json")
    rep = json.loads(out)
    assert code == 0
    assert rep["connected"] and rep["center_dimension"] == 1
    assert rep["h1"]["trivial"]
    assert len(rep["involutions"]) == 2


def test_validate_crown_reports_cocycle(run):
    code, out, _ = run("validate", "crown.json", "--field", "gf:3")
    rep = json.loads(out)
    assert code == 0
    assert rep["h1"]["trivial"] is False
    assert rep["h1"]["group"] == "Z^1"
    assert len(rep["h1"]["cocycle"]["entries"]) == 4


def test_malformed_cover_names_a_line(run):
    code, _, err = run("validate", "bad_covers.json")
    assert code == 2
    assert "bad_covers.json:4" in err and "ParseError" in err


def test_missing_file(run):
    code, _, err = run("validate", "nope.json")
    assert code == 2 and "ParseError" in err


def test_decompose_epsilon_form(run):
    code, out, _ = run("decompose", "diamond_eps_1_3.json")
    rep = json.loads(out)
    assert code == 0
    assert rep["scalar_action"] == "star"
    assert rep["lambda"] == {"0": "1", "a": "a", "b": "b", "1": "0"}
    assert all(e["value"] == "1" for e in rep["f"]["entries"])
    sigma = {(e["from"], e["to"]): e["value"] for e in rep["sigma"]["entries"]}
    # the diagonal twist by (1, 3) on the fixed points moves into the cocycle
    assert sigma == {("0", "a"): "1", ("0", "b"): "1/3", ("0", "1"): "1", ("a", "1"): "1", ("b", "1"): "3"}


def test_decompose_rejects_non_involution(run):
    code, _, err = run("decompose", "diamond_not_involution.json")
    assert code == 2 and "DecompositionFailure" in err


def test_classify_equivalent(run, tmp_path):
    out_file = tmp_path / "report.json"
    code, out, _ = run("classify", "diamond_eps_1_3.json", "diamond_eps_5_15.json", "--json", str(out_file))
    rep = json.loads(out)
    assert code == 0
    assert rep["verdict"] == "equivalent" and rep["checked"] is True
    assert set(rep["witness"]) == {"alpha", "u"}
    assert json.loads(out_file.read_text()) == rep


def test_classify_inner_only(run):
    code, out, _ = run("classify", "diamond_eps_1_3.json", "diamond_eps_3_1.json", "--inner-only")
    assert code == 0 and json.loads(out)["verdict"] == "equivalent"


def test_classify_obstruction(run):
    code, out, _ = run("classify", "diamond_eps_1_1.json", "diamond_eps_1_3.json")
    rep = json.loads(out)
    assert code == 1
    assert rep == {"verdict": "not_equivalent", "obstruction": {"kind": "coset_mismatch", "at": "b", "ratio": "3"}}


def test_classify_over_gf9_merges_epsilons(run):
    code, out, _ = run("classify", "diamond_eps_1_1.json", "diamond_star.json", "--field", "gf:3")
    assert code == 0


def test_classify_undecided_on_nontrivial_h1(run):
    code, out, _ = run("classify", "crown_sign.json", "crown_star.json")
    rep = json.loads(out)
    assert code == 1
    assert rep["verdict"] == "undecided"
    assert rep["obstruction"]["kind"] == "h1_obstruction"


def test_oracle_lines(run):
    code, out, _ = run("oracle", "chain2.json")
    lines = [json.loads(x) for x in out.splitlines()]
    assert code == 0
    assert all(rec["status"] == "pass" for rec in lines)
    assert {"instance", "check", "status", "detail"} == set(lines[0])


def test_oracle_skip_on_crown(run):
    code, out, _ = run("oracle", "crown.json")
    lines = [json.loads(x) for x in out.splitlines()]
    assert code == 0
    assert lines[-1]["status"] == "skipped"


def test_oracle_budget_exit_code(run):
    code, _, err = run("oracle", "diamond.json", "--budget", "10")
    assert code == 3 and "budget" in err


def test_oracle_rejects_infinite_field(run):
    code, _, _ = run("oracle", "chain2.json", "--field", "qi")
    assert code == 2


def test_bad_arguments_exit_two(run):
    with pytest.raises(SystemExit) as err:
        run("classify", "diamond_star.json")
    assert err.value.code == 2
    with pytest.raises(SystemExit) as err:
        run("validate", "diamond.json", "--field", "gf:4")
    assert err.value.code == 2


def test_module_entry_point(data_dir):
    proc = subprocess.run(
        [sys.executable, "-m", "fi_involutions", "validate", os.path.join(data_dir, "chain2.json")],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["elements"] == 2
