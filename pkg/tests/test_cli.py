import json
import subprocess
import sys

import pytest

from nmcalc.cli import main
from nmcalc.proof import check_proof
from nmcalc.syntax import parse_proof

from conftest import FIXTURES, fixture_text

LOGIC = str(FIXTURES / "circ2.mvl")
CUT5 = str(FIXTURES / "cut5.proof")


@pytest.fixture
def run(capsys):
    def go(*argv):
        code = main([str(a) for a in argv])
        out = capsys.readouterr()
        return code, out.out, out.err
    return go


class TestValidate:
    def test_ok(self, run):
        assert run("validate", LOGIC) == (0, "OK\n", "")

    def test_empty_output(self, run, tmp_path):
        bad = tmp_path / "bad.mvl"
        bad.write_text(fixture_text("circ2.mvl").replace("2 -> 2\nend\nconn or", "2 ->\nend\nconn or"))
        code, out, _ = run("validate", bad)
        assert code == 1
        assert "empty output set at circ(2)" in out

    def test_missing_file(self, run, tmp_path):
        code, _, err = run("validate", tmp_path / "nope.mvl")
        assert code == 2
        assert "cannot read" in err


class TestSchemas:
    def test_axiomatic(self, run):
        code, out, _ = run("schemas", LOGIC, "--calc", "A")
        assert code == 0
        assert out.count("table_ax") == 6

    def test_sequent_dual(self, run):
        code, out, _ = run("schemas", LOGIC, "--calc", "Rsd")
        assert code == 0 and "multi_shift" in out

    def test_json(self, run):
        code, out, _ = run("schemas", LOGIC, "--calc", "R", "--json")
        rules = [d["rule"] for d in json.loads(out)]
        assert code == 0 and rules.count("table_r") == 6

    def test_bad_calculus(self, run):
        assert run("schemas", LOGIC, "--calc", "X")[0] == 2


class TestEntails:
    def test_entailed(self, run):
        assert run("entails", LOGIC, "|- p:1, p:2") == (0, "ENTAILED\n", "")

    def test_countermodel(self, run):
        code, out, _ = run("entails", LOGIC, "p:2 |- circ(p):1")
        assert code == 1
        assert out == "COUNTERMODEL\np = 2\ncirc(p) = 2\n"

    def test_unparsable(self, run):
        code, _, err = run("entails", LOGIC, "p:2 |- circ(p:1")
        assert code == 2 and "expected ')'" in err

    def test_hypotheses(self, run):
        assert run("entails", LOGIC, "|- circ(p):2", "--hyp", "|- p:2")[0] == 0

    def test_hypothesis_file(self, run):
        hyp = FIXTURES / "circ2.hyp"
        assert run("entails", LOGIC, "|- q:1", "--hyp-file", hyp)[0] == 0


class TestProve:
    def test_proof_text(self, run, circ2):
        code, out, _ = run("prove", LOGIC, "|- p:1, p:2", "--calc", "A")
        assert code == 0
        proof = parse_proof(out, circ2)
        check_proof(circ2, "A", proof)
        assert proof.size() == 2

    def test_out_file(self, run, tmp_path, circ2):
        dest = tmp_path / "p.proof"
        code, out, _ = run("prove", LOGIC, "circ(p):1 |- p:1", "--calc", "Rddsd", "--out", dest)
        assert code == 0 and out == ""
        check_proof(circ2, "Rddsd", parse_proof(dest.read_text(), circ2))

    def test_refuted(self, run):
        code, out, _ = run("prove", LOGIC, "p:2 |- circ(p):1")
        assert code == 1 and out.startswith("REFUTED\nCOUNTERMODEL\n")

    def test_exhausted(self, run):
        code, out, _ = run("prove", LOGIC, "or(p, circ(p)):2 |- p:2", "--max-nodes", "1")
        assert code == 1 and out.startswith("EXHAUSTED")

    def test_bad_budget(self, run):
        assert run("prove", LOGIC, "|-", "--max-nodes", "0")[0] == 2


class TestCheck:
    def test_ok(self, run):
        assert run("check", LOGIC, CUT5, "--calc", "R") == (0, "OK\n", "")

    def test_tampered(self, run, tmp_path):
        bad = tmp_path / "bad.proof"
        bad.write_text(fixture_text("cut5.proof").replace("p:1 |- p:1, q:1", "p:1 |- p:2, q:1"))
        code, out, _ = run("check", LOGIC, bad, "--calc", "R")
        assert code == 1
        assert out.startswith("root")

    def test_unparsable_proof(self, run, tmp_path):
        bad = tmp_path / "bad.proof"
        bad.write_text('(bogus {} "|-")')
        code, _, err = run("check", LOGIC, bad)
        assert code == 2 and "unknown rule id bogus" in err


class TestTranslate:
    def test_r_to_a(self, run, circ2):
        code, out, _ = run("translate", LOGIC, FIXTURES / "circ_table_r.proof", "--from", "R", "--to", "A")
        assert code == 0
        check_proof(circ2, "A", parse_proof(out, circ2))

    def test_wrong_calculus(self, run):
        code, out, _ = run("translate", LOGIC, FIXTURES / "circ_table_r.proof", "--from", "A", "--to", "R")
        assert code == 1 and "not a valid A proof" in out

    def test_unsupported_pair(self, run):
        assert run("translate", LOGIC, CUT5, "--from", "Rdd", "--to", "A")[0] == 2


class TestElimcut:
    def test_five_node_cut(self, run, circ2):
        code, out, err = run("elimcut", LOGIC, CUT5, "--stats")
        assert code == 0
        assert out == '(ax {phi=p, k=1} "p:1 |- p:1")\n'
        assert "1 cut(s)" in err

    def test_axiomatic_rejected(self, run):
        assert run("elimcut", LOGIC, CUT5, "--calc", "A")[0] == 2


class TestFuzz:
    def test_clean(self, run):
        code, out, _ = run("fuzz", "--seed", "1", "--instances", "100", "--max-values", "2")
        assert code == 0
        assert out.startswith("100 ok")

    def test_zero_instances(self, run):
        assert run("fuzz", "--instances", "0")[0] == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "nmcalc.cli", "entails", LOGIC, "|- p:1, p:2"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout == "ENTAILED\n"
