import random

import pytest

from nmcalc.calculi import CalculusId, RuleId
from nmcalc.core import Apply, LabelledFormula as LF, Sequent
from nmcalc.fuzz import random_cut_proof, random_logic
from nmcalc.proof import CutElimError, CutElimStats, ProofError, check_proof, count_rule_uses, derive_all_phi, eliminate_cuts
from nmcalc.proof.build import axiom, node, weaken
from nmcalc.syntax import parse_proof

from conftest import fixture_text, p, q

R = CalculusId.R
OR_PQ = Apply("or", (p, q))


def cut_free(proof):
    return count_rule_uses(proof, RuleId.CUT) == 0 and count_rule_uses(proof, RuleId.RES) == 0


class TestExamples:
    def test_weakening_cut(self, circ2):
        proof = parse_proof(fixture_text("cut5.proof"), circ2)
        assert count_rule_uses(proof, RuleId.CUT) == 1
        out = eliminate_cuts(circ2, R, proof)
        assert out == axiom(LF(p, 1))
        assert count_rule_uses(out, RuleId.CUT) == 0
        assert count_rule_uses(out, RuleId.RES) == 0

    def test_equal_tuple_resolution(self, circ2):
        proof = parse_proof(fixture_text("res_equal.proof"), circ2)
        out = eliminate_cuts(circ2, R, proof)
        assert out == proof.premises[0]

    def test_unequal_tuple_resolution(self, circ2, seq):
        both = weaken(derive_all_phi(circ2, R, p), seq("q:2 |- p:1, p:2"))
        left = node(
            RuleId.TABLE_R, {"conn": "or", "args": (p, q), "labels": (1, 2)}, seq("q:2 |- p:2, or(p, q):1"),
            [both, weaken(axiom(LF(q, 2)), seq("q:2 |- p:2, q:2"))],
        )
        right = node(
            RuleId.TABLE_R, {"conn": "or", "args": (p, q), "labels": (2, 2)}, seq("q:2 |- p:1, or(p, q):2"),
            [both, weaken(axiom(LF(q, 2)), seq("q:2 |- p:1, q:2"))],
        )
        res = node(
            RuleId.RES,
            {"phi": OR_PQ, "k1": 1, "k2": 2, "left": frozenset({LF(p, 2)}), "right": frozenset({LF(p, 1)})},
            seq("q:2 |- p:1, p:2"), [left, right],
        )
        check_proof(circ2, R, res)
        stats = CutElimStats()
        out = eliminate_cuts(circ2, R, res, stats=stats)
        check_proof(circ2, R, out)
        assert out.conclusion == res.conclusion
        assert cut_free(out)
        assert stats.fallbacks == 0
        # the compound disappears: the proof works on the differing argument only
        assert all(OR_PQ not in n.conclusion.formulas() for n in out.nodes())


class TestErrors:
    def test_axiomatic_calculus_rejected(self, circ2):
        with pytest.raises(CutElimError):
            eliminate_cuts(circ2, CalculusId.A, axiom(LF(p, 1)))

    def test_hypothesis_leaves_rejected(self, circ2, seq):
        with pytest.raises((CutElimError, ProofError)):
            eliminate_cuts(circ2, R, node(RuleId.HYP, {}, seq("|- p:1")))

    def test_invalid_input(self, circ2, seq):
        bad = node(RuleId.AX, {"phi": p, "k": 1}, seq("p:1 |- p:2"))
        with pytest.raises(ProofError):
            eliminate_cuts(circ2, R, bad)


@pytest.mark.parametrize("calc", [CalculusId.R, CalculusId.RDD, CalculusId.RSD, CalculusId.RDDSD])
def test_random_proofs(calc):
    rng = random.Random(list(CalculusId).index(calc))
    stats = CutElimStats()
    for _ in range(25):
        logic = random_logic(rng, max_values=3, max_connectives=2, max_arity=2)
        proof = random_cut_proof(rng, logic, calc)
        check_proof(logic, calc, proof)
        assert not cut_free(proof)
        out = eliminate_cuts(logic, calc, proof, stats=stats)
        check_proof(logic, calc, out)
        assert out.conclusion == proof.conclusion
        assert cut_free(out)
    assert stats.cuts + stats.resolutions > 0
