import itertools
import random

import pytest

from nmcalc.core import Apply, Atom, LogicDef, subformula_closure
from nmcalc.fuzz import random_formula, random_logic, random_sequent
from nmcalc.semantics import (
    Entailed,
    Refuted,
    Valuation,
    entails,
    is_legal,
    legal_valuations,
    satisfies,
)

from conftest import circ_p, p, q


def val(**kw):
    names = {"p": p, "q": q, "c": circ_p}
    return Valuation.from_mapping({names[k]: v for k, v in kw.items()})


def check_countermodel(logic, hyps, goal, verdict):
    v = verdict.countermodel
    assert is_legal(v, logic)
    assert all(satisfies(v, h) for h in hyps)
    assert not satisfies(v, goal)


class TestIsLegal:
    def test_examples(self, circ2):
        assert is_legal(val(p=1, c=2), circ2)
        assert not is_legal(val(p=2, c=1), circ2)
        assert is_legal(val(p=2, c=2), circ2)

    def test_domain_must_be_closed(self, circ2):
        with pytest.raises(ValueError):
            is_legal(val(c=1), circ2)


class TestLegalValuations:
    def test_circ(self, circ2):
        got = [v.values for v in legal_valuations(circ2, [p, circ_p])]
        assert got == [(1, 1), (1, 2), (2, 2)]

    def test_atom(self, circ2):
        assert len(list(legal_valuations(circ2, [p]))) == 2

    def test_deterministic_or(self, circ2):
        vs = list(legal_valuations(circ2, [p, q, Apply("or", (p, q))]))
        assert len(vs) == 4

    def test_matches_filtered_product(self):
        rng = random.Random(3)
        for _ in range(20):
            logic = random_logic(rng, max_values=3, max_connectives=2, max_arity=2)
            closure = subformula_closure({random_formula(rng, logic, 2)})
            raw = [
                Valuation(closure, vals)
                for vals in itertools.product(logic.values, repeat=len(closure))
            ]
            expected = [v for v in raw if is_legal(v, logic)]
            assert list(legal_valuations(logic, closure)) == expected


class TestSatisfies:
    def test_vacuous(self, circ2, seq):
        assert satisfies(val(p=2, c=2), seq("p:1 |- circ(p):1"))

    def test_falsified(self, circ2, seq):
        assert not satisfies(val(p=2, c=2), seq("p:2 |- circ(p):1"))

    def test_excluded_middle(self, circ2, seq):
        assert all(satisfies(v, seq("|- p:1, p:2")) for v in legal_valuations(circ2, [p]))

    def test_outside_domain(self, circ2, seq):
        with pytest.raises(ValueError, match="outside domain"):
            satisfies(val(p=1), seq("|- q:1"))


class TestEntails:
    def test_all_labels(self, circ2, seq):
        assert isinstance(entails(circ2, (), seq("|- p:1, p:2")), Entailed)

    def test_circ_inverse(self, circ2, seq):
        assert entails(circ2, (), seq("circ(p):1 |- p:1"))

    def test_countermodel(self, circ2, seq):
        goal = seq("p:2 |- circ(p):1")
        verdict = entails(circ2, (), goal)
        assert isinstance(verdict, Refuted)
        assert verdict.countermodel.as_dict() == {p: 2, circ_p: 2}
        assert verdict.countermodel.render() == "p = 2\ncirc(p) = 2\n"
        check_countermodel(circ2, (), goal, verdict)

    def test_hypotheses(self, circ2, seq):
        hyps = [seq("|- p:2")]
        assert not entails(circ2, (), seq("|- circ(p):2"))
        assert entails(circ2, hyps, seq("|- circ(p):2"))

    def test_empty_goal(self, circ2, seq):
        assert not entails(circ2, (), seq("|-"))
        assert entails(circ2, [seq("|-")], seq("|- p:1"))

    def test_monotone_in_hypotheses(self):
        rng = random.Random(11)
        for _ in range(40):
            logic = random_logic(rng, max_values=3, max_connectives=2, max_arity=2)
            goal = random_sequent(rng, logic)
            hyps = [random_sequent(rng, logic) for _ in range(2)]
            if entails(logic, hyps[:1], goal):
                assert entails(logic, hyps, goal)

    def test_countermodel_contract_random(self):
        rng = random.Random(5)
        for _ in range(60):
            logic = random_logic(rng, max_values=3, max_connectives=2, max_arity=2)
            goal = random_sequent(rng, logic)
            hyps = [random_sequent(rng, logic)]
            verdict = entails(logic, hyps, goal)
            if isinstance(verdict, Refuted):
                check_countermodel(logic, hyps, goal, verdict)


class TestProperties:
    def test_extension_and_restriction(self):
        rng = random.Random(8)
        for _ in range(20):
            logic = random_logic(rng, max_values=3, max_connectives=2, max_arity=2)
            small = subformula_closure({random_formula(rng, logic, 1)})
            big = subformula_closure(set(small) | {random_formula(rng, logic, 2)})
            for v in legal_valuations(logic, small):
                # extend bottom-up with arbitrary legal choices
                m = v.as_dict()
                for f in big:
                    if f not in m:
                        outs = logic.output(f.connective, [m[a] for a in f.args]) if isinstance(f, Apply) else logic.values
                        m[f] = rng.choice(sorted(outs))
                assert is_legal(Valuation.from_mapping(m), logic)
            for v in legal_valuations(logic, big):
                restricted = Valuation.from_mapping({f: v[f] for f in small})
                assert is_legal(restricted, logic)

    def test_deterministic_count(self, classical):
        f = Apply("or", (p, Apply("neg", (q,))))
        closure = subformula_closure({f})
        assert len(list(legal_valuations(classical, closure))) == 2 ** 2


class TestParallel:
    def test_split_is_deterministic(self):
        rng = random.Random(21)
        for _ in range(6):
            logic = random_logic(rng, max_values=3, max_connectives=2, max_arity=2)
            goal = random_sequent(rng, logic, depth=2)
            hyps = [random_sequent(rng, logic)]
            assert entails(logic, hyps, goal, workers=2) == entails(logic, hyps, goal)

    def test_split_countermodel(self, circ2, seq):
        goal = seq("p:2 |- circ(p):1")
        assert entails(circ2, (), goal, workers=3) == entails(circ2, (), goal)
