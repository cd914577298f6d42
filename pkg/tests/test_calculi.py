import itertools
import random

import pytest

from nmcalc.calculi import (
    MEMBERSHIP,
    CalculusId,
    InferenceError,
    RuleId,
    assemble,
    check_inference,
    dual_axiom_instances,
    inverse_image_point,
    inverse_image_set,
    rule_schemas,
    table_axiom,
    vee_product,
)
from nmcalc.core import Apply, Atom, LabelledFormula as LF, LogicDef, Sequent, subformula_closure
from nmcalc.fuzz import locally_sound, random_logic, step_problems
from nmcalc.semantics import legal_valuations, satisfies

from conftest import circ_p, p, q

A, R, ADD, RDD, RSD, RDDSD = CalculusId.A, CalculusId.R, CalculusId.ADD, CalculusId.RDD, CalculusId.RSD, CalculusId.RDDSD


def sets(*groups):
    return {frozenset(g) for g in groups}


def valid(logic, s):
    closure = subformula_closure(s.formulas())
    return all(satisfies(v, s) for v in legal_valuations(logic, closure))


class TestTableAxiom:
    def test_examples(self, circ2, seq):
        assert table_axiom(circ2, "circ", [p], [1]) == seq("p:1 |- circ(p):1, circ(p):2")
        assert table_axiom(circ2, "circ", [p], [2]) == seq("p:2 |- circ(p):2")
        assert table_axiom(circ2, "or", [p, q], [2, 2]) == seq("p:2, q:2 |- or(p, q):2")

    def test_arity_mismatch(self, circ2):
        with pytest.raises(InferenceError):
            table_axiom(circ2, "or", [p], [1])


class TestInverseImages:
    def test_point(self, circ2):
        assert set(inverse_image_point(circ2, "circ", [p], 1).sets) == sets([LF(p, 1)])
        assert set(inverse_image_point(circ2, "circ", [p], 2).sets) == sets([LF(p, 1)], [LF(p, 2)])
        assert set(inverse_image_point(circ2, "or", [p, q], 2).sets) == sets([LF(p, 2), LF(q, 2)])

    def test_set(self, circ2):
        assert set(inverse_image_set(circ2, "circ", [p], {1, 2}).sets) == sets([LF(p, 1)])
        assert set(inverse_image_set(circ2, "circ", [p], {2}).sets) == sets([LF(p, 2)])
        assert not inverse_image_set(circ2, "circ", [p], {1})

    def test_partition_identities(self):
        rng = random.Random(2)
        for _ in range(30):
            logic = random_logic(rng, max_values=3, max_connectives=2, max_arity=2)
            for conn in logic.connectives.values():
                args = [Atom(f"a{i}") for i in range(conn.arity)]
                by_point = sum(len(inverse_image_point(logic, conn.name, args, k).tuples) for k in logic.values)
                assert by_point == sum(len(outs) for _, outs in conn.entries())
                tuples = []
                for size in range(1, logic.n + 1):
                    for K in itertools.combinations(logic.values, size):
                        tuples += inverse_image_set(logic, conn.name, args, K).tuples
                assert sorted(tuples) == sorted(conn.table)

    def test_one_member_per_argument(self):
        rng = random.Random(4)
        for _ in range(30):
            logic = random_logic(rng, max_values=3, max_connectives=2, max_arity=3)
            for conn in logic.connectives.values():
                args = [Atom(f"a{i}") for i in range(conn.arity)]
                for k in logic.values:
                    for theta in inverse_image_point(logic, conn.name, args, k).sets:
                        assert sorted(lf.formula for lf in theta) == sorted(args)


class TestVeeProduct:
    def test_single(self):
        assert vee_product([{LF(p, 1)}]) == sets([LF(p, 1)])

    def test_two_singletons(self):
        assert vee_product([{LF(p, 1)}, {LF(p, 2)}]) == sets([LF(p, 1), LF(p, 2)])

    def test_collapse(self):
        got = vee_product([{LF(p, 1)}, {LF(p, 1), LF(q, 2)}])
        assert got == sets([LF(p, 1)], [LF(p, 1), LF(q, 2)])

    def test_edge_cases(self):
        assert vee_product([]) == {frozenset()}
        assert vee_product([{LF(p, 1)}, set()]) == frozenset()


class TestDualAxioms:
    def test_examples(self, circ2, seq):
        assert dual_axiom_instances(circ2, "circ", [p], 2) == [seq("circ(p):2 |- p:1, p:2")]
        assert dual_axiom_instances(circ2, "circ", [p], 1) == [seq("circ(p):1 |- p:1")]
        assert dual_axiom_instances(circ2, "or", [p, q], 2) == [seq("or(p, q):2 |- p:2"), seq("or(p, q):2 |- q:2")]

    def test_unreachable_label(self):
        logic = LogicDef.from_tables("c", 2, {"t": {(1,): {1}, (2,): {1}}})
        # ⋁ over no sets is {∅}: the label never occurs, so "t(p):2 |-" is sound
        assert dual_axiom_instances(logic, "t", [p], 2) == [Sequent({LF(Apply("t", (p,)), 2)}, ())]


class TestCheckInference:
    def test_r_shift(self, circ2, seq):
        check_inference(circ2, A, seq("p:2 |-"), RuleId.R_SHIFT, {"phi": p, "k1": 1, "k2": 2}, [seq("|- p:1")])

    def test_r_shift_same_label(self, circ2, seq):
        with pytest.raises(InferenceError):
            check_inference(circ2, A, seq("p:1 |-"), RuleId.R_SHIFT, {"phi": p, "k1": 1, "k2": 1}, [seq("|- p:1")])

    def test_cut_contexts(self, circ2, seq):
        with pytest.raises(InferenceError, match="contexts not shared"):
            check_inference(circ2, A, seq("|-"), RuleId.CUT, {"phi": p, "k": 1}, [seq("|- p:1"), seq("q:1 |-")])

    def test_table_r(self, circ2, seq):
        params = {"conn": "circ", "args": (p,), "labels": (1,)}
        check_inference(circ2, R, seq("p:1 |- circ(p):1, circ(p):2"), RuleId.TABLE_R, params, [seq("p:1 |- p:1")])

    def test_rule_not_in_calculus(self, circ2, seq):
        params = {"conn": "circ", "args": (p,), "labels": (1,)}
        with pytest.raises(InferenceError, match="table_ax not in R"):
            check_inference(circ2, R, seq("p:1 |- circ(p):1, circ(p):2"), RuleId.TABLE_AX, params, [])

    def test_premise_count(self, circ2, seq):
        with pytest.raises(InferenceError):
            check_inference(circ2, A, seq("p:1 |- p:1"), RuleId.AX, {"phi": p, "k": 1}, [seq("p:1 |- p:1")])

    def test_multi_shift_full_set(self, circ2, seq):
        with pytest.raises(InferenceError):
            check_inference(circ2, RSD, seq("|-"), RuleId.MULTI_SHIFT, {"phi": p, "K": frozenset({1, 2})},
                            [seq("p:1 |-"), seq("p:2 |-")])

    def test_multi_shift(self, circ2, seq):
        check_inference(circ2, RSD, seq("|- p:2"), RuleId.MULTI_SHIFT, {"phi": p, "K": frozenset({1})}, [seq("p:1 |- p:2")])

    def test_table_r_dd_empty_family(self, circ2, seq):
        with pytest.raises(InferenceError):
            check_inference(circ2, RDD, seq("|- circ(p):1"), RuleId.TABLE_R_DD,
                            {"conn": "circ", "args": (p,), "K": frozenset({1})}, [])

    def test_hyp(self, circ2, seq):
        h = seq("|- p:1")
        check_inference(circ2, A, h, RuleId.HYP, {}, [], [h])
        with pytest.raises(InferenceError):
            check_inference(circ2, A, h, RuleId.HYP, {}, [], [seq("|- p:2")])

    def test_res(self, circ2, seq):
        params = {"phi": circ_p, "k1": 1, "k2": 2, "left": frozenset({LF(p, 1)}), "right": frozenset()}
        check_inference(circ2, R, seq("|- p:1"), RuleId.RES, params, [seq("|- p:1, circ(p):1"), seq("|- circ(p):2")])


class TestSchemas:
    def test_axiomatic(self, circ2):
        rules = [s.rule for s in rule_schemas(A, circ2)]
        assert rules.count(RuleId.TABLE_AX) == 6
        assert RuleId.TABLE_R not in rules

    def test_rule_based(self, circ2):
        rules = [s.rule for s in rule_schemas(R, circ2)]
        assert rules.count(RuleId.TABLE_R) == 6
        assert RuleId.TABLE_AX not in rules

    def test_sequent_dual(self, circ2):
        rules = {s.rule for s in rule_schemas(RSD, circ2)}
        assert {RuleId.MULTI_SHIFT, RuleId.TABLE_L} <= rules

    def test_machine_readable(self, circ2):
        for calc in CalculusId:
            for s in rule_schemas(calc, circ2):
                d = s.as_dict()
                assert RuleId(d["rule"]) in MEMBERSHIP[calc]
                assert s.render()


class TestSoundness:
    @pytest.mark.parametrize("logic_name", ["circ2", "classical"])
    def test_generated_axioms(self, request, logic_name):
        logic = request.getfixturevalue(logic_name)
        atoms = [p, q, Atom("r")]
        for conn in logic.connectives.values():
            for args in itertools.product(atoms, repeat=conn.arity):
                assert valid(logic, Sequent({LF(args[0] if args else p, 1)}, {LF(args[0] if args else p, 1)}))
                for key, _ in conn.entries():
                    assert valid(logic, table_axiom(logic, conn.name, args, key))
                for k in logic.values:
                    for s in dual_axiom_instances(logic, conn.name, args, k):
                        assert valid(logic, s)

    def test_accepted_steps_are_locally_sound(self):
        rng = random.Random(9)
        for _ in range(60):
            logic = random_logic(rng, max_values=3, max_connectives=2, max_arity=2)
            assert step_problems(rng, logic, count=10) == []

    def test_assembled_instances_check(self, circ2):
        ctx = Sequent({LF(q, 1)}, {LF(q, 2)})
        for rule, params in [
            (RuleId.TABLE_L, {"conn": "or", "args": (p, q), "k": 1}),
            (RuleId.TABLE_R_DD, {"conn": "circ", "args": (p,), "K": frozenset({2})}),
            (RuleId.MULTI_SHIFT, {"phi": circ_p, "K": frozenset({2})}),
        ]:
            concl, prems = assemble(circ2, rule, params, ctx)
            calc = next(c for c in CalculusId if rule in MEMBERSHIP[c])
            check_inference(circ2, calc, concl, rule, params, prems)
            assert locally_sound(circ2, concl, prems)

    def test_deterministic_table_r_adds_one(self, classical):
        for conn in classical.connectives.values():
            args = [Atom(f"a{i}") for i in range(conn.arity)]
            for key, _ in conn.entries():
                assert len(table_axiom(classical, conn.name, args, key).succedent) == 1
