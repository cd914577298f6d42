import random

import pytest

from nmcalc import calculi
from nmcalc.core import logic_violations
from nmcalc.fuzz import FuzzConfig, check_instance, random_instance, run_fuzz, shrink
from nmcalc.syntax import parse_logic


class TestConfig:
    @pytest.mark.parametrize("field", ["instances", "max_connectives", "max_arity", "max_formula_depth", "max_hypotheses"])
    def test_bounds(self, field):
        with pytest.raises(ValueError):
            FuzzConfig(**{field: 0})

    def test_values_bound(self):
        with pytest.raises(ValueError):
            FuzzConfig(max_values=1)


class TestGenerators:
    def test_instances_respect_bounds(self):
        cfg = FuzzConfig(seed=4, max_values=3, max_connectives=2, max_arity=2, max_hypotheses=2)
        rng = random.Random(cfg.seed)
        for _ in range(50):
            logic, hyps, goal = random_instance(rng, cfg)
            assert logic_violations(logic) == []
            assert 2 <= logic.n <= 3
            assert 1 <= len(logic.connectives) <= 2
            assert all(c.arity <= 2 for c in logic.connectives.values())
            assert len(hyps) <= 2

    def test_reproducible(self):
        cfg = FuzzConfig(seed=9, instances=5)
        a = [random_instance(random.Random(9), cfg) for _ in range(3)]
        b = [random_instance(random.Random(9), cfg) for _ in range(3)]
        assert a == b


class TestRun:
    def test_clean_run(self):
        report = run_fuzz(FuzzConfig(seed=1, instances=100, max_values=2))
        assert report.summary().startswith("100 ok, 0 discrepancies")
        assert report.exhausted == 0
        assert report.entailed + report.refuted == 100

    def test_same_seed_same_report(self):
        cfg = FuzzConfig(seed=3, instances=10)
        assert run_fuzz(cfg).summary() == run_fuzz(cfg).summary()

    def test_injected_bug_is_caught(self, monkeypatch):
        # flip the shift side condition: equal labels accepted, distinct ones rejected
        monkeypatch.setattr(calculi, "labels_differ", lambda k1, k2: k1 == k2)
        report = run_fuzz(FuzzConfig(seed=1, instances=20, max_values=2, cut_elimination=False))
        assert report.discrepancies
        d = report.discrepancies[0]
        text = d.reproducer()
        assert "# problem:" in text
        # the reproducer starts with a loadable logic
        assert parse_logic(text).n == d.logic.n

    def test_shrinking(self, circ2, seq):
        hyps = [seq("|- q:1"), seq("p:1 |- q:2")]
        goal = seq("or(p, circ(q)):1 |- circ(p):2")

        def failing(logic, hs, g):
            return any(lf.formula.connective == "circ" if hasattr(lf.formula, "connective") else False
                       for lf in g.succedent)

        logic, hs, g = shrink(circ2, hyps, goal, failing)
        assert failing(logic, hs, g)
        assert hs == []
        assert len(g.antecedent) + len(g.succedent) <= 1 + len(goal.succedent)

    def test_check_instance_clean(self, circ2, seq):
        assert check_instance(circ2, [seq("|- p:2")], seq("|- circ(p):2"), rng=random.Random(0)) == []
