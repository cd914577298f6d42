"""Backward proof search.

The semantic oracle decides the verdict first. For entailed goals a proof is
then built:

* Without hypotheses, by a cut-free procedure for the calculus. Each
  procedure only ever applies steps whose premises are valid whenever the
  conclusion is, and every premise adds a fresh labelled formula from the
  finite universe, so no backtracking is needed.
* With hypotheses (or when analytic cut is allowed), by case splits: cut on
  every label of a closure formula, bottom-up, until each branch is either
  valid on its own or follows from one hypothesis by shifts and weakenings.

A proof in A is obtained from one in R, and a proof in Add from one in Rddsd,
by the translations in :mod:`.translate`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Union

from ..calculi import (
    CalculusId,
    RuleId,
    inverse_image_point,
    inverse_image_set,
    labelled,
    vee_list,
)
from ..core import Apply, Formula, LabelledFormula, LogicDef, Sequent, complement, subformula_closure
from ..semantics import Entailed, Refuted, Valuation, entails
from .build import axiom, conflict, derive_all_phi, from_hypothesis, labels_of, node, split_cases, weaken
from .tree import ProofTree
from .translate import translate_R_to_A, translate_Rddsd_to_Add

LF = LabelledFormula

DEFAULT_MAX_NODES = 200_000


@dataclass(frozen=True)
class SearchBudget:
    max_nodes: int = DEFAULT_MAX_NODES
    allow_analytic_cut: bool = False

    def __post_init__(self):
        if self.max_nodes < 1:
            raise ValueError("max_nodes must be at least 1")


@dataclass(frozen=True)
class Proved:
    proof: ProofTree
    nodes_used: int = 0


@dataclass(frozen=True)
class Exhausted:
    nodes_used: int
    max_nodes: int

    def report(self) -> str:
        return f"search budget exhausted after {self.nodes_used} of {self.max_nodes} nodes"


ProveOutcome = Union[Proved, Refuted, Exhausted]


class _OutOfBudget(Exception):
    pass


class _Stuck(Exception):
    """No rule applies: the sequent is not valid (never raised on valid input)."""


class _Builder:
    def __init__(self, logic: LogicDef, max_nodes: int):
        self.logic = logic
        self.max_nodes = max_nodes
        self.used = 0
        self.memo: dict[tuple, ProofTree] = {}

    def tick(self, k: int = 1) -> None:
        self.used += k
        if self.used > self.max_nodes:
            raise _OutOfBudget()

    # closing moves shared by every procedure

    def close(self, s: Sequent) -> Optional[ProofTree]:
        common = s.antecedent & s.succedent
        if common:
            self.tick()
            return weaken(axiom(min(common)), s)
        ante = labels_of(s.antecedent)
        for phi in sorted(ante):
            ks = sorted(ante[phi])
            if len(ks) > 1:
                self.tick(2)
                return weaken(conflict(phi, ks[0], ks[1]), s)
        succ = labels_of(s.succedent)
        for phi in sorted(succ):
            if len(succ[phi]) == self.logic.n:
                self.tick(2)
                return weaken(derive_all_phi(self.logic, CalculusId.A, phi), s)
        return None

    def run(self, proc: Callable[[Sequent], ProofTree], s: Sequent) -> ProofTree:
        key = (proc.__name__, s)
        hit = self.memo.get(key)
        if hit is None:
            hit = proc(s)
            self.memo[key] = hit
        return hit

    # --- succedent procedures (R and Rdd) --------------------------------

    def _succedent(self, s: Sequent, dd: bool) -> ProofTree:
        proc = self.rdd if dd else self.r
        done = self.close(s)
        if done is not None:
            return done
        if s.antecedent:
            a = min(s.antecedent)
            phi, k = a
            present = labels_of(s.succedent).get(phi, set())
            rest = s.antecedent - {a}
            move = sorted(complement({k} | present, self.logic.n))
            prem = self.run(proc, Sequent(rest, s.succedent | labelled(phi, move)))
            if not move:
                self.tick()
                return node(RuleId.L_WEAK, {"phi": phi, "k": k}, s, [prem])
            cur = prem
            for i, k1 in enumerate(move):
                self.tick()
                concl = Sequent(s.antecedent, s.succedent | labelled(phi, move[i + 1:]))
                cur = node(RuleId.R_SHIFT, {"phi": phi, "k1": k1, "k2": k}, concl, [cur])
            return cur
        D = labels_of(s.succedent)
        for phi in sorted(D):
            if not isinstance(phi, Apply):
                continue
            conn = self.logic.connective(phi.connective)
            for key, outs in conn.entries():
                if not outs <= D[phi]:
                    continue
                if any(k in D.get(a, ()) for a, k in zip(phi.args, key)):
                    continue
                if dd:
                    return self._table_r_dd(s, phi, outs)
                prems = [self.run(proc, s.add(succ=[LF(a, k)])) for a, k in zip(phi.args, key)]
                self.tick()
                return node(
                    RuleId.TABLE_R,
                    {"conn": phi.connective, "args": phi.args, "labels": key},
                    s, prems,
                )
        raise _Stuck(str(s))

    def _table_r_dd(self, s: Sequent, phi: Apply, K: frozenset) -> ProofTree:
        inv = inverse_image_set(self.logic, phi.connective, phi.args, K)
        prems = [self.run(self.rdd, s.add(succ=lam)) for lam in vee_list(inv.sets)]
        self.tick()
        return node(RuleId.TABLE_R_DD, {"conn": phi.connective, "args": phi.args, "K": frozenset(K)}, s, prems)

    def r(self, s: Sequent) -> ProofTree:
        return self._succedent(s, dd=False)

    def rdd(self, s: Sequent) -> ProofTree:
        return self._succedent(s, dd=True)

    # --- antecedent procedures (Rsd and Rddsd) -----------------------------

    def _antecedent(self, s: Sequent, dd: bool) -> ProofTree:
        proc = self.rddsd if dd else self.rsd
        done = self.close(s)
        if done is not None:
            return done
        ante = labels_of(s.antecedent)
        for lf in sorted(s.antecedent):
            phi, k = lf
            if not isinstance(phi, Apply):
                continue
            conn = self.logic.connective(phi.connective)
            # skip formulas whose label is already explained by their labelled arguments
            if any(
                k in outs and all(x in ante.get(a, ()) for a, x in zip(phi.args, key))
                for key, outs in conn.entries()
            ):
                continue
            if dd:
                return self._table_l_dd(s, phi, k)
            prems = []
            for key, outs in conn.entries():
                if k in outs:
                    prems.append(self.run(proc, s.add(ante=[LF(a, x) for a, x in zip(phi.args, key)])))
            self.tick()
            return node(RuleId.TABLE_L, {"conn": phi.connective, "args": phi.args, "k": k}, s, prems)
        succ = labels_of(s.succedent)
        for phi in sorted(succ):
            if phi in ante:
                continue
            K = sorted(complement(succ[phi], self.logic.n))
            prems = [self.run(proc, s.add(ante=[LF(phi, k)])) for k in K]
            self.tick()
            return node(RuleId.MULTI_SHIFT, {"phi": phi, "K": frozenset(K)}, s, prems)
        raise _Stuck(str(s))

    def _table_l_dd(self, s: Sequent, phi: Apply, k: int) -> ProofTree:
        inv = inverse_image_point(self.logic, phi.connective, phi.args, k)
        lam = next(l for l in vee_list(inv.sets) if not (l & s.antecedent))
        prems = [self.run(self.rddsd, s.add(ante=[m])) for m in sorted(lam)]
        self.tick()
        return node(RuleId.TABLE_L_DD, {"conn": phi.connective, "args": phi.args, "k": k, "lam": frozenset(lam)}, s, prems)

    def rsd(self, s: Sequent) -> ProofTree:
        return self._antecedent(s, dd=False)

    def rddsd(self, s: Sequent) -> ProofTree:
        return self._antecedent(s, dd=True)


_NATIVE = {
    CalculusId.A: "r",
    CalculusId.R: "r",
    CalculusId.ADD: "rddsd",
    CalculusId.RDD: "rdd",
    CalculusId.RSD: "rsd",
    CalculusId.RDDSD: "rddsd",
}


def _finish(logic: LogicDef, calculus: CalculusId, proof: ProofTree, hyps: tuple[Sequent, ...]) -> ProofTree:
    if calculus is CalculusId.A:
        return translate_R_to_A(logic, proof, hyps)
    if calculus is CalculusId.ADD:
        return translate_Rddsd_to_Add(logic, proof, hyps)
    return proof


def _with_hypotheses(b: _Builder, proc, logic: LogicDef, hyps: tuple[Sequent, ...], goal: Sequent) -> ProofTree:
    closure = subformula_closure(set(goal.formulas()).union(*(h.formulas() for h in hyps)))

    def solve(s: Sequent) -> ProofTree:
        key = ("split", s)
        hit = b.memo.get(key)
        if hit is not None:
            return hit
        result = None
        for h in hyps:
            result = from_hypothesis(logic, h, s)
            if result is not None:
                b.tick(result.size())
                break
        if result is None and isinstance(entails(logic, (), s), Entailed):
            result = b.run(proc, s)
        if result is None:
            labelled_here = labels_of(s.antecedent)
            phi = next((f for f in closure if f not in labelled_here), None)
            if phi is None:
                raise _Stuck(str(s))
            branches = {k: solve(s.add(ante=[LF(phi, k)])) for k in logic.values}
            b.tick(2 * logic.n + 2)
            result = split_cases(logic, phi, s, branches)
        b.memo[key] = result
        return result

    return solve(goal)


def prove(
    logic: LogicDef,
    calculus: CalculusId,
    goal: Sequent,
    hypotheses: Iterable[Sequent] = (),
    budget: SearchBudget = SearchBudget(),
) -> ProveOutcome:
    calculus = CalculusId(calculus)
    hyps = tuple(sorted(set(hypotheses), key=str))
    verdict = entails(logic, hyps, goal)
    if isinstance(verdict, Refuted):
        return verdict
    b = _Builder(logic, budget.max_nodes)
    proc = getattr(b, _NATIVE[calculus])
    try:
        if hyps or budget.allow_analytic_cut:
            proof = _with_hypotheses(b, proc, logic, hyps, goal)
        else:
            proof = b.run(proc, goal)
        proof = _finish(logic, calculus, proof, hyps)
    except _OutOfBudget:
        return Exhausted(b.used, budget.max_nodes)
    return Proved(proof, b.used)
