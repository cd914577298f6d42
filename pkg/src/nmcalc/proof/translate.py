"""Proof translations between calculi.

``translate_A_to_R`` replaces each table axiom by axioms, L-weakenings and
one table rule. ``translate_R_to_A`` replaces each table rule with
``l`` premises by a weakened table axiom and ``l`` cuts. ``translate_Rddsd_to_Add``
does the same for the antecedent rules of the sequent-dual calculus, which
is how proofs in the dual axiomatic calculus are obtained.
"""
from __future__ import annotations

from typing import Callable, Iterable

from ..calculi import CalculusId, RuleId, dual_axiom_instances, labelled, table_axiom
from ..core import Apply, LabelledFormula, LogicDef, Sequent, complement
from .build import axiom, derive_all_phi, node, weaken
from .check import check_proof
from .tree import ProofTree, _postorder

LF = LabelledFormula


def _rewrite(proof: ProofTree, fn: Callable[[ProofTree, tuple[ProofTree, ...]], ProofTree]) -> ProofTree:
    """Bottom-up rebuild; ``fn(node, new_premises)`` returns the replacement."""
    memo: dict[int, ProofTree] = {}
    for n in _postorder(proof):
        prems = tuple(memo[id(p)] for p in n.premises)
        memo[id(n)] = fn(n, prems)
    return memo[id(proof)]


def _same(n: ProofTree, prems: tuple[ProofTree, ...]) -> ProofTree:
    if all(a is b for a, b in zip(prems, n.premises)):
        return n
    return ProofTree(n.conclusion, n.rule, n.params, prems)


def translate_A_to_R(logic: LogicDef, proof: ProofTree, hypotheses: Iterable[Sequent] = ()) -> ProofTree:
    check_proof(logic, CalculusId.A, proof, hypotheses)

    def fn(n, prems):
        if n.rule is not RuleId.TABLE_AX:
            return _same(n, prems)
        conn, args, labels = n.params["conn"], tuple(n.params["args"]), tuple(n.params["labels"])
        theta = frozenset(LF(a, k) for a, k in zip(args, labels))
        leaves = [weaken(axiom(LF(a, k)), Sequent(theta, {LF(a, k)})) for a, k in zip(args, labels)]
        return node(RuleId.TABLE_R, {"conn": conn, "args": args, "labels": labels}, n.conclusion, leaves)

    return _rewrite(proof, fn)


def translate_R_to_A(logic: LogicDef, proof: ProofTree, hypotheses: Iterable[Sequent] = ()) -> ProofTree:
    check_proof(logic, CalculusId.R, proof, hypotheses)

    def fn(n, prems):
        if n.rule is not RuleId.TABLE_R:
            return _same(n, prems)
        conn, args, labels = n.params["conn"], tuple(n.params["args"]), tuple(n.params["labels"])
        ax = table_axiom(logic, conn, args, labels)
        g, d = n.conclusion.antecedent, n.conclusion.succedent
        members = [LF(a, k) for a, k in zip(args, labels)]
        cur = weaken(node(RuleId.TABLE_AX, n.params, ax), Sequent(g | ax.antecedent, d))
        # cut j removes members[j] unless a later member or the context still holds it
        for j, m in enumerate(members):
            left_ante = g | frozenset(members[j + 1:])
            left = weaken(prems[j], Sequent(left_ante, d | {m}))
            cur = node(RuleId.CUT, {"phi": m.formula, "k": m.label}, Sequent(left_ante, d), [left, cur])
        return cur

    return _rewrite(proof, fn)


def translate_Rddsd_to_Add(logic: LogicDef, proof: ProofTree, hypotheses: Iterable[Sequent] = ()) -> ProofTree:
    check_proof(logic, CalculusId.RDDSD, proof, hypotheses)

    def fn(n, prems):
        g, d = n.conclusion.antecedent, n.conclusion.succedent
        if n.rule is RuleId.TABLE_L_DD:
            conn, args, k = n.params["conn"], tuple(n.params["args"]), n.params["k"]
            lam = sorted(n.params["lam"])
            phi = Apply(conn, args)
            leaf = node(RuleId.DUAL_AX, n.params, Sequent({LF(phi, k)}, lam))
            cur = weaken(leaf, Sequent(g, d | frozenset(lam)))
            for j, m in enumerate(lam):
                rest = d | frozenset(lam[j + 1:])
                right = weaken(prems[j], Sequent(g | {m}, rest))
                cur = node(RuleId.CUT, {"phi": m.formula, "k": m.label}, Sequent(g, rest), [cur, right])
            return cur
        if n.rule is RuleId.MULTI_SHIFT:
            phi, K = n.params["phi"], sorted(n.params["K"])
            cur = weaken(derive_all_phi(logic, CalculusId.ADD, phi), Sequent(g, d | labelled(phi, K)))
            for j, k in enumerate(K):
                rest = d | labelled(phi, K[j + 1:])
                right = weaken(prems[j], Sequent(g | {LF(phi, k)}, rest))
                cur = node(RuleId.CUT, {"phi": phi, "k": k}, Sequent(g, rest), [cur, right])
            return cur
        return _same(n, prems)

    return _rewrite(proof, fn)
