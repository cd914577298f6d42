"""Cut and resolution elimination for the rule-based calculi.

Proofs are processed bottom-up, so each cut or resolution is reduced with
cut-free premises. The reductions work on a multiplicative form: reducing a
cut of ``L`` and ``R`` on ``a`` yields a cut-free proof of *some* sequent
included in

    ante(L) | (ante(R) - a)   |-   (succ(L) - a) | succ(R)

and the caller weakens it back to the original conclusion. Because sides are
sets, this absorbs contraction.

Reductions, in the order tried:

* a premise conclusion already fits the target: keep it;
* the eliminated formula was weakened in: keep the weakening's premise;
* a cut against an R-shift becomes a resolution with the shift's premise;
* the formula is not principal on one side: push the cut into that side's
  premises and re-apply the rule with the enlarged context (when the formula
  is both principal and in the context it is first removed from the premises);
* principal pairs: shifts against shifts, multi-shift merging, and for table
  rules a resolution on a differing argument followed by R-weakenings.

The remaining principal pairs (two dual table rules with different output
sets, and a multi-shift that would need the full label set) have no local
reduction here; their sub-sequent is re-derived by the cut-free search
procedure of the calculus. ``CutElimStats`` counts both kinds.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..calculi import MEMBERSHIP, CalculusId, RuleId, assemble, context_of, instance_shape
from ..core import LabelledFormula, LogicDef, Sequent
from .build import node, weaken
from .check import check_proof, uses_hypotheses
from .search import _Builder, _NATIVE, _OutOfBudget
from .tree import ProofTree, _postorder

LF = LabelledFormula

ELIMINABLE = (CalculusId.R, CalculusId.RDD, CalculusId.RSD, CalculusId.RDDSD)
_SHIFTS = (RuleId.L_SHIFT, RuleId.MULTI_SHIFT)


class CutElimError(ValueError):
    pass


@dataclass
class CutElimStats:
    cuts: int = 0
    resolutions: int = 0
    reductions: int = 0
    fallbacks: int = 0
    fallback_reasons: dict = field(default_factory=dict)

    def fallback(self, reason: str) -> None:
        self.fallbacks += 1
        self.fallback_reasons[reason] = self.fallback_reasons.get(reason, 0) + 1


def _within(p: ProofTree, t: Sequent) -> bool:
    return p.conclusion.issubsequent(t)


class _Eliminator:
    def __init__(self, logic: LogicDef, calculus: CalculusId, fuel: int, max_nodes: int):
        self.logic = logic
        self.calculus = calculus
        self.fuel = fuel
        self.stats = CutElimStats()
        self.builder = _Builder(logic, max_nodes)
        self.proc = getattr(self.builder, _NATIVE[calculus])
        self.memo: dict[tuple, tuple] = {}

    # --- helpers ---------------------------------------------------------

    def shape(self, p: ProofTree):
        """``(context, concl_active, premise_actives)`` of a context-sharing node."""
        sh = instance_shape(self.logic, p.rule, p.params)
        if p.premises:
            ctx = context_of(sh, p.conclusion, [q.conclusion for q in p.premises])
        else:
            ctx = p.conclusion.remove(*sh.conclusion)
        return ctx, sh.conclusion, sh.premises

    def rebuild(self, p: ProofTree, ctx: Sequent, prems: list[ProofTree]) -> ProofTree:
        concl, targets = assemble(self.logic, p.rule, p.params, ctx)
        return node(p.rule, p.params, concl, [weaken(q, t) for q, t in zip(prems, targets)])

    def fallback(self, target: Sequent, reason: str) -> ProofTree:
        self.stats.fallback(reason)
        try:
            return self.builder.run(self.proc, target)
        except _OutOfBudget:
            raise CutElimError(f"fallback search exceeded its budget on {target}") from None

    def spend(self) -> bool:
        self.fuel -= 1
        return self.fuel >= 0

    # --- cut --------------------------------------------------------------

    def cut(self, L: ProofTree, R: ProofTree, a: LF) -> ProofTree:
        key = ("cut", id(L), id(R), a)
        hit = self.memo.get(key)
        if hit is None:
            hit = (self._cut(L, R, a), L, R)
            self.memo[key] = hit
        return hit[0]

    def _cut(self, L: ProofTree, R: ProofTree, a: LF) -> ProofTree:
        (g1, d1), (g2, d2) = (L.conclusion.antecedent, L.conclusion.succedent), (R.conclusion.antecedent, R.conclusion.succedent)
        T = Sequent(g1 | (g2 - {a}), (d1 - {a}) | d2)
        if _within(L, T):
            return L
        if _within(R, T):
            return R
        if not self.spend():
            return self.fallback(T, "fuel")
        self.stats.reductions += 1
        if L.rule is RuleId.R_WEAK and _within(L.premises[0], T):
            return L.premises[0]
        if R.rule is RuleId.L_WEAK and _within(R.premises[0], T):
            return R.premises[0]
        if R.rule is RuleId.R_SHIFT and R.params["phi"] == a.formula and R.params["k2"] == a.label:
            r1 = R.premises[0]
            b = LF(a.formula, R.params["k1"])
            if a not in r1.conclusion.antecedent:
                return self.res(L, r1, a, b)
        # push the cut into a side where ``a`` is not (only) principal
        ctx, (ca, cs), _ = self.shape(L)
        if a not in cs or a in ctx.succedent:
            prems = [self.cut(q, R, a) for q in L.premises]
            new_ctx = Sequent(ctx.antecedent | (g2 - {a}), (ctx.succedent - {a}) | d2)
            out = self.rebuild(L, new_ctx, prems)
            return out if _within(out, T) else self.cut(out, R, a)
        ctx, (ca, cs), _ = self.shape(R)
        if a not in ca or a in ctx.antecedent:
            prems = [self.cut(L, q, a) for q in R.premises]
            new_ctx = Sequent((ctx.antecedent - {a}) | g1, ctx.succedent | (d1 - {a}))
            out = self.rebuild(R, new_ctx, prems)
            return out if _within(out, T) else self.cut(L, out, a)
        # ``a`` is principal on both sides
        if L.rule in _SHIFTS:
            merged = self.merge_shift(L, R, a)
            if merged is not None:
                return merged
            return self.fallback(T, "multi-shift over all labels")
        return self.fallback(T, f"cut {L.rule}/{R.rule}")

    def merge_shift(self, L: ProofTree, R: ProofTree, a: LF) -> Optional[ProofTree]:
        """``L`` ends in a shift of ``a.formula`` by ``K``; add ``a.label`` to ``K`` using ``R``."""
        phi = a.formula
        K = {L.params["k"]} if L.rule is RuleId.L_SHIFT else set(L.params["K"])
        if len(K | {a.label}) >= self.logic.n or RuleId.MULTI_SHIFT not in _rules(self.calculus):
            return None
        ctx, _, _ = self.shape(L)
        g = ctx.antecedent | (R.conclusion.antecedent - {a})
        d = ctx.succedent | R.conclusion.succedent
        newK = sorted(K | {a.label})
        by_label = dict(zip(sorted(K), L.premises))
        prems = [by_label.get(k, R) for k in newK]
        return self.rebuild(
            ProofTree(L.conclusion, RuleId.MULTI_SHIFT, {"phi": phi, "K": frozenset(newK)}, ()),
            Sequent(g, d), prems,
        )

    # --- resolution ---------------------------------------------------------

    def res(self, L: ProofTree, R: ProofTree, a1: LF, a2: LF) -> ProofTree:
        key = ("res", id(L), id(R), a1, a2)
        hit = self.memo.get(key)
        if hit is None:
            hit = (self._res(L, R, a1, a2), L, R)
            self.memo[key] = hit
        return hit[0]

    def _res(self, L: ProofTree, R: ProofTree, a1: LF, a2: LF) -> ProofTree:
        g1, d1 = L.conclusion.antecedent, L.conclusion.succedent
        g2, d2 = R.conclusion.antecedent, R.conclusion.succedent
        T = Sequent(g1 | g2, (d1 - {a1}) | (d2 - {a2}))
        if _within(L, T):
            return L
        if _within(R, T):
            return R
        if not self.spend():
            return self.fallback(T, "fuel")
        self.stats.reductions += 1
        if a1 in g1:
            return _shift(R, a2, a1.label)
        if a2 in g2:
            return _shift(L, a1, a2.label)
        for P, b in ((L, a1), (R, a2)):
            if P.rule is RuleId.R_WEAK and _within(P.premises[0], T):
                return P.premises[0]
        ctx, (ca, cs), _ = self.shape(L)
        if a1 not in cs or a1 in ctx.succedent:
            prems = [self.res(q, R, a1, a2) for q in L.premises]
            new_ctx = Sequent(ctx.antecedent | g2, (ctx.succedent - {a1}) | (d2 - {a2}))
            out = self.rebuild(L, new_ctx, prems)
            return out if _within(out, T) else self.res(out, R, a1, a2)
        ctx, (ca, cs), _ = self.shape(R)
        if a2 not in cs or a2 in ctx.succedent:
            prems = [self.res(L, q, a1, a2) for q in R.premises]
            new_ctx = Sequent(ctx.antecedent | g1, (ctx.succedent - {a2}) | (d1 - {a1}))
            out = self.rebuild(R, new_ctx, prems)
            return out if _within(out, T) else self.res(L, out, a1, a2)
        # principal on both sides
        for P, Q, other in ((L, R, a2), (R, L, a1)):
            if P.rule in _SHIFTS:
                K = [P.params["k"]] if P.rule is RuleId.L_SHIFT else sorted(P.params["K"])
                if other.label in K:
                    return self.cut(Q, P.premises[K.index(other.label)], other)
        if L.rule is R.rule is RuleId.TABLE_R:
            t, u = L.params["labels"], R.params["labels"]
            j = next(i for i in range(len(t)) if t[i] != u[i])
            arg = L.params["args"][j]
            return self.res(L.premises[j], R.premises[j], LF(arg, t[j]), LF(arg, u[j]))
        return self.fallback(T, f"res {L.rule}/{R.rule}")


def _rules(calculus: CalculusId):
    return MEMBERSHIP[calculus]


def _shift(P: ProofTree, lf: LF, to: int) -> ProofTree:
    c = P.conclusion
    concl = Sequent(c.antecedent | {LF(lf.formula, to)}, c.succedent - {lf})
    return node(RuleId.R_SHIFT, {"phi": lf.formula, "k1": lf.label, "k2": to}, concl, [P])


def eliminate_cuts(
    logic: LogicDef,
    calculus: CalculusId,
    proof: ProofTree,
    fuel: int = 100_000,
    max_nodes: int = 200_000,
    stats: Optional[CutElimStats] = None,
) -> ProofTree:
    """Return a proof of the same conclusion with no ``cut`` or ``res`` nodes."""
    calculus = CalculusId(calculus)
    if calculus not in ELIMINABLE:
        raise CutElimError(f"cut elimination is defined for R, Rdd, Rsd and Rddsd, not {calculus}")
    if uses_hypotheses(proof):
        raise CutElimError("proof uses hypotheses")
    check_proof(logic, calculus, proof)
    el = _Eliminator(logic, calculus, fuel, max_nodes)
    memo: dict[int, ProofTree] = {}
    for n in _postorder(proof):
        prems = [memo[id(p)] for p in n.premises]
        if n.rule is RuleId.CUT:
            el.stats.cuts += 1
            a = LF(n.params["phi"], n.params["k"])
            out = weaken(el.cut(prems[0], prems[1], a), n.conclusion)
        elif n.rule is RuleId.RES:
            el.stats.resolutions += 1
            phi = n.params["phi"]
            out = weaken(el.res(prems[0], prems[1], LF(phi, n.params["k1"]), LF(phi, n.params["k2"])), n.conclusion)
        elif all(a is b for a, b in zip(prems, n.premises)):
            out = n
        else:
            out = ProofTree(n.conclusion, n.rule, n.params, tuple(prems))
        memo[id(n)] = out
    if stats is not None:
        for name in ("cuts", "resolutions", "reductions", "fallbacks"):
            setattr(stats, name, getattr(stats, name) + getattr(el.stats, name))
        for k, v in el.stats.fallback_reasons.items():
            stats.fallback_reasons[k] = stats.fallback_reasons.get(k, 0) + v
    return memo[id(proof)]
