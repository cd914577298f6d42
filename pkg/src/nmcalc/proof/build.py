"""Small derivations shared by search, translation and cut elimination."""
from __future__ import annotations

from typing import Any, Iterable, Mapping, Sequence

from ..calculi import CalculusId, RuleId, assemble, labelled
from ..core import Formula, LabelledFormula, LogicDef, Sequent, complement
from .tree import ProofTree

LF = LabelledFormula


def node(rule: RuleId, params: Mapping[str, Any], conclusion: Sequent, premises: Sequence[ProofTree] = ()) -> ProofTree:
    return ProofTree(conclusion, rule, dict(params), tuple(premises))


def step(logic: LogicDef, rule: RuleId, params: Mapping[str, Any], context: Sequent, premises: Sequence[ProofTree]) -> ProofTree:
    """Apply a context-sharing rule; the conclusion is built from ``context``."""
    concl, _ = assemble(logic, rule, params, context)
    return node(rule, params, concl, premises)


def axiom(lf: LF) -> ProofTree:
    s = Sequent({lf}, {lf})
    return node(RuleId.AX, {"phi": lf.formula, "k": lf.label}, s)


def weaken(proof: ProofTree, target: Sequent) -> ProofTree:
    """Extend ``proof`` by weakenings until its conclusion is ``target``."""
    concl = proof.conclusion
    if not concl.issubsequent(target):
        raise ValueError(f"cannot weaken {concl} to {target}")
    for lf in sorted(target.antecedent - concl.antecedent):
        concl = concl.add(ante=[lf])
        proof = node(RuleId.L_WEAK, {"phi": lf.formula, "k": lf.label}, concl, [proof])
    for lf in sorted(target.succedent - concl.succedent):
        concl = concl.add(succ=[lf])
        proof = node(RuleId.R_WEAK, {"phi": lf.formula, "k": lf.label}, concl, [proof])
    return proof


def derive_all_phi(logic: LogicDef, calculus: CalculusId, phi: Formula) -> ProofTree:
    """``|- phi:1, ..., phi:n`` by one L-shift of an axiom; valid in every calculus."""
    CalculusId(calculus)
    ax = axiom(LF(phi, 1))
    concl = Sequent((), labelled(phi, logic.values))
    return node(RuleId.L_SHIFT, {"phi": phi, "k": 1}, concl, [ax])


def conflict(phi: Formula, k1: int, k2: int) -> ProofTree:
    """``phi:k1, phi:k2 |-`` for ``k1 != k2``."""
    a1, a2 = LF(phi, k1), LF(phi, k2)
    return node(RuleId.R_SHIFT, {"phi": phi, "k1": k1, "k2": k2}, Sequent({a1, a2}, ()), [axiom(a1)])


def split_cases(logic: LogicDef, phi: Formula, target: Sequent, branches: Mapping[int, ProofTree]) -> ProofTree:
    """Derive ``target`` from proofs of ``target`` plus ``phi:k`` on the left, for every k.

    Starts from ``|- phi:1..n`` and cuts away one label at a time, so it uses
    exactly ``n`` cuts.
    """
    g, d = target.antecedent, target.succedent
    rest = list(logic.values)
    cur = weaken(derive_all_phi(logic, CalculusId.A, phi), Sequent(g, d | labelled(phi, rest)))
    for k in logic.values:
        rest.remove(k)
        ctx = Sequent(g, d | labelled(phi, rest))
        right = weaken(branches[k], ctx.add(ante=[LF(phi, k)]))
        cur = node(RuleId.CUT, {"phi": phi, "k": k}, ctx, [cur, right])
    return cur


def shift_out(proof: ProofTree, lf: LF, to: int) -> ProofTree:
    """R-shift ``lf`` out of the succedent, putting ``(phi, to)`` on the left."""
    c = proof.conclusion
    concl = Sequent(c.antecedent | {LF(lf.formula, to)}, c.succedent - {lf})
    return node(RuleId.R_SHIFT, {"phi": lf.formula, "k1": lf.label, "k2": to}, concl, [proof])


def labels_of(side: Iterable[LF]) -> dict[Formula, set[int]]:
    out: dict[Formula, set[int]] = {}
    for lf in side:
        out.setdefault(lf.formula, set()).add(lf.label)
    return out


def from_hypothesis(logic: LogicDef, hyp: Sequent, target: Sequent) -> ProofTree | None:
    """Derive ``target`` from the hypothesis leaf by R-shifts and weakenings, if possible.

    Succeeds when the hypothesis antecedent lies in the target antecedent and
    every hypothesis succedent member is in the target succedent or can be
    shifted left because the target antecedent gives its formula another label.
    """
    if not hyp.antecedent <= target.antecedent:
        return None
    ante = labels_of(target.antecedent)
    shifts = []
    for lf in sorted(hyp.succedent - target.succedent):
        other = sorted(ante.get(lf.formula, set()) - {lf.label})
        if not other:
            return None
        shifts.append((lf, other[0]))
    proof = node(RuleId.HYP, {}, hyp)
    for lf, to in shifts:
        proof = shift_out(proof, lf, to)
    return weaken(proof, target)
