"""Whole-proof checking: every node must be an instance of its rule."""
from __future__ import annotations

from typing import Iterable

from ..calculi import CalculusId, InferenceError, RuleId, check_inference
from ..core import Apply, Formula, LogicDef, Sequent
from .tree import ProofTree


class ProofError(ValueError):
    def __init__(self, path: tuple[int, ...], reason: str):
        self.path = tuple(path)
        self.reason = reason
        super().__init__(f"{format_path(self.path)}: {reason}")


def format_path(path: tuple[int, ...]) -> str:
    """``root`` followed by 1-based premise indices, e.g. ``root/2/1``."""
    return "/".join(["root", *(str(i) for i in path)])


def _formula_ok(logic: LogicDef, phi: Formula, seen: set) -> str | None:
    if phi in seen:
        return None
    for f in phi.subformulas():
        if isinstance(f, Apply):
            conn = logic.connectives.get(f.connective)
            if conn is None:
                return f"unknown connective {f.connective}"
            if conn.arity != len(f.args):
                return f"{f.connective} expects {conn.arity} argument(s), got {len(f.args)}"
        elif f.name in logic.connectives:
            return f"atom {f.name} clashes with a connective"
    seen.add(phi)
    return None


def sequent_problem(logic: LogicDef, s: Sequent, seen: set | None = None) -> str | None:
    seen = set() if seen is None else seen
    for lf in s.antecedent | s.succedent:
        if lf.label not in logic.values:
            return f"label {lf.label} out of range 1..{logic.n}"
        bad = _formula_ok(logic, lf.formula, seen)
        if bad:
            return bad
    return None


def check_proof(
    logic: LogicDef,
    calculus: CalculusId,
    proof: ProofTree,
    hypotheses: Iterable[Sequent] = (),
) -> None:
    """Raise :class:`ProofError` at the first bad node in pre-order.

    Shared subtrees are checked once.
    """
    calculus = CalculusId(calculus)
    hyps = frozenset(hypotheses)
    done: set[int] = set()
    seen: set = set()
    stack: list[tuple[ProofTree, tuple[int, ...]]] = [(proof, ())]
    while stack:
        node, path = stack.pop()
        if id(node) in done:
            continue
        done.add(id(node))
        bad = sequent_problem(logic, node.conclusion, seen)
        if bad:
            raise ProofError(path, bad)
        try:
            check_inference(
                logic, calculus, node.conclusion, node.rule, node.params,
                [p.conclusion for p in node.premises], hyps,
            )
        except InferenceError as e:
            raise ProofError(path, str(e)) from None
        for i in range(len(node.premises) - 1, -1, -1):
            stack.append((node.premises[i], path + (i + 1,)))


def is_valid(logic: LogicDef, calculus: CalculusId, proof: ProofTree, hypotheses: Iterable[Sequent] = ()) -> bool:
    try:
        check_proof(logic, calculus, proof, hypotheses)
    except ProofError:
        return False
    return True


def uses_hypotheses(proof: ProofTree) -> bool:
    return any(node.rule is RuleId.HYP for node in proof.unique_nodes())
