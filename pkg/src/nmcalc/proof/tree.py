from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterator, Mapping

from ..calculi import RuleId
from ..core import Sequent


@dataclass(frozen=True, eq=True)
class ProofTree:
    conclusion: Sequent
    rule: RuleId
    params: Mapping[str, Any] = field(default_factory=dict)
    premises: tuple["ProofTree", ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "rule", RuleId(self.rule))
        object.__setattr__(self, "premises", tuple(self.premises))

    def nodes(self) -> Iterator["ProofTree"]:
        """Pre-order traversal; shared subproofs are visited once per occurrence."""
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.premises))

    def unique_nodes(self) -> Iterator["ProofTree"]:
        """Each distinct node object once, even when subproofs are shared."""
        seen: set[int] = set()
        stack = [self]
        while stack:
            node = stack.pop()
            if id(node) in seen:
                continue
            seen.add(id(node))
            yield node
            stack.extend(reversed(node.premises))

    def fold(self, leaf_value) -> int:
        """Sum of ``leaf_value(node)`` over all node occurrences, shared subproofs counted per use."""
        memo: dict[int, int] = {}
        for node in _postorder(self):
            memo[id(node)] = leaf_value(node) + sum(memo[id(p)] for p in node.premises)
        return memo[id(self)]

    def size(self) -> int:
        return self.fold(lambda node: 1)

    def height(self) -> int:
        memo: dict[int, int] = {}
        for node in _postorder(self):
            memo[id(node)] = 1 + max((memo[id(p)] for p in node.premises), default=0)
        return memo[id(self)]


def _postorder(root: ProofTree) -> list[ProofTree]:
    """Distinct nodes, every node after all of its premises."""
    out: list[ProofTree] = []
    seen: set[int] = set()
    stack: list[tuple[ProofTree, bool]] = [(root, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            out.append(node)
            continue
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.append((node, True))
        stack.extend((p, False) for p in reversed(node.premises))
    return out


def count_rule_uses(proof: ProofTree, rule: RuleId) -> int:
    rule = RuleId(rule)
    return proof.fold(lambda node: int(node.rule is rule))
