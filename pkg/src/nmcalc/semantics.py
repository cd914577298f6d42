"""Legal valuations, satisfaction and brute-force entailment.

Valuations live on finite subformula-closed domains. Every legal valuation
on such a domain extends to any larger closed domain (table outputs are
never empty), so entailment can be decided on the joint closure of the
hypotheses and the goal.

Enumeration order is lexicographic over the domain in closure order: the
first formula varies slowest and each value is tried in ascending order.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional, Sequence, Union

from .core import Apply, Formula, LogicDef, Sequent, subformula_closure

__all__ = [
    "Valuation",
    "Entailed",
    "Refuted",
    "Verdict",
    "is_legal",
    "legal_valuations",
    "satisfies",
    "entails",
]


@dataclass(frozen=True)
class Valuation:
    domain: tuple[Formula, ...]
    values: tuple[int, ...]

    @classmethod
    def from_mapping(cls, mapping: Mapping[Formula, int]) -> "Valuation":
        domain = subformula_closure(mapping)
        if set(domain) != set(mapping):
            missing = sorted(set(domain) - set(mapping))
            raise ValueError(f"domain not subformula-closed: missing {missing[0]}")
        return cls(domain, tuple(mapping[f] for f in domain))

    def as_dict(self) -> dict[Formula, int]:
        return dict(zip(self.domain, self.values))

    def __getitem__(self, phi: Formula) -> int:
        try:
            return self.values[self.domain.index(phi)]
        except ValueError:
            raise KeyError(phi) from None

    def __contains__(self, phi: Formula) -> bool:
        return phi in self.domain

    def render(self) -> str:
        return "".join(f"{f} = {k}\n" for f, k in zip(self.domain, self.values))

    def __str__(self) -> str:
        return "{" + ", ".join(f"{f}={k}" for f, k in zip(self.domain, self.values)) + "}"


def is_legal(v: Valuation, logic: LogicDef) -> bool:
    vals = v.as_dict()
    for phi, k in vals.items():
        if k not in logic.values:
            return False
        if isinstance(phi, Apply):
            try:
                arg_vals = [vals[a] for a in phi.args]
            except KeyError as e:
                raise ValueError(f"domain not subformula-closed: missing {e.args[0]}") from None
            if k not in logic.output(phi.connective, arg_vals):
                return False
    return True


def _choices(logic: LogicDef, closure: Sequence[Formula]):
    """Per position: ``(table, argument positions)`` for a compound, ``None`` for an atom."""
    index = {f: i for i, f in enumerate(closure)}
    all_vals = tuple(logic.values)
    out = []
    for f in closure:
        if isinstance(f, Apply):
            table = logic.connective(f.connective).table
            pos = tuple(index[a] for a in f.args)
            out.append((table, pos))
        else:
            out.append(None)
    return out, all_vals


def _dfs(logic: LogicDef, closure: Sequence[Formula], prefix: tuple[int, ...] = (), accept=None) -> Iterator[list[int]]:
    """Yield legal assignments extending ``prefix`` in lexicographic order.

    ``accept(i, partial)`` may prune a branch once position ``i`` is filled.
    The yielded list is reused between iterations; copy it to keep it.
    """
    choices, all_vals = _choices(logic, closure)
    m = len(closure)
    cur = list(prefix)

    def options(i):
        c = choices[i]
        if c is None:
            return all_vals
        table, pos = c
        return sorted(table[tuple(cur[j] for j in pos)])

    base = len(prefix)
    if m == base:
        yield cur
        return
    stack = [iter(options(base))]
    while stack:
        depth = base + len(stack) - 1
        nxt = next(stack[-1], None)
        if nxt is None:
            stack.pop()
            if stack:
                cur.pop()
            continue
        cur.append(nxt)
        if accept is not None and not accept(depth, cur):
            cur.pop()
            continue
        if depth + 1 == m:
            yield cur
            cur.pop()
            continue
        stack.append(iter(options(depth + 1)))


def legal_valuations(logic: LogicDef, closure: Sequence[Formula]) -> Iterator[Valuation]:
    closure = tuple(closure)
    for vals in _dfs(logic, closure):
        yield Valuation(closure, tuple(vals))


def satisfies(v: Valuation, s: Sequent) -> bool:
    vals = v.as_dict()
    for lf in s.antecedent | s.succedent:
        if lf.formula not in vals:
            raise ValueError(f"formula outside domain: {lf.formula}")
    if any(vals[lf.formula] != lf.label for lf in s.antecedent):
        return True
    return any(vals[lf.formula] == lf.label for lf in s.succedent)


@dataclass(frozen=True)
class Entailed:
    def __bool__(self) -> bool:
        return True


@dataclass(frozen=True)
class Refuted:
    countermodel: Valuation

    def __bool__(self) -> bool:
        return False


Verdict = Union[Entailed, Refuted]


def _compile(closure: Sequence[Formula], s: Sequent):
    index = {f: i for i, f in enumerate(closure)}
    ante = tuple((index[lf.formula], lf.label) for lf in s.antecedent)
    succ = tuple((index[lf.formula], lf.label) for lf in s.succedent)
    last = max((i for i, _ in ante + succ), default=-1)
    return ante, succ, last


def _sat(cur, ante, succ) -> bool:
    for i, k in ante:
        if cur[i] != k:
            return True
    for i, k in succ:
        if cur[i] == k:
            return True
    return False


def _first_countermodel(logic, closure, hypotheses, goal, prefix=()) -> Optional[tuple[int, ...]]:
    hyps = [_compile(closure, h) for h in hypotheses]
    g_ante, g_succ, g_last = _compile(closure, goal)
    # sequents become decidable once their last formula is assigned
    checks: dict[int, list] = {}
    for ante, succ, last in hyps:
        checks.setdefault(last, []).append((ante, succ, True))
    checks.setdefault(g_last, []).append((g_ante, g_succ, False))
    if -1 in checks:
        for ante, succ, want in checks.pop(-1):
            if _sat((), ante, succ) != want:
                return None

    def accept(i, cur):
        for ante, succ, want in checks.get(i, ()):
            if _sat(cur, ante, succ) != want:
                return False
        return True

    for j in range(len(prefix)):
        if not accept(j, list(prefix[: j + 1])):
            return None
    for vals in _dfs(logic, closure, tuple(prefix), accept):
        return tuple(vals)
    return None


def _worker(args):
    return _first_countermodel(*args)


def entails(
    logic: LogicDef,
    hypotheses: Iterable[Sequent],
    goal: Sequent,
    workers: int = 1,
) -> Verdict:
    """Decide whether every legal valuation satisfying all hypotheses satisfies ``goal``.

    On failure the countermodel returned is the first one in enumeration
    order. With ``workers > 1`` the search is split on the value of the
    first closure formula; the verdict does not depend on the split.
    """
    hypotheses = tuple(hypotheses)
    roots = set(goal.formulas())
    for h in hypotheses:
        roots |= h.formulas()
    closure = subformula_closure(roots)
    found = None
    if workers > 1 and closure:
        jobs = [(logic, closure, hypotheses, goal, (k,)) for k in logic.values]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for res in pool.map(_worker, jobs):
                if res is not None:
                    found = res
                    break
    else:
        found = _first_countermodel(logic, closure, hypotheses, goal)
    if found is None:
        return Entailed()
    return Refuted(Valuation(closure, found))
