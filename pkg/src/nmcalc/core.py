"""Data model: logics given by non-deterministic truth tables, formulas,
labelled formulas and sequents.

Truth values are the indices ``1..n``. Every object here is immutable;
formulas are interned, so structurally equal formulas are the same object.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence

__all__ = [
    "Connective",
    "LogicDef",
    "InvalidLogic",
    "Formula",
    "Atom",
    "Apply",
    "LabelledFormula",
    "Sequent",
    "complement",
    "logic_violations",
    "validate_logic",
    "subformula_closure",
    "labelled_universe",
    "formula_key",
]


@dataclass(frozen=True)
class Connective:
    name: str
    arity: int
    # value tuple -> set of admissible output values
    table: Mapping[tuple[int, ...], frozenset[int]]

    def output(self, labels: Sequence[int]) -> frozenset[int]:
        return self.table[tuple(labels)]

    def entries(self) -> list[tuple[tuple[int, ...], frozenset[int]]]:
        """Table entries in ascending tuple order."""
        return sorted(self.table.items())


@dataclass(frozen=True)
class LogicDef:
    name: str
    n: int
    connectives: Mapping[str, Connective] = field(default_factory=dict)

    @property
    def values(self) -> range:
        return range(1, self.n + 1)

    def connective(self, name: str) -> Connective:
        try:
            return self.connectives[name]
        except KeyError:
            raise KeyError(f"unknown connective {name}") from None

    def output(self, conn: str, labels: Sequence[int]) -> frozenset[int]:
        return self.connectives[conn].output(labels)

    @classmethod
    def from_tables(cls, name: str, n: int, tables: Mapping[str, Mapping]) -> "LogicDef":
        """Build a logic from ``{conn: {tuple: iterable_of_values}}``.

        The arity of each connective is read off its first key; an empty
        table is taken to be unary.
        """
        conns = {}
        for cname, table in tables.items():
            norm = {tuple(k) if isinstance(k, tuple) else (k,): frozenset(v) for k, v in table.items()}
            arity = len(next(iter(norm))) if norm else 1
            conns[cname] = Connective(cname, arity, norm)
        return cls(name, n, conns)


class InvalidLogic(ValueError):
    def __init__(self, violations: list[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


def _fmt_tuple(t: Sequence[int]) -> str:
    return "(" + ",".join(str(x) for x in t) + ")"


def logic_violations(logic: LogicDef) -> list[str]:
    """Every broken invariant of ``logic``, one message each."""
    out = []
    if logic.n < 2:
        out.append(f"values must be at least 2, got {logic.n}")
    vals = set(range(1, logic.n + 1))
    for name, conn in logic.connectives.items():
        if conn.arity < 0:
            out.append(f"connective {name} has negative arity {conn.arity}")
            continue
        for key, outs in sorted(conn.table.items()):
            where = f"{name}{_fmt_tuple(key)}"
            if len(key) != conn.arity:
                out.append(f"entry {where} has {len(key)} indices, expected {conn.arity}")
                continue
            bad = [k for k in key if k not in vals]
            for k in bad:
                out.append(f"index {k} out of range 1..{logic.n} at {where}")
            if not outs:
                out.append(f"empty output set at {where}")
            for k in sorted(set(outs) - vals):
                out.append(f"index {k} out of range 1..{logic.n} in output of {where}")
        if logic.n >= 1:
            for key in product(sorted(vals), repeat=conn.arity):
                if key not in conn.table:
                    out.append(f"table not total: {name} missing {_fmt_tuple(key)}")
    return out


def validate_logic(logic: LogicDef) -> LogicDef:
    """Return ``logic`` unchanged, or raise :class:`InvalidLogic` listing every violation."""
    violations = logic_violations(logic)
    if violations:
        raise InvalidLogic(violations)
    return logic


def complement(labels: Iterable[int], n: int) -> frozenset[int]:
    return frozenset(range(1, n + 1)) - frozenset(labels)


class Formula:
    """Base of the two interned formula kinds; ordered by :func:`formula_key`."""

    __slots__ = ("_text", "_hash", "depth", "__weakref__")

    def __lt__(self, other: "Formula") -> bool:
        return formula_key(self) < formula_key(other)

    def __le__(self, other: "Formula") -> bool:
        return formula_key(self) <= formula_key(other)

    def __gt__(self, other: "Formula") -> bool:
        return formula_key(self) > formula_key(other)

    def __ge__(self, other: "Formula") -> bool:
        return formula_key(self) >= formula_key(other)

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        return self._text

    @property
    def args(self) -> tuple["Formula", ...]:
        return ()

    def subformulas(self) -> Iterator["Formula"]:
        yield self
        for a in self.args:
            yield from a.subformulas()

    def atoms(self) -> set["Atom"]:
        return {f for f in self.subformulas() if isinstance(f, Atom)}


_ATOMS: dict[str, "Atom"] = {}
_APPS: dict[tuple, "Apply"] = {}


class Atom(Formula):
    __slots__ = ("name",)

    def __new__(cls, name: str) -> "Atom":
        try:
            return _ATOMS[name]
        except KeyError:
            pass
        self = object.__new__(cls)
        self.name = name
        self.depth = 0
        self._text = name
        self._hash = hash(("atom", name))
        return _ATOMS.setdefault(name, self)

    def __repr__(self) -> str:
        return f"Atom({self.name!r})"

    def __reduce__(self):
        return (Atom, (self.name,))


class Apply(Formula):
    __slots__ = ("connective", "_args")

    def __new__(cls, connective: str, args: Sequence[Formula] = ()) -> "Apply":
        args = tuple(args)
        key = (connective, args)
        try:
            return _APPS[key]
        except KeyError:
            pass
        self = object.__new__(cls)
        self.connective = connective
        self._args = args
        self.depth = 1 + max((a.depth for a in args), default=0)
        self._text = f"{connective}(" + ", ".join(a._text for a in args) + ")"
        self._hash = hash(("apply", connective, args))
        return _APPS.setdefault(key, self)

    @property
    def args(self) -> tuple[Formula, ...]:
        return self._args

    def __repr__(self) -> str:
        return f"Apply({self.connective!r}, {list(self._args)!r})"

    def __reduce__(self):
        return (Apply, (self.connective, self._args))


def formula_key(f: Formula) -> tuple[int, str]:
    # depth first keeps every formula after its arguments
    return (f.depth, f._text)


class LabelledFormula(NamedTuple):
    formula: Formula
    label: int

    def __str__(self) -> str:
        return f"{self.formula}:{self.label}"


def _lfset(items: Iterable) -> frozenset[LabelledFormula]:
    return frozenset(x if isinstance(x, LabelledFormula) else LabelledFormula(*x) for x in items)


@dataclass(frozen=True)
class Sequent:
    """``antecedent |- succedent``; both sides are sets of labelled formulas."""

    antecedent: frozenset[LabelledFormula] = frozenset()
    succedent: frozenset[LabelledFormula] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "antecedent", _lfset(self.antecedent))
        object.__setattr__(self, "succedent", _lfset(self.succedent))

    def formulas(self) -> set[Formula]:
        return {lf.formula for lf in self.antecedent | self.succedent}

    def issubsequent(self, other: "Sequent") -> bool:
        """True when both sides are contained in the corresponding sides of ``other``."""
        return self.antecedent <= other.antecedent and self.succedent <= other.succedent

    def union(self, other: "Sequent") -> "Sequent":
        return Sequent(self.antecedent | other.antecedent, self.succedent | other.succedent)

    def add(self, ante: Iterable = (), succ: Iterable = ()) -> "Sequent":
        return Sequent(self.antecedent | _lfset(ante), self.succedent | _lfset(succ))

    def remove(self, ante: Iterable = (), succ: Iterable = ()) -> "Sequent":
        return Sequent(self.antecedent - _lfset(ante), self.succedent - _lfset(succ))

    def __str__(self) -> str:
        left = ", ".join(str(lf) for lf in sorted(self.antecedent))
        right = ", ".join(str(lf) for lf in sorted(self.succedent))
        if not left:
            return f"|- {right}" if right else "|-"
        return f"{left} |- {right}"


def subformula_closure(roots: Iterable[Formula]) -> tuple[Formula, ...]:
    """Smallest subformula-closed set containing ``roots``, arguments first."""
    seen: set[Formula] = set()
    for r in roots:
        seen.update(r.subformulas())
    return tuple(sorted(seen, key=formula_key))


def labelled_universe(closure: Iterable[Formula], logic: LogicDef) -> frozenset[LabelledFormula]:
    return frozenset(LabelledFormula(f, k) for f in closure for k in logic.values)
