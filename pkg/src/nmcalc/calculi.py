"""Axiom and rule schemas of the six calculi, instantiated from a logic's tables.

Every rule is described by :func:`instance_shape`, which returns the labelled
formulas a rule instance adds on each side of its conclusion and of each
premise; the shared context ``G |- D`` is everything else. Contexts are
matched with set semantics: ``G, A`` means ``G ∪ {A}``, so ``G`` may already
contain ``A``.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import product
from typing import Any, Iterable, Mapping, NamedTuple, Sequence

from .core import Apply, Formula, LabelledFormula, LogicDef, Sequent, complement

LF = LabelledFormula
LFSet = frozenset  # frozenset[LabelledFormula]


class CalculusId(str, Enum):
    A = "A"
    R = "R"
    ADD = "Add"
    RDD = "Rdd"
    RSD = "Rsd"
    RDDSD = "Rddsd"

    def __str__(self) -> str:
        return self.value


class RuleId(str, Enum):
    AX = "ax"
    TABLE_AX = "table_ax"
    L_SHIFT = "l_shift"
    R_SHIFT = "r_shift"
    L_WEAK = "l_weak"
    R_WEAK = "r_weak"
    CUT = "cut"
    RES = "res"
    TABLE_R = "table_r"
    DUAL_AX = "dual_ax"
    TABLE_R_DD = "table_r_dd"
    MULTI_SHIFT = "multi_shift"
    TABLE_L = "table_l"
    TABLE_L_DD = "table_l_dd"
    HYP = "hyp"

    def __str__(self) -> str:
        return self.value


STRUCTURAL = (RuleId.L_SHIFT, RuleId.R_SHIFT, RuleId.L_WEAK, RuleId.R_WEAK, RuleId.CUT, RuleId.RES)

MEMBERSHIP: dict[CalculusId, frozenset[RuleId]] = {
    CalculusId.A: frozenset({RuleId.AX, RuleId.TABLE_AX, *STRUCTURAL}),
    CalculusId.R: frozenset({RuleId.AX, RuleId.TABLE_R, *STRUCTURAL}),
    CalculusId.ADD: frozenset({RuleId.AX, RuleId.DUAL_AX, *STRUCTURAL}),
    CalculusId.RDD: frozenset({RuleId.AX, RuleId.TABLE_R_DD, *STRUCTURAL}),
    CalculusId.RSD: frozenset({RuleId.AX, RuleId.TABLE_L, RuleId.MULTI_SHIFT, *STRUCTURAL}),
    CalculusId.RDDSD: frozenset({RuleId.AX, RuleId.TABLE_L_DD, RuleId.MULTI_SHIFT, *STRUCTURAL}),
}

LEAF_RULES = frozenset({RuleId.AX, RuleId.TABLE_AX, RuleId.DUAL_AX, RuleId.HYP})

# parameter names and kinds, in canonical order
PARAM_SPEC: dict[RuleId, tuple[tuple[str, str], ...]] = {
    RuleId.AX: (("phi", "formula"), ("k", "int")),
    RuleId.TABLE_AX: (("conn", "conn"), ("args", "formulas"), ("labels", "ints")),
    RuleId.L_SHIFT: (("phi", "formula"), ("k", "int")),
    RuleId.R_SHIFT: (("phi", "formula"), ("k1", "int"), ("k2", "int")),
    RuleId.L_WEAK: (("phi", "formula"), ("k", "int")),
    RuleId.R_WEAK: (("phi", "formula"), ("k", "int")),
    RuleId.CUT: (("phi", "formula"), ("k", "int")),
    RuleId.RES: (("phi", "formula"), ("k1", "int"), ("k2", "int"), ("left", "lfs"), ("right", "lfs")),
    RuleId.TABLE_R: (("conn", "conn"), ("args", "formulas"), ("labels", "ints")),
    RuleId.DUAL_AX: (("conn", "conn"), ("args", "formulas"), ("k", "int"), ("lam", "lfs")),
    RuleId.TABLE_R_DD: (("conn", "conn"), ("args", "formulas"), ("K", "labelset")),
    RuleId.MULTI_SHIFT: (("phi", "formula"), ("K", "labelset")),
    RuleId.TABLE_L: (("conn", "conn"), ("args", "formulas"), ("k", "int")),
    RuleId.TABLE_L_DD: (("conn", "conn"), ("args", "formulas"), ("k", "int"), ("lam", "lfs")),
    RuleId.HYP: (),
}


class InferenceError(ValueError):
    """A proof step that is not an instance of the named rule."""


def lfs_key(s: Iterable[LF]) -> tuple:
    items = tuple(sorted(s))
    return (len(items), items)


def labelled(phi: Formula, labels: Iterable[int]) -> frozenset[LF]:
    return frozenset(LF(phi, k) for k in labels)


# --- table combinatorics -------------------------------------------------

def _compound(logic: LogicDef, conn: str, args: Sequence[Formula]) -> Apply:
    c = logic.connective(conn)
    if len(args) != c.arity:
        raise InferenceError(f"{conn} expects {c.arity} argument(s), got {len(args)}")
    return Apply(conn, args)


def table_axiom(logic: LogicDef, conn: str, args: Sequence[Formula], labels: Sequence[int]) -> Sequent:
    """``(A1,k1),...,(Al,kl) |- {(conn(A),k) : k in conn(k1..kl)}``."""
    phi = _compound(logic, conn, args)
    if len(labels) != len(args):
        raise InferenceError(f"{conn} expects {len(args)} label(s), got {len(labels)}")
    for k in labels:
        if k not in logic.values:
            raise InferenceError(f"label {k} out of range 1..{logic.n}")
    outs = logic.output(conn, labels)
    return Sequent({LF(a, k) for a, k in zip(args, labels)}, labelled(phi, outs))


@dataclass(frozen=True)
class InverseImage:
    """The sets ``Θ_q``: one set of argument labels per qualifying table entry."""

    sets: tuple[frozenset[LF], ...]
    tuples: tuple[tuple[int, ...], ...]

    @property
    def count(self) -> int:
        return len(self.sets)

    def __bool__(self) -> bool:
        return bool(self.sets)


def _inverse(logic, conn, args, keep) -> InverseImage:
    _compound(logic, conn, args)
    tuples, sets, seen = [], [], set()
    for key, outs in logic.connective(conn).entries():
        if keep(outs):
            theta = frozenset(LF(a, k) for a, k in zip(args, key))
            tuples.append(key)
            if theta not in seen:
                seen.add(theta)
                sets.append(theta)
    return InverseImage(tuple(sorted(sets, key=lfs_key)), tuple(tuples))


def inverse_image_point(logic: LogicDef, conn: str, args: Sequence[Formula], k: int) -> InverseImage:
    """Entries whose output set contains ``k``."""
    return _inverse(logic, conn, args, lambda outs: k in outs)


def inverse_image_set(logic: LogicDef, conn: str, args: Sequence[Formula], K: Iterable[int]) -> InverseImage:
    """Entries whose output set is exactly ``K``."""
    K = frozenset(K)
    return _inverse(logic, conn, args, lambda outs: outs == K)


def vee_product(thetas: Sequence[Iterable[LF]]) -> frozenset[frozenset[LF]]:
    """All ways of picking one member from each set, each pick collapsed to a set.

    As with any cartesian product, the product over no sets is ``{∅}`` and a
    product with an empty factor (the argument set of a nullary connective)
    is empty.
    """
    acc: set[frozenset[LF]] = {frozenset()}
    for theta in thetas:
        acc = {s | {x} for s in acc for x in theta}
    return frozenset(acc)


def vee_list(thetas: Sequence[Iterable[LF]]) -> list[frozenset[LF]]:
    return sorted(vee_product(thetas), key=lfs_key)


def dual_axiom_instances(logic: LogicDef, conn: str, args: Sequence[Formula], k: int) -> list[Sequent]:
    """``(conn(A),k) |- Λ`` for every Λ in the ⋁-product of the inverse image at ``k``."""
    phi = _compound(logic, conn, args)
    inv = inverse_image_point(logic, conn, args, k)
    return [Sequent({LF(phi, k)}, lam) for lam in vee_list(inv.sets)]


# --- rule shapes ---------------------------------------------------------

class Shape(NamedTuple):
    """Active formulas of a rule instance: ``(ante, succ)`` for conclusion and premises."""

    conclusion: tuple[frozenset[LF], frozenset[LF]]
    premises: tuple[tuple[frozenset[LF], frozenset[LF]], ...]


_E: frozenset = frozenset()


def labels_differ(k1: int, k2: int) -> bool:
    """Side condition of the shift and resolution rules."""
    return k1 != k2


def check_params(logic: LogicDef, rule: RuleId, params: Mapping[str, Any]) -> None:
    spec = PARAM_SPEC[rule]
    names = {name for name, _ in spec}
    extra = set(params) - names
    if extra:
        raise InferenceError(f"unknown parameter(s) {', '.join(sorted(extra))} for {rule}")
    for name, kind in spec:
        if name not in params:
            raise InferenceError(f"missing parameter {name} for {rule}")
        val = params[name]
        if kind == "int" and not (isinstance(val, int) and val in logic.values):
            raise InferenceError(f"parameter {name}={val} out of range 1..{logic.n}")
        if kind == "labelset" and not all(isinstance(x, int) and x in logic.values for x in val):
            raise InferenceError(f"parameter {name} not a subset of 1..{logic.n}")
        if kind == "ints" and not all(isinstance(x, int) and x in logic.values for x in val):
            raise InferenceError(f"parameter {name} has a label out of range 1..{logic.n}")
        if kind == "conn" and val not in logic.connectives:
            raise InferenceError(f"unknown connective {val}")
    if "args" in params:
        _compound(logic, params["conn"], params["args"])
    if "labels" in params and len(params["labels"]) != len(params["args"]):
        raise InferenceError(f"{params['conn']} expects {len(params['args'])} label(s), got {len(params['labels'])}")


def instance_shape(logic: LogicDef, rule: RuleId, params: Mapping[str, Any]) -> Shape:
    """Active formulas of every context-sharing rule (everything except leaves and ``res``)."""
    rule = RuleId(rule)
    check_params(logic, rule, params)
    n = logic.n
    if rule is RuleId.L_SHIFT:
        phi, k = params["phi"], params["k"]
        return Shape((_E, labelled(phi, complement({k}, n))), ((frozenset({LF(phi, k)}), _E),))
    if rule is RuleId.R_SHIFT:
        phi, k1, k2 = params["phi"], params["k1"], params["k2"]
        if not labels_differ(k1, k2):
            raise InferenceError("side condition: k1 must differ from k2")
        return Shape((frozenset({LF(phi, k2)}), _E), ((_E, frozenset({LF(phi, k1)})),))
    if rule is RuleId.L_WEAK:
        return Shape((frozenset({LF(params["phi"], params["k"])}), _E), ((_E, _E),))
    if rule is RuleId.R_WEAK:
        return Shape((_E, frozenset({LF(params["phi"], params["k"])})), ((_E, _E),))
    if rule is RuleId.CUT:
        a = frozenset({LF(params["phi"], params["k"])})
        return Shape((_E, _E), ((_E, a), (a, _E)))
    if rule is RuleId.TABLE_R:
        ax = table_axiom(logic, params["conn"], params["args"], params["labels"])
        prem = tuple((_E, frozenset({LF(a, k)})) for a, k in zip(params["args"], params["labels"]))
        return Shape((_E, ax.succedent), prem)
    if rule is RuleId.TABLE_R_DD:
        conn, args, K = params["conn"], params["args"], frozenset(params["K"])
        if not K:
            raise InferenceError("side condition: K must be non-empty")
        inv = inverse_image_set(logic, conn, args, K)
        if not inv:
            raise InferenceError(f"side condition: no entry of {conn} has output exactly {sorted(K)}")
        phi = Apply(conn, args)
        prem = tuple((_E, lam) for lam in vee_list(inv.sets))
        return Shape((_E, labelled(phi, K)), prem)
    if rule is RuleId.MULTI_SHIFT:
        phi, K = params["phi"], frozenset(params["K"])
        if len(K) >= n:
            raise InferenceError(f"side condition: K must be a proper subset of 1..{n}")
        prem = tuple((frozenset({LF(phi, k)}), _E) for k in sorted(K))
        return Shape((_E, labelled(phi, complement(K, n))), prem)
    if rule is RuleId.TABLE_L:
        conn, args, k = params["conn"], params["args"], params["k"]
        phi = Apply(conn, args)
        prem = tuple(
            (frozenset(LF(a, x) for a, x in zip(args, key)), _E)
            for key, outs in logic.connective(conn).entries()
            if k in outs
        )
        return Shape((frozenset({LF(phi, k)}), _E), prem)
    if rule is RuleId.TABLE_L_DD:
        conn, args, k, lam = params["conn"], params["args"], params["k"], frozenset(params["lam"])
        inv = inverse_image_point(logic, conn, args, k)
        if lam not in vee_product(inv.sets):
            raise InferenceError(f"side condition: {_fmt_lfs(lam)} is not a selection of the inverse image of {conn} at {k}")
        phi = Apply(conn, args)
        prem = tuple((frozenset({m}), _E) for m in sorted(lam))
        return Shape((frozenset({LF(phi, k)}), _E), prem)
    raise InferenceError(f"{rule} has no shared-context shape")


def premise_count(logic: LogicDef, rule: RuleId, params: Mapping[str, Any]) -> int:
    rule = RuleId(rule)
    if rule in LEAF_RULES:
        return 0
    if rule is RuleId.RES:
        return 2
    return len(instance_shape(logic, rule, params).premises)


def _fmt_lfs(s: Iterable[LF]) -> str:
    return "{" + ", ".join(str(x) for x in sorted(s)) + "}"


def _shared(groups: Iterable[tuple[frozenset, frozenset]]) -> bool:
    # a common context G exists iff the intersection of all sides works
    groups = list(groups)
    common = frozenset.intersection(*(side for side, _ in groups))
    return all(active <= side and side - active <= common for side, active in groups)


def context_of(shape: Shape, conclusion: Sequent, premises: Sequence[Sequent]) -> Sequent:
    """The largest shared context of an instance already known to be valid."""
    ante = frozenset.intersection(conclusion.antecedent, *(p.antecedent for p in premises))
    succ = frozenset.intersection(conclusion.succedent, *(p.succedent for p in premises))
    return Sequent(ante, succ)


def assemble(logic: LogicDef, rule: RuleId, params: Mapping[str, Any], context: Sequent) -> tuple[Sequent, list[Sequent]]:
    """Conclusion and premises of the instance of ``rule`` with the given context."""
    shape = instance_shape(logic, rule, params)
    g, d = context.antecedent, context.succedent
    concl = Sequent(g | shape.conclusion[0], d | shape.conclusion[1])
    prems = [Sequent(g | a, d | s) for a, s in shape.premises]
    return concl, prems


def check_inference(
    logic: LogicDef,
    calculus: CalculusId,
    conclusion: Sequent,
    rule: RuleId,
    params: Mapping[str, Any],
    premises: Sequence[Sequent],
    hypotheses: Iterable[Sequent] = (),
) -> None:
    """Raise :class:`InferenceError` unless the step is an instance of ``rule`` in ``calculus``."""
    try:
        rule = RuleId(rule)
    except ValueError:
        raise InferenceError(f"unknown rule id {rule}") from None
    calculus = CalculusId(calculus)
    if rule is not RuleId.HYP and rule not in MEMBERSHIP[calculus]:
        raise InferenceError(f"{rule} not in {calculus}")
    premises = list(premises)

    if rule is RuleId.HYP:
        _count(premises, 0)
        if params:
            raise InferenceError("hyp takes no parameters")
        if conclusion not in set(hypotheses):
            raise InferenceError(f"{conclusion} is not a hypothesis")
        return
    check_params(logic, rule, params)
    if rule is RuleId.AX:
        _count(premises, 0)
        a = frozenset({LF(params["phi"], params["k"])})
        if conclusion != Sequent(a, a):
            raise InferenceError(f"axiom must be {Sequent(a, a)}")
        return
    if rule is RuleId.TABLE_AX:
        _count(premises, 0)
        expected = table_axiom(logic, params["conn"], params["args"], params["labels"])
        if conclusion != expected:
            raise InferenceError(f"table axiom must be {expected}")
        return
    if rule is RuleId.DUAL_AX:
        _count(premises, 0)
        phi = Apply(params["conn"], params["args"])
        lam = frozenset(params["lam"])
        if lam not in vee_product(inverse_image_point(logic, params["conn"], params["args"], params["k"]).sets):
            raise InferenceError(f"{_fmt_lfs(lam)} is not a selection of the inverse image of {phi} at {params['k']}")
        expected = Sequent({LF(phi, params["k"])}, lam)
        if conclusion != expected:
            raise InferenceError(f"dual axiom must be {expected}")
        return
    if rule is RuleId.RES:
        _count(premises, 2)
        phi, k1, k2 = params["phi"], params["k1"], params["k2"]
        if not labels_differ(k1, k2):
            raise InferenceError("side condition: k1 must differ from k2")
        left, right = frozenset(params["left"]), frozenset(params["right"])
        p1, p2 = premises
        if not (p1.antecedent == p2.antecedent == conclusion.antecedent):
            raise InferenceError("contexts not shared")
        if p1.succedent != left | {LF(phi, k1)} or p2.succedent != right | {LF(phi, k2)}:
            raise InferenceError("premise succedents do not match the declared split")
        if conclusion.succedent != left | right:
            raise InferenceError("conclusion succedent is not the union of the split")
        return

    shape = instance_shape(logic, rule, params)
    _count(premises, len(shape.premises))
    antes = [(conclusion.antecedent, shape.conclusion[0])]
    succs = [(conclusion.succedent, shape.conclusion[1])]
    for p, (a, s) in zip(premises, shape.premises):
        antes.append((p.antecedent, a))
        succs.append((p.succedent, s))
    if not (_shared(antes) and _shared(succs)):
        raise InferenceError("contexts not shared")


def _count(premises: Sequence, expected: int) -> None:
    if len(premises) != expected:
        raise InferenceError(f"expected {expected} premise(s), got {len(premises)}")


# --- schema listings -----------------------------------------------------

@dataclass(frozen=True)
class Schema:
    rule: RuleId
    premises: tuple[str, ...]
    conclusion: str
    side: str = ""
    family: Mapping[str, Any] | None = None

    def as_dict(self) -> dict:
        d = {"rule": self.rule.value, "premises": list(self.premises), "conclusion": self.conclusion}
        if self.side:
            d["side"] = self.side
        if self.family:
            d.update({k: (sorted(v) if isinstance(v, (set, frozenset)) else v) for k, v in self.family.items()})
        return d

    def render(self) -> str:
        top = "    ".join(self.premises)
        name = str(self.rule) + (f" [{self.side}]" if self.side else "")
        width = max(len(top), len(self.conclusion))
        bar = "-" * width
        lines = [top] if top else []
        lines += [f"{bar}  {name}", self.conclusion]
        return "\n".join(lines)


_STRUCTURAL_TEXT = {
    RuleId.AX: ((), "F:k |- F:k", "k in 1..n"),
    RuleId.L_SHIFT: (("G, F:k |- D",), "G |- D, F:{k}'", "k in 1..n; {k}' is the complement"),
    RuleId.R_SHIFT: (("G |- D, F:k1",), "G, F:k2 |- D", "k1 != k2"),
    RuleId.L_WEAK: (("G |- D",), "G, F:k |- D", ""),
    RuleId.R_WEAK: (("G |- D",), "G |- D, F:k", ""),
    RuleId.CUT: (("G |- D, F:k", "G, F:k |- D"), "G |- D", ""),
    RuleId.RES: (("G |- D1, F:k1", "G |- D2, F:k2"), "G |- D1, D2", "k1 != k2"),
    RuleId.MULTI_SHIFT: (("G, F:k |- D  (k in K)",), "G |- D, F:K'", "K a proper subset of 1..n"),
}


def _metavars(arity: int) -> list:
    from .core import Atom
    return [Atom(f"a{j}") for j in range(1, arity + 1)]


def _side(lfs: Iterable[LF], prefix: str) -> str:
    body = ", ".join(str(x) for x in sorted(lfs))
    return f"{prefix}, {body}" if body else prefix


def rule_schemas(calculus: CalculusId, logic: LogicDef) -> list[Schema]:
    """Every axiom and rule schema of ``calculus``; table-derived families are expanded per entry.

    Argument formulas are written as metavariables ``a1..al``; ``G`` and ``D``
    stand for arbitrary contexts.
    """
    calculus = CalculusId(calculus)
    rules = MEMBERSHIP[calculus]
    out = []
    for rule in RuleId:
        if rule not in rules:
            continue
        if rule in _STRUCTURAL_TEXT:
            prem, concl, side = _STRUCTURAL_TEXT[rule]
            out.append(Schema(rule, prem, concl, side))
            continue
        for cname, conn in logic.connectives.items():
            args = _metavars(conn.arity)
            phi = Apply(cname, args)
            if rule in (RuleId.TABLE_AX, RuleId.TABLE_R):
                for key, _outs in conn.entries():
                    ax = table_axiom(logic, cname, args, key)
                    fam = {"conn": cname, "labels": list(key)}
                    if rule is RuleId.TABLE_AX:
                        out.append(Schema(rule, (), str(ax), family=fam))
                    else:
                        prem = tuple(f"G |- D, {LF(a, k)}" for a, k in zip(args, key))
                        out.append(Schema(rule, prem, _side(ax.succedent, "G |- D"), family=fam))
            elif rule is RuleId.DUAL_AX:
                for k in logic.values:
                    for s in dual_axiom_instances(logic, cname, args, k):
                        out.append(Schema(rule, (), str(s), family={"conn": cname, "k": k}))
            elif rule is RuleId.TABLE_R_DD:
                outsets = sorted({outs for _, outs in conn.entries()}, key=lambda s: (len(s), sorted(s)))
                for K in outsets:
                    inv = inverse_image_set(logic, cname, args, K)
                    prem = tuple(_side(lam, "G |- D") for lam in vee_list(inv.sets))
                    out.append(Schema(rule, prem, _side(labelled(phi, K), "G |- D"), family={"conn": cname, "K": sorted(K)}))
            elif rule is RuleId.TABLE_L:
                for k in logic.values:
                    shape = instance_shape(logic, rule, {"conn": cname, "args": tuple(args), "k": k})
                    prem = tuple(_side(a, "G") + " |- D" for a, _ in shape.premises)
                    out.append(Schema(rule, prem, f"G, {LF(phi, k)} |- D", family={"conn": cname, "k": k}))
            elif rule is RuleId.TABLE_L_DD:
                for k in logic.values:
                    inv = inverse_image_point(logic, cname, args, k)
                    for lam in vee_list(inv.sets):
                        prem = tuple(f"G, {m} |- D" for m in sorted(lam))
                        out.append(Schema(rule, prem, f"G, {LF(phi, k)} |- D", family={"conn": cname, "k": k, "lam": [str(m) for m in sorted(lam)]}))
    return out
