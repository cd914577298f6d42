"""Random logics, sequents and proofs, and the differential cross-check.

Everything is driven by an explicit ``random.Random`` so runs are
reproducible from a seed.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Optional, Sequence

from .calculi import (
    MEMBERSHIP,
    CalculusId,
    InferenceError,
    RuleId,
    assemble,
    check_inference,
    dual_axiom_instances,
    labelled,
    table_axiom,
)
from .core import Apply, Atom, Connective, Formula, LabelledFormula, LogicDef, Sequent, subformula_closure
from .proof.build import node, weaken
from .proof.check import ProofError, check_proof
from .proof.cutelim import ELIMINABLE, CutElimStats, eliminate_cuts
from .proof.search import Exhausted, Proved, SearchBudget, prove
from .proof.translate import translate_A_to_R, translate_R_to_A
from .proof.tree import ProofTree, count_rule_uses
from .semantics import Entailed, Refuted, entails, is_legal, legal_valuations, satisfies
from .syntax import render_hypotheses, render_logic, render_sequent

LF = LabelledFormula

CONNECTIVE_NAMES = ("f", "g", "h", "k")
# random single steps probed for local soundness per fuzz instance
STEP_SAMPLES = 10


# --- generators ----------------------------------------------------------

def random_logic(
    rng: random.Random,
    max_values: int = 3,
    max_connectives: int = 2,
    max_arity: int = 2,
    name: str = "fuzz",
) -> LogicDef:
    n = rng.randint(2, max(2, max_values))
    conns = {}
    for cname in CONNECTIVE_NAMES[: rng.randint(1, max_connectives)]:
        arity = rng.randint(0, max_arity)
        table = {}
        for key in product(range(1, n + 1), repeat=arity):
            size = rng.choice([1, 1, 1, 2, 2, n])
            table[key] = frozenset(rng.sample(range(1, n + 1), min(size, n)))
        conns[cname] = Connective(cname, arity, table)
    return LogicDef(name, n, conns)


def random_formula(rng: random.Random, logic: LogicDef, depth: int, atoms: Sequence[str] = ("p", "q")) -> Formula:
    if depth <= 0 or rng.random() < 0.3:
        conns0 = [c for c in logic.connectives.values() if c.arity == 0]
        if conns0 and rng.random() < 0.15:
            return Apply(rng.choice(conns0).name, ())
        return Atom(rng.choice(list(atoms)))
    conn = rng.choice(list(logic.connectives.values()))
    return Apply(conn.name, [random_formula(rng, logic, depth - 1, atoms) for _ in range(conn.arity)])


def random_side(rng, logic, depth, atoms, max_size=2) -> set[LF]:
    return {LF(random_formula(rng, logic, depth, atoms), rng.randint(1, logic.n)) for _ in range(rng.randint(0, max_size))}


def random_sequent(rng: random.Random, logic: LogicDef, depth: int = 2, atoms: Sequence[str] = ("p", "q")) -> Sequent:
    ante = random_side(rng, logic, depth, atoms)
    succ = random_side(rng, logic, depth, atoms, max_size=3)
    if rng.random() < 0.3 and (ante or succ):
        # add more labels of a formula already present, which often makes the goal valid
        phi = rng.choice(sorted(lf.formula for lf in ante | succ))
        succ |= {LF(phi, k) for k in logic.values if rng.random() < 0.7}
    return Sequent(ante, succ)


def random_instance(rng: random.Random, cfg: "FuzzConfig"):
    logic = random_logic(rng, cfg.max_values, cfg.max_connectives, cfg.max_arity)
    atoms = cfg.atoms
    goal = random_sequent(rng, logic, cfg.max_formula_depth, atoms)
    hyps = [random_sequent(rng, logic, cfg.max_formula_depth, atoms) for _ in range(rng.randint(0, cfg.max_hypotheses))]
    return logic, hyps, goal


def entailed_sequent(rng: random.Random, logic: LogicDef, depth: int = 2, atoms=("p", "q"), tries: int = 200) -> Sequent:
    """A random hypothesis-free valid sequent."""
    for _ in range(tries):
        s = random_sequent(rng, logic, depth, atoms)
        if isinstance(entails(logic, (), s), Entailed):
            return s
    phi = random_formula(rng, logic, depth, atoms)
    return Sequent((), labelled(phi, logic.values))


def random_proof(
    rng: random.Random,
    logic: LogicDef,
    calculus: CalculusId,
    max_nodes: int = 25,
    depth: int = 2,
    atoms=("p", "q"),
    tries: int = 50,
) -> ProofTree:
    """A checker-valid proof: a found proof of a valid sequent, sometimes extended by weakenings and shifts."""
    calculus = CalculusId(calculus)
    for _ in range(tries):
        goal = entailed_sequent(rng, logic, depth, atoms)
        out = prove(logic, calculus, goal)
        if not isinstance(out, Proved):
            continue
        p = out.proof
        for _ in range(rng.randint(0, 3)):
            p = _random_step(rng, logic, p, atoms)
        if p.size() <= max_nodes:
            return p
    phi = Atom(atoms[0])
    ax = node(RuleId.AX, {"phi": phi, "k": 1}, Sequent({LF(phi, 1)}, {LF(phi, 1)}))
    return ax


def _random_step(rng, logic, p: ProofTree, atoms) -> ProofTree:
    c = p.conclusion
    choice = rng.random()
    if choice < 0.4:
        lf = LF(random_formula(rng, logic, 1, atoms), rng.randint(1, logic.n))
        return weaken(p, c.add(succ=[lf]) if rng.random() < 0.5 else c.add(ante=[lf]))
    if choice < 0.7 and c.succedent:
        lf = rng.choice(sorted(c.succedent))
        to = rng.choice([k for k in logic.values if k != lf.label])
        concl = Sequent(c.antecedent | {LF(lf.formula, to)}, c.succedent - {lf})
        return node(RuleId.R_SHIFT, {"phi": lf.formula, "k1": lf.label, "k2": to}, concl, [p])
    if c.antecedent:
        lf = rng.choice(sorted(c.antecedent))
        concl = Sequent(c.antecedent - {lf}, c.succedent | {LF(lf.formula, k) for k in logic.values if k != lf.label})
        return node(RuleId.L_SHIFT, {"phi": lf.formula, "k": lf.label}, concl, [p])
    return p


def random_table_proof(
    rng: random.Random,
    logic: LogicDef,
    calculus: CalculusId,
    steps: int = 4,
    atoms=("p", "q"),
) -> ProofTree:
    """A table axiom (A) or its table-rule derivation (R), followed by random structural steps."""
    calculus = CalculusId(calculus)
    conn = rng.choice(list(logic.connectives.values()))
    args = tuple(random_formula(rng, logic, rng.randint(0, 1), atoms) for _ in range(conn.arity))
    key = rng.choice([k for k, _ in conn.entries()])
    p = node(RuleId.TABLE_AX, {"conn": conn.name, "args": args, "labels": key}, table_axiom(logic, conn.name, args, key))
    if calculus is CalculusId.R:
        p = translate_A_to_R(logic, p)
    elif calculus is not CalculusId.A:
        raise ValueError("table proofs are generated for A and R only")
    for _ in range(rng.randint(0, steps)):
        p = _random_step(rng, logic, p, atoms)
    return p


def proof_with_cuts(
    rng: random.Random,
    logic: LogicDef,
    calculus: CalculusId,
    goal: Sequent,
    cuts: int = 2,
    max_nodes: int = 40,
    atoms=("p", "q"),
) -> Optional[ProofTree]:
    """A proof of the valid ``goal`` with ``cuts`` injected cuts or resolutions, or None if too large."""
    calculus = CalculusId(calculus)
    closure = subformula_closure(goal.formulas() | {Atom(a) for a in atoms})
    universe = [LF(f, k) for f in closure for k in logic.values]

    def cut_free(s: Sequent) -> ProofTree:
        out = prove(logic, calculus, s)
        assert isinstance(out, Proved), s
        return out.proof

    def build(s: Sequent, budget: int) -> ProofTree:
        if budget <= 0:
            return cut_free(s)
        left_budget = rng.randint(0, budget - 1)
        right_budget = budget - 1 - left_budget
        if rng.random() < 0.6:
            a = rng.choice(universe)
            return node(
                RuleId.CUT, {"phi": a.formula, "k": a.label}, s,
                [build(s.add(succ=[a]), left_budget), build(s.add(ante=[a]), right_budget)],
            )
        phi = rng.choice(closure)
        k1, k2 = rng.sample(list(logic.values), 2)
        d = sorted(s.succedent)
        left = frozenset(x for x in d if rng.random() < 0.6)
        right = frozenset(d) - left
        p1, p2 = Sequent(s.antecedent, left | {LF(phi, k1)}), Sequent(s.antecedent, right | {LF(phi, k2)})
        if not (isinstance(entails(logic, (), p1), Entailed) and isinstance(entails(logic, (), p2), Entailed)):
            left = right = frozenset(d)
            p1, p2 = Sequent(s.antecedent, left | {LF(phi, k1)}), Sequent(s.antecedent, right | {LF(phi, k2)})
        return node(
            RuleId.RES, {"phi": phi, "k1": k1, "k2": k2, "left": left, "right": right}, s,
            [build(p1, left_budget), build(p2, right_budget)],
        )

    p = build(goal, cuts)
    return p if p.size() <= max_nodes else None


def random_cut_proof(
    rng: random.Random,
    logic: LogicDef,
    calculus: CalculusId,
    max_nodes: int = 40,
    depth: int = 1,
    atoms=("p", "q"),
    tries: int = 100,
) -> ProofTree:
    """A checker-valid proof of at most ``max_nodes`` nodes containing at least one cut or resolution."""
    for _ in range(tries):
        goal = entailed_sequent(rng, logic, depth, atoms)
        p = proof_with_cuts(rng, logic, calculus, goal, rng.randint(1, 3), max_nodes, atoms)
        if p is not None:
            return p
    raise RuntimeError("could not build a small proof with cuts")


# --- local soundness of single steps ---------------------------------------

_STEP_RULES = (RuleId.L_SHIFT, RuleId.R_SHIFT, RuleId.L_WEAK, RuleId.R_WEAK, RuleId.CUT,
               RuleId.TABLE_R, RuleId.TABLE_R_DD, RuleId.MULTI_SHIFT, RuleId.TABLE_L, RuleId.TABLE_L_DD)


def random_step_instance(rng: random.Random, logic: LogicDef, atoms=("p", "q")):
    """A random (rule, params, premises, conclusion) that may or may not be a correct instance."""
    rule = rng.choice(_STEP_RULES)
    phi = random_formula(rng, logic, 1, atoms)
    k1, k2 = rng.randint(1, logic.n), rng.randint(1, logic.n)
    conn = rng.choice(list(logic.connectives.values()))
    args = tuple(Atom(rng.choice(atoms)) for _ in range(conn.arity))
    K = frozenset(k for k in logic.values if rng.random() < 0.5)
    params = {
        RuleId.L_SHIFT: {"phi": phi, "k": k1},
        RuleId.R_SHIFT: {"phi": phi, "k1": k1, "k2": k2},
        RuleId.L_WEAK: {"phi": phi, "k": k1},
        RuleId.R_WEAK: {"phi": phi, "k": k1},
        RuleId.CUT: {"phi": phi, "k": k1},
        RuleId.TABLE_R: {"conn": conn.name, "args": args, "labels": tuple(rng.randint(1, logic.n) for _ in args)},
        RuleId.TABLE_R_DD: {"conn": conn.name, "args": args, "K": K},
        RuleId.MULTI_SHIFT: {"phi": phi, "K": K},
        RuleId.TABLE_L: {"conn": conn.name, "args": args, "k": k1},
        RuleId.TABLE_L_DD: {"conn": conn.name, "args": args, "k": k1, "lam": frozenset()},
    }[rule]
    if rule is RuleId.TABLE_L_DD:
        from .calculi import inverse_image_point, vee_list

        lams = vee_list(inverse_image_point(logic, conn.name, args, k1).sets)
        params["lam"] = rng.choice(lams) if lams else frozenset()
    ctx = Sequent(random_side(rng, logic, 1, atoms, 1), random_side(rng, logic, 1, atoms, 1))
    return rule, params, ctx


def locally_sound(logic: LogicDef, conclusion: Sequent, premises: Sequence[Sequent]) -> bool:
    roots = set(conclusion.formulas()).union(*(p.formulas() for p in premises))
    closure = subformula_closure(roots)
    for v in legal_valuations(logic, closure):
        if all(satisfies(v, p) for p in premises) and not satisfies(v, conclusion):
            return False
    return True


def step_problems(rng: random.Random, logic: LogicDef, count: int = 5, atoms=("p", "q")) -> list[str]:
    """Accepted random steps that are not locally sound."""
    out = []
    for _ in range(count):
        rule, params, ctx = random_step_instance(rng, logic, atoms)
        try:
            concl, prems = assemble(logic, rule, params, ctx)
        except InferenceError:
            continue
        calc = next(c for c in CalculusId if rule in MEMBERSHIP[c])
        try:
            check_inference(logic, calc, concl, rule, params, prems)
        except InferenceError:
            continue
        if not locally_sound(logic, concl, prems):
            out.append(f"unsound {rule} step accepted: {' ; '.join(map(str, prems))} => {concl}")
    return out


# --- differential check ----------------------------------------------------

@dataclass(frozen=True)
class FuzzConfig:
    seed: int = 0
    instances: int = 100
    max_values: int = 3
    max_connectives: int = 2
    max_arity: int = 2
    max_formula_depth: int = 2
    max_hypotheses: int = 2
    atoms: tuple[str, ...] = ("p", "q")
    max_nodes: int = 200_000
    cut_elimination: bool = True

    def __post_init__(self):
        for name in ("instances", "max_connectives", "max_arity", "max_formula_depth", "max_hypotheses", "max_nodes"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1")
        if self.max_values < 2:
            raise ValueError("max_values must be at least 2")


@dataclass
class Discrepancy:
    index: int
    problems: list[str]
    logic: LogicDef
    hypotheses: list[Sequent]
    goal: Sequent

    def reproducer(self) -> str:
        hyp = render_hypotheses(self.hypotheses)
        return (
            f"# instance {self.index}\n" + render_logic(self.logic)
            + "# hypotheses\n" + "".join(f"#   {h}" for h in hyp.splitlines(True))
            + f"# goal\n#   {render_sequent(self.goal)}\n"
            + "".join(f"# problem: {p}\n" for p in self.problems)
        )


@dataclass
class FuzzReport:
    instances: int = 0
    entailed: int = 0
    refuted: int = 0
    exhausted: int = 0
    proofs_checked: int = 0
    discrepancies: list[Discrepancy] = field(default_factory=list)
    cutelim: CutElimStats = field(default_factory=CutElimStats)

    @property
    def ok(self) -> int:
        return self.instances - len(self.discrepancies)

    def summary(self) -> str:
        return (
            f"{self.ok} ok, {len(self.discrepancies)} discrepancies "
            f"({self.entailed} entailed, {self.refuted} refuted, {self.exhausted} exhausted, "
            f"{self.proofs_checked} proofs checked, {self.cutelim.cuts + self.cutelim.resolutions} cuts eliminated, "
            f"{self.cutelim.fallbacks} re-derived)"
        )


def check_instance(
    logic: LogicDef,
    hyps: Sequence[Sequent],
    goal: Sequent,
    budget: SearchBudget = SearchBudget(),
    rng: Optional[random.Random] = None,
    report: Optional[FuzzReport] = None,
    cut_elimination: bool = True,
) -> list[str]:
    """Every disagreement between the oracle and the syntactic tools on one instance."""
    problems: list[str] = []
    hyps = list(hyps)
    verdict = entails(logic, hyps, goal)
    if isinstance(verdict, Refuted):
        cm = verdict.countermodel
        if not is_legal(cm, logic):
            problems.append("countermodel is not legal")
        if not all(satisfies(cm, h) for h in hyps):
            problems.append("countermodel violates a hypothesis")
        if satisfies(cm, goal):
            problems.append("countermodel satisfies the goal")
    proofs: dict[CalculusId, ProofTree] = {}
    for calc in CalculusId:
        out = prove(logic, calc, goal, hyps, budget)
        if isinstance(out, Exhausted):
            if report is not None:
                report.exhausted += 1
            problems.append(f"{calc}: {out.report()}")
            continue
        if isinstance(verdict, Refuted):
            if not isinstance(out, Refuted):
                problems.append(f"{calc}: proved a refuted goal")
            continue
        if not isinstance(out, Proved):
            problems.append(f"{calc}: entailed goal reported as {type(out).__name__}")
            continue
        if out.proof.conclusion != goal:
            problems.append(f"{calc}: proof concludes {out.proof.conclusion}")
        try:
            check_proof(logic, calc, out.proof, hyps)
        except ProofError as e:
            problems.append(f"{calc}: proof rejected at {e}")
            continue
        if report is not None:
            report.proofs_checked += 1
        proofs[calc] = out.proof
    problems += _translation_problems(logic, hyps, proofs)
    if cut_elimination and not hyps and isinstance(verdict, Entailed) and rng is not None:
        for calc in ELIMINABLE:
            p = proof_with_cuts(rng, logic, calc, goal, 1, max_nodes=200)
            if p is None:
                continue
            problems += _cutelim_problems(logic, calc, p, report.cutelim if report else None)
    return problems


def _translation_problems(logic, hyps, proofs) -> list[str]:
    out = []
    if CalculusId.A in proofs:
        a = proofs[CalculusId.A]
        try:
            r = translate_A_to_R(logic, a, hyps)
            check_proof(logic, CalculusId.R, r, hyps)
            if r.conclusion != a.conclusion or count_rule_uses(r, RuleId.TABLE_AX):
                out.append("A to R translation changed the conclusion or kept table axioms")
        except ProofError as e:
            out.append(f"A to R translation rejected at {e}")
    if CalculusId.R in proofs:
        r = proofs[CalculusId.R]
        try:
            a = translate_R_to_A(logic, r, hyps)
            check_proof(logic, CalculusId.A, a, hyps)
            expected = count_rule_uses(r, RuleId.CUT) + r.fold(
                lambda n: len(n.params["args"]) if n.rule is RuleId.TABLE_R else 0
            )
            if a.conclusion != r.conclusion or count_rule_uses(a, RuleId.TABLE_R) or count_rule_uses(a, RuleId.CUT) != expected:
                out.append("R to A translation changed the conclusion, kept table rules or used the wrong number of cuts")
        except ProofError as e:
            out.append(f"R to A translation rejected at {e}")
    return out


def _cutelim_problems(logic, calc, p, stats) -> list[str]:
    try:
        q = eliminate_cuts(logic, calc, p, stats=stats)
        check_proof(logic, calc, q)
    except (ProofError, ValueError) as e:
        return [f"{calc}: cut elimination failed: {e}"]
    if q.conclusion != p.conclusion:
        return [f"{calc}: cut elimination changed the conclusion"]
    if count_rule_uses(q, RuleId.CUT) or count_rule_uses(q, RuleId.RES):
        return [f"{calc}: cut elimination left cuts behind"]
    return []


# --- shrinking -----------------------------------------------------------

def _replace_formula(s: Sequent, old: Formula, new: Formula) -> Sequent:
    def sub(f: Formula) -> Formula:
        if f is old:
            return new
        if isinstance(f, Apply):
            return Apply(f.connective, [sub(a) for a in f.args])
        return f

    return Sequent({LF(sub(x.formula), x.label) for x in s.antecedent}, {LF(sub(x.formula), x.label) for x in s.succedent})


def _drop_value(logic: LogicDef, hyps, goal):
    n = logic.n
    if n <= 2:
        return None
    conns = {}
    for c in logic.connectives.values():
        table = {}
        for key, outs in c.table.items():
            if n in key:
                continue
            table[key] = (outs - {n}) or frozenset({1})
        conns[c.name] = Connective(c.name, c.arity, table)
    small = LogicDef(logic.name, n - 1, conns)
    keep = lambda side: {x for x in side if x.label != n}
    return small, [Sequent(keep(h.antecedent), keep(h.succedent)) for h in hyps], Sequent(keep(goal.antecedent), keep(goal.succedent))


def _candidates(logic, hyps, goal):
    for i in range(len(hyps)):
        yield logic, hyps[:i] + hyps[i + 1:], goal
    dropped = _drop_value(logic, hyps, goal)
    if dropped:
        yield dropped
    seqs = [goal] + list(hyps)
    for idx, s in enumerate(seqs):
        for side in ("antecedent", "succedent"):
            for lf in sorted(getattr(s, side)):
                t = s.remove(**{"ante" if side == "antecedent" else "succ": [lf]})
                new = seqs[:idx] + [t] + seqs[idx + 1:]
                yield logic, new[1:], new[0]
    forms = set(goal.formulas()).union(*(h.formulas() for h in hyps))
    for f in sorted(forms, key=lambda f: -f.depth):
        if isinstance(f, Apply):
            for a in set(f.args):
                yield logic, [_replace_formula(h, f, a) for h in hyps], _replace_formula(goal, f, a)


def shrink(logic: LogicDef, hyps: list[Sequent], goal: Sequent, failing, max_steps: int = 200):
    """Greedily simplify an instance while ``failing(logic, hyps, goal)`` stays true."""
    for _ in range(max_steps):
        for cand in _candidates(logic, hyps, goal):
            if failing(*cand):
                logic, hyps, goal = cand
                break
        else:
            break
    return logic, hyps, goal


def run_fuzz(cfg: FuzzConfig, log=None) -> FuzzReport:
    rng = random.Random(cfg.seed)
    report = FuzzReport()
    budget = SearchBudget(cfg.max_nodes)
    for i in range(cfg.instances):
        logic, hyps, goal = random_instance(rng, cfg)
        sub_rng = random.Random(rng.random())
        problems = check_instance(logic, hyps, goal, budget, sub_rng, report, cfg.cut_elimination)
        problems += step_problems(sub_rng, logic, STEP_SAMPLES, cfg.atoms)
        report.instances += 1
        if isinstance(entails(logic, hyps, goal), Entailed):
            report.entailed += 1
        else:
            report.refuted += 1
        if problems:
            def failing(lg, hs, g):
                return bool(check_instance(lg, hs, g, budget, random.Random(0), None, False)
                            + step_problems(random.Random(0), lg, 3 * STEP_SAMPLES, cfg.atoms))
            if failing(logic, hyps, goal):
                logic, hyps, goal = shrink(logic, hyps, goal, failing)
            report.discrepancies.append(Discrepancy(i, problems, logic, list(hyps), goal))
            if log:
                log(f"instance {i}: {len(problems)} problem(s)")
    return report
