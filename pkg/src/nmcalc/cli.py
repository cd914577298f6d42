"""Command-line front end.

Exit status: 0 success (entailed, proved, valid), 1 refuted, invalid or
discrepancies found (with a report), 2 usage or parse errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from .calculi import CalculusId, rule_schemas
from .core import LogicDef, logic_violations
from .fuzz import FuzzConfig, run_fuzz
from .proof.check import ProofError, check_proof
from .proof.cutelim import ELIMINABLE, CutElimError, CutElimStats, eliminate_cuts
from .proof.search import DEFAULT_MAX_NODES, Exhausted, Proved, SearchBudget, prove
from .proof.translate import translate_A_to_R, translate_R_to_A, translate_Rddsd_to_Add
from .semantics import Entailed, entails
from .syntax import ParseError, parse_hypotheses, parse_logic, parse_proof, parse_sequent, render_proof

OK, FAIL, USAGE = 0, 1, 2
CALCS = [c.value for c in CalculusId]
TRANSLATIONS = {
    ("A", "R"): translate_A_to_R,
    ("R", "A"): translate_R_to_A,
    ("Rddsd", "Add"): translate_Rddsd_to_Add,
}


class _UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise _UsageError(f"cannot read {path}: {e.strerror or e}") from None


def _parse_errors(where: str, e: ParseError) -> str:
    return "\n".join(f"{where}:{err.span}: {err.message}" for err in e.errors)


def _logic(path: str) -> LogicDef:
    try:
        return parse_logic(_read(path))
    except ParseError as e:
        raise _UsageError(_parse_errors(path, e)) from None


def _hypotheses(args, logic: LogicDef) -> list:
    hyps = []
    try:
        for text in args.hyp or ():
            hyps.append(parse_sequent(text, logic))
    except ParseError as e:
        raise _UsageError(_parse_errors("--hyp", e)) from None
    if args.hyp_file:
        try:
            hyps += parse_hypotheses(_read(args.hyp_file), logic)
        except ParseError as e:
            raise _UsageError(_parse_errors(args.hyp_file, e)) from None
    return hyps


def _sequent(text: str, logic: LogicDef):
    try:
        return parse_sequent(text, logic)
    except ParseError as e:
        raise _UsageError(_parse_errors("goal", e)) from None


def _proof(path: str, logic: LogicDef):
    try:
        return parse_proof(_read(path), logic)
    except ParseError as e:
        raise _UsageError(_parse_errors(path, e)) from None


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# --- commands ------------------------------------------------------------

def cmd_validate(args) -> int:
    text = _read(args.logic)
    try:
        logic = parse_logic(text)
    except ParseError as e:
        print(_parse_errors(args.logic, e))
        return FAIL
    problems = logic_violations(logic)
    if problems:
        print("\n".join(problems))
        return FAIL
    print("OK")
    return OK


def cmd_schemas(args) -> int:
    logic = _logic(args.logic)
    schemas = rule_schemas(args.calc, logic)
    if args.json:
        print(json.dumps([s.as_dict() for s in schemas], indent=2))
    else:
        print("\n\n".join(s.render() for s in schemas))
    return OK


def cmd_entails(args) -> int:
    logic = _logic(args.logic)
    hyps = _hypotheses(args, logic)
    goal = _sequent(args.goal, logic)
    verdict = entails(logic, hyps, goal)
    if isinstance(verdict, Entailed):
        print("ENTAILED")
        return OK
    print("COUNTERMODEL")
    sys.stdout.write(verdict.countermodel.render())
    return FAIL


def cmd_prove(args) -> int:
    logic = _logic(args.logic)
    hyps = _hypotheses(args, logic)
    goal = _sequent(args.goal, logic)
    budget = SearchBudget(args.max_nodes, args.analytic_cut)
    out = prove(logic, args.calc, goal, hyps, budget)
    if isinstance(out, Proved):
        _emit(render_proof(out.proof) + "\n", args.out)
        return OK
    if isinstance(out, Exhausted):
        print(f"EXHAUSTED: {out.report()}")
        return FAIL
    print("REFUTED")
    print("COUNTERMODEL")
    sys.stdout.write(out.countermodel.render())
    return FAIL


def cmd_check(args) -> int:
    logic = _logic(args.logic)
    hyps = _hypotheses(args, logic)
    proof = _proof(args.proof, logic)
    try:
        check_proof(logic, args.calc, proof, hyps)
    except ProofError as e:
        print(str(e))
        return FAIL
    print("OK")
    return OK


def cmd_translate(args) -> int:
    logic = _logic(args.logic)
    hyps = _hypotheses(args, logic)
    proof = _proof(args.proof, logic)
    fn = TRANSLATIONS.get((args.source, args.target))
    if fn is None:
        supported = ", ".join(f"{a} to {b}" for a, b in TRANSLATIONS)
        raise _UsageError(f"no translation from {args.source} to {args.target}; supported: {supported}")
    try:
        result = fn(logic, proof, hyps)
    except ProofError as e:
        print(f"input is not a valid {args.source} proof: {e}")
        return FAIL
    _emit(render_proof(result) + "\n", args.out)
    return OK


def cmd_elimcut(args) -> int:
    logic = _logic(args.logic)
    proof = _proof(args.proof, logic)
    if CalculusId(args.calc) not in ELIMINABLE:
        raise _UsageError(f"cut elimination needs one of {', '.join(c.value for c in ELIMINABLE)}")
    stats = CutElimStats()
    try:
        result = eliminate_cuts(logic, args.calc, proof, max_nodes=args.max_nodes, stats=stats)
    except ProofError as e:
        print(f"input is not a valid {args.calc} proof: {e}")
        return FAIL
    except CutElimError as e:
        print(str(e))
        return FAIL
    _emit(render_proof(result) + "\n", args.out)
    if args.stats:
        print(f"# {stats.cuts} cut(s), {stats.resolutions} resolution(s), {stats.reductions} reduction step(s), "
              f"{stats.fallbacks} re-derived", file=sys.stderr)
    return OK


def cmd_fuzz(args) -> int:
    try:
        cfg = FuzzConfig(
            seed=args.seed,
            instances=args.instances,
            max_values=args.max_values,
            max_connectives=args.max_connectives,
            max_arity=args.max_arity,
            max_formula_depth=args.max_depth,
            max_hypotheses=args.max_hypotheses,
            max_nodes=args.max_nodes,
            cut_elimination=not args.no_cutelim,
        )
    except ValueError as e:
        raise _UsageError(str(e)) from None
    report = run_fuzz(cfg)
    print(report.summary())
    if report.discrepancies:
        text = "\n".join(d.reproducer() for d in report.discrepancies)
        if args.out:
            Path(args.out).write_text(text, encoding="utf-8")
        else:
            print(text)
        return FAIL
    return OK


# --- argument parsing ------------------------------------------------------

def _add_hyp(p):
    p.add_argument("--hyp", action="append", metavar="SEQUENT", help="hypothesis sequent (repeatable)")
    p.add_argument("--hyp-file", metavar="PATH", help="file with one hypothesis sequent per line")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nmcalc", description="Sequent calculi for non-deterministic many-valued logics.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a logic file")
    p.add_argument("logic")
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("schemas", help="list the axiom and rule schemas of a calculus")
    p.add_argument("logic")
    p.add_argument("--calc", choices=CALCS, default="A")
    p.add_argument("--json", action="store_true", help="machine-readable listing")
    p.set_defaults(fn=cmd_schemas)

    p = sub.add_parser("entails", help="decide semantic entailment")
    p.add_argument("logic")
    p.add_argument("goal")
    _add_hyp(p)
    p.set_defaults(fn=cmd_entails)

    p = sub.add_parser("prove", help="search for a proof")
    p.add_argument("logic")
    p.add_argument("goal")
    p.add_argument("--calc", choices=CALCS, default="A")
    _add_hyp(p)
    p.add_argument("--max-nodes", type=int, default=DEFAULT_MAX_NODES)
    p.add_argument("--analytic-cut", action="store_true", help="search with case splits even without hypotheses")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(fn=cmd_prove)

    p = sub.add_parser("check", help="check a proof file")
    p.add_argument("logic")
    p.add_argument("proof")
    p.add_argument("--calc", choices=CALCS, default="A")
    _add_hyp(p)
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("translate", help="translate a proof to another calculus")
    p.add_argument("logic")
    p.add_argument("proof")
    p.add_argument("--from", dest="source", choices=CALCS, required=True)
    p.add_argument("--to", dest="target", choices=CALCS, required=True)
    _add_hyp(p)
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(fn=cmd_translate)

    p = sub.add_parser("elimcut", help="eliminate cuts and resolutions from a proof")
    p.add_argument("logic")
    p.add_argument("proof")
    p.add_argument("--calc", choices=CALCS, default="R")
    p.add_argument("--max-nodes", type=int, default=DEFAULT_MAX_NODES)
    p.add_argument("--stats", action="store_true", help="print reduction counts to standard error")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(fn=cmd_elimcut)

    p = sub.add_parser("fuzz", help="randomized cross-validation against the semantic oracle")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--instances", type=int, default=100)
    p.add_argument("--max-values", type=int, default=3)
    p.add_argument("--max-connectives", type=int, default=2)
    p.add_argument("--max-arity", type=int, default=2)
    p.add_argument("--max-depth", type=int, default=2)
    p.add_argument("--max-hypotheses", type=int, default=2)
    p.add_argument("--max-nodes", type=int, default=DEFAULT_MAX_NODES)
    p.add_argument("--no-cutelim", action="store_true", help="skip the cut-elimination checks")
    p.add_argument("--out", metavar="PATH", help="write reproducers here")
    p.set_defaults(fn=cmd_fuzz)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if getattr(args, "max_nodes", 1) < 1:
        print("nmcalc: --max-nodes must be at least 1", file=sys.stderr)
        return USAGE
    try:
        return args.fn(args)
    except _UsageError as e:
        print(f"nmcalc: {e}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
