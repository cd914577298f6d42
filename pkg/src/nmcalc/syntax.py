"""Text formats: logic files (.mvl), formulas, sequents, hypothesis files and proofs.

All renderers emit a canonical ASCII form that the parsers read back to an
equal value. Parse failures raise :class:`ParseError` carrying a
:class:`SourceSpan`; the logic parser reports every error it finds at once
(see ``ParseError.errors``).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Any, Iterable, Mapping, Optional

from .calculi import PARAM_SPEC, InferenceError, RuleId, premise_count
from .core import Apply, Atom, Connective, Formula, LabelledFormula, LogicDef, Sequent
from .proof.tree import ProofTree

__all__ = [
    "SourceSpan",
    "ParseError",
    "parse_logic",
    "render_logic",
    "parse_formula",
    "render_formula",
    "parse_labelled",
    "parse_sequent",
    "render_sequent",
    "parse_hypotheses",
    "render_hypotheses",
    "parse_proof",
    "render_proof",
]

ATOM_RE = re.compile(r"[a-z][a-z0-9_]*\Z")


@dataclass(frozen=True)
class SourceSpan:
    line: int
    column: int
    length: int = 1

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


class ParseError(ValueError):
    def __init__(self, span: SourceSpan, message: str, expected: Optional[str] = None, errors=None):
        self.span = span
        self.message = message or "parse error"
        self.expected = expected
        self.errors: list[ParseError] = list(errors) if errors else [self]
        super().__init__(f"{span}: {self.message}")


# --- tokens --------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\f\v]+)
  | (?P<nl>\n)
  | (?P<turnstile>\|-)
  | (?P<arrow>->)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<int>[0-9]+)
  | (?P<string>"[^"\n]*")
  | (?P<punct>[(){}\[\],:=])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    span: SourceSpan


def tokenize(text: str, line: int = 1, column: int = 1) -> list[Token]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(SourceSpan(line, column), f"unexpected character {text[pos]!r}")
        kind = m.lastgroup
        tok = m.group()
        if kind == "nl":
            line, column = line + 1, 1
        else:
            if kind != "ws":
                out.append(Token(tok if kind == "punct" else kind, tok, SourceSpan(line, column, len(tok))))
            column += len(tok)
        pos = m.end()
    out.append(Token("eof", "", SourceSpan(line, column, 0)))
    return out


def _describe(tok: Token) -> str:
    return "end of input" if tok.kind == "eof" else repr(tok.text)


class _Stream:
    def __init__(self, tokens: list[Token], logic: Optional[LogicDef] = None):
        self.toks = tokens
        self.i = 0
        self.logic = logic

    @property
    def peek(self) -> Token:
        return self.toks[self.i]

    def next(self) -> Token:
        tok = self.toks[self.i]
        if tok.kind != "eof":
            self.i += 1
        return tok

    def accept(self, kind: str) -> Optional[Token]:
        if self.peek.kind == kind:
            return self.next()
        return None

    def expect(self, kind: str, what: Optional[str] = None) -> Token:
        tok = self.peek
        if tok.kind != kind:
            what = what or f"'{kind}'"
            raise ParseError(tok.span, f"expected {what}, found {_describe(tok)}", expected=what)
        return self.next()

    def end(self) -> None:
        tok = self.peek
        if tok.kind != "eof":
            raise ParseError(tok.span, f"unexpected {_describe(tok)}", expected="end of input")

    # formulas

    def formula(self) -> Formula:
        tok = self.expect("ident", "a formula")
        conns = self.logic.connectives if self.logic is not None else {}
        if tok.text in conns:
            conn = conns[tok.text]
            if self.peek.kind != "(":
                raise ParseError(self.peek.span, "expected '('", expected="'('")
            self.next()
            args = []
            if self.peek.kind != ")":
                args.append(self.formula())
                while self.accept(","):
                    args.append(self.formula())
            self.expect(")", "')'")
            if len(args) != conn.arity:
                plural = "argument" if conn.arity == 1 else "arguments"
                raise ParseError(tok.span, f"{conn.name} expects {conn.arity} {plural}, got {len(args)}")
            return Apply(conn.name, args)
        if self.peek.kind == "(":
            raise ParseError(tok.span, f"unknown connective {tok.text}")
        if not ATOM_RE.match(tok.text):
            raise ParseError(tok.span, f"invalid atom name {tok.text}; atoms are lowercase identifiers")
        return Atom(tok.text)

    def label(self) -> int:
        tok = self.expect("int", "a label")
        k = int(tok.text)
        if self.logic is not None and not 1 <= k <= self.logic.n:
            raise ParseError(tok.span, f"label {k} out of range 1..{self.logic.n}")
        return k

    def labelled(self) -> LabelledFormula:
        phi = self.formula()
        self.expect(":", "':'")
        return LabelledFormula(phi, self.label())

    def side(self, stop: str) -> set[LabelledFormula]:
        out = set()
        if self.peek.kind in (stop, "eof"):
            return out
        out.add(self.labelled())
        while self.accept(","):
            out.add(self.labelled())
        return out

    def sequent(self) -> Sequent:
        ante = self.side("turnstile")
        self.expect("turnstile", "'|-'")
        succ = self.side("eof")
        return Sequent(ante, succ)


def _text(text) -> str:
    if isinstance(text, (bytes, bytearray)):
        return bytes(text).decode("utf-8", errors="replace")
    return text


def _run(text, logic: Optional[LogicDef], fn, line: int = 1, column: int = 1):
    s = _Stream(tokenize(_text(text), line, column), logic)
    try:
        value = fn(s)
    except RecursionError:
        raise ParseError(s.peek.span, "input nested too deeply") from None
    s.end()
    return value


# --- formulas and sequents -------------------------------------------------

def parse_formula(text: str, logic: LogicDef) -> Formula:
    return _run(text, logic, _Stream.formula)


def render_formula(phi: Formula) -> str:
    return str(phi)


def parse_labelled(text: str, logic: LogicDef) -> LabelledFormula:
    return _run(text, logic, _Stream.labelled)


def parse_sequent(text: str, logic: LogicDef) -> Sequent:
    return _run(text, logic, _Stream.sequent)


def render_sequent(s: Sequent) -> str:
    return str(s)


def parse_hypotheses(text: str, logic: LogicDef) -> list[Sequent]:
    """One sequent per non-blank line; ``#`` starts a comment."""
    out = []
    for lineno, raw in enumerate(_text(text).splitlines(), 1):
        body = raw.split("#", 1)[0]
        if body.strip():
            out.append(_run(body, logic, _Stream.sequent, line=lineno))
    return out


def render_hypotheses(hyps: Iterable[Sequent]) -> str:
    return "".join(f"{render_sequent(h)}\n" for h in hyps)


# --- logic files ---------------------------------------------------------

def parse_logic(text: str) -> LogicDef:
    """Parse the line-oriented ``.mvl`` format, collecting every error found."""
    text = _text(text)
    errors: list[ParseError] = []
    name: Optional[str] = None
    n: Optional[int] = None
    conns: dict[str, Connective] = {}
    block: Optional[dict] = None
    last = SourceSpan(1, 1)

    def err(span, msg, expected=None):
        errors.append(ParseError(span, msg, expected))

    def close(block, span):
        if n is not None:
            from itertools import product as _product

            for key in _product(range(1, n + 1), repeat=block["arity"]):
                if key not in block["table"]:
                    shown = "(" + ",".join(map(str, key)) + ")"
                    err(span, f"table not total: {block['name']} missing {shown}")
        if block["name"] in conns or block["dup"]:
            return
        conns[block["name"]] = Connective(block["name"], block["arity"], dict(block["table"]))

    for lineno, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0]
        try:
            toks = tokenize(body, lineno)
        except ParseError as e:
            errors.append(e)
            continue
        if toks[0].kind == "eof":
            continue
        head = toks[0]
        last = head.span
        try:
            if block is not None:
                if head.kind == "ident" and head.text == "end":
                    if toks[1].kind != "eof":
                        err(toks[1].span, f"unexpected {_describe(toks[1])} after end")
                    close(block, head.span)
                    block = None
                    continue
                _table_line(toks, block, n, err)
                continue
            if head.kind != "ident":
                err(head.span, f"unexpected {_describe(head)}", "logic, values or conn")
                continue
            if head.text == "logic":
                s = _Stream(toks[1:])
                tok = s.expect("ident", "a logic name")
                s.end()
                if name is not None:
                    err(head.span, "duplicate logic declaration")
                name = tok.text
            elif head.text == "values":
                s = _Stream(toks[1:])
                tok = s.expect("int", "the number of values")
                s.end()
                if n is not None:
                    err(head.span, "duplicate values declaration")
                n = int(tok.text)
                if n < 2:
                    err(tok.span, f"values must be at least 2, got {n}")
            elif head.text == "conn":
                s = _Stream(toks[1:])
                ctok = s.expect("ident", "a connective name")
                atok = s.expect("int", "an arity")
                s.end()
                if n is None:
                    err(head.span, "conn before values declaration")
                dup = ctok.text in conns
                if dup:
                    err(ctok.span, f"duplicate connective {ctok.text}")
                block = {"name": ctok.text, "arity": int(atok.text), "table": {}, "dup": dup}
            else:
                err(head.span, f"unknown directive {head.text}", "logic, values or conn")
        except ParseError as e:
            errors.append(e)
    if block is not None:
        err(last, f"missing end for connective {block['name']}", "'end'")
        close(block, last)
    if name is None and not errors:
        err(SourceSpan(1, 1), "missing logic declaration", "'logic <name>'")
    if n is None and not errors:
        err(SourceSpan(1, 1), "missing values declaration", "'values <n>'")
    if errors:
        raise ParseError(errors[0].span, errors[0].message, errors[0].expected, errors=errors)
    return LogicDef(name, n, conns)


def _table_line(toks: list[Token], block: dict, n: Optional[int], err) -> None:
    s = _Stream(toks)
    key = []
    while s.peek.kind == "int":
        key.append(s.next())
    s.expect("arrow", "'->'")
    outs = []
    if s.peek.kind == "int":
        outs.append(s.next())
        while s.accept(","):
            outs.append(s.expect("int", "an output value"))
    s.end()
    where = f"{block['name']}(" + ",".join(t.text for t in key) + ")"
    ok = True
    if len(key) != block["arity"]:
        err(toks[0].span, f"{block['name']} expects {block['arity']} indices, got {len(key)}")
        ok = False
    for t in key + outs:
        if n is not None and not 1 <= int(t.text) <= n:
            err(t.span, f"index {t.text} out of range 1..{n}")
            ok = False
    if not outs:
        err(toks[-1].span, f"empty output set at {where}")
        ok = False
    tkey = tuple(int(t.text) for t in key)
    if tkey in block["table"]:
        err(toks[0].span, f"duplicate entry {where}")
        ok = False
    if ok or (len(key) == block["arity"] and tkey not in block["table"]):
        # recorded even when malformed so it is not also reported as missing
        block["table"][tkey] = frozenset(int(t.text) for t in outs)


def render_logic(logic: LogicDef) -> str:
    lines = [f"logic {logic.name}", f"values {logic.n}"]
    for conn in logic.connectives.values():
        lines.append(f"conn {conn.name} {conn.arity}")
        for key, outs in conn.entries():
            lhs = " ".join(map(str, key))
            rhs = ",".join(map(str, sorted(outs)))
            lines.append(f"{lhs} -> {rhs}" if lhs else f"-> {rhs}")
        lines.append("end")
    return "\n".join(lines) + "\n"


# --- proofs --------------------------------------------------------------

def _render_value(kind: str, value: Any) -> str:
    if kind == "formula":
        return str(value)
    if kind in ("int", "conn"):
        return str(value)
    if kind == "formulas":
        return "[" + ", ".join(str(f) for f in value) + "]"
    if kind == "ints":
        return "[" + ", ".join(str(k) for k in value) + "]"
    if kind == "labelset":
        return "[" + ", ".join(str(k) for k in sorted(value)) + "]"
    if kind == "lfs":
        return "[" + ", ".join(str(x) for x in sorted(value)) + "]"
    raise ValueError(kind)


def _parse_value(s: _Stream, kind: str) -> Any:
    if kind == "formula":
        return s.formula()
    if kind == "int":
        return s.label()
    if kind == "conn":
        tok = s.expect("ident", "a connective name")
        if tok.text not in s.logic.connectives:
            raise ParseError(tok.span, f"unknown connective {tok.text}")
        return tok.text
    s.expect("[", "'['")
    items = []
    item = {"formulas": s.formula, "ints": s.label, "labelset": s.label, "lfs": s.labelled}[kind]
    if s.peek.kind != "]":
        items.append(item())
        while s.accept(","):
            items.append(item())
    s.expect("]", "']'")
    if kind in ("formulas", "ints"):
        return tuple(items)
    return frozenset(items)


def _proof_node(s: _Stream) -> ProofTree:
    start = s.expect("(", "'('")
    tok = s.expect("ident", "a rule id")
    try:
        rule = RuleId(tok.text)
    except ValueError:
        raise ParseError(tok.span, f"unknown rule id {tok.text}") from None
    spec = dict(PARAM_SPEC[rule])
    s.expect("{", "'{'")
    params: dict[str, Any] = {}
    if s.peek.kind != "}":
        while True:
            key = s.expect("ident", "a parameter name")
            if key.text not in spec:
                raise ParseError(key.span, f"unknown parameter {key.text} for {rule}")
            if key.text in params:
                raise ParseError(key.span, f"duplicate parameter {key.text}")
            s.expect("=", "'='")
            params[key.text] = _parse_value(s, spec[key.text])
            if not s.accept(","):
                break
    s.expect("}", "'}'")
    missing = [k for k in spec if k not in params]
    if missing:
        raise ParseError(tok.span, f"missing parameter {missing[0]} for {rule}")
    qtok = s.expect("string", "a quoted sequent")
    concl = _run(qtok.text[1:-1], s.logic, _Stream.sequent, qtok.span.line, qtok.span.column + 1)
    premises = []
    while s.peek.kind == "(":
        premises.append(_proof_node(s))
    s.expect(")", "')'")
    try:
        expected = premise_count(s.logic, rule, params)
    except InferenceError as e:
        raise ParseError(tok.span, f"malformed parameters: {e}") from None
    if expected != len(premises):
        raise ParseError(start.span, f"{rule} expects {expected} premise(s), got {len(premises)}")
    return ProofTree(concl, rule, params, tuple(premises))


def parse_proof(text: str, logic: LogicDef) -> ProofTree:
    return _run(text, logic, _proof_node)


def render_proof(proof: ProofTree, indent: int = 0) -> str:
    spec = PARAM_SPEC[proof.rule]
    params = ", ".join(f"{k}={_render_value(kind, proof.params[k])}" for k, kind in spec)
    head = " " * indent + f'({proof.rule} {{{params}}} "{render_sequent(proof.conclusion)}"'
    if not proof.premises:
        return head + ")"
    body = "\n".join(render_proof(p, indent + 2) for p in proof.premises)
    return head + "\n" + body + ")"
