"""Recursive-descent parser for the ``.cspl`` input dialect.

Grammar (``--`` starts a comment that runs to end of line)::

    spec     := 'alphabet' '{' [ident {',' ident}] '}' ';'
                { ident '=' proc ';' }
                'root' ident {',' ident} [';']
    proc     := 'mu' ident '.' proc | intc
    intc     := extc { '|~|' extc }
    extc     := par { '[]' par }
    par      := seq { ('[|' set '|]' | '|||') seq }
    seq      := pre { ';' pre }
    pre      := ident '->' pre | post
    post     := atom { '\\' set | '[[' ident '<-' ident {',' ident '<-' ident} ']]' }
    atom     := 'STOP' | 'SKIP' | 'DIV' | ident | '(' proc ')' | 'mu' ident '.' proc
    set      := '{' [ident {',' ident}] '}'

Binary operators are left-associative.  A ``mu`` extends as far right as
possible.  A ``;`` followed by ``ident =`` or ``root`` ends the equation.
Renaming relations are totalized over the declared alphabet.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from .terms import (
    DIV,
    SKIP,
    STOP,
    ExtChoice,
    Hide,
    IntChoice,
    Mu,
    Parallel,
    Prefix,
    Rename,
    Seq,
    Term,
    Var,
    events_of,
    subterms,
    total_renaming,
)


class ParseError(Exception):
    """Base class of front-end errors; carries a 1-based source location."""

    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line = line
        self.col = col
        where = f"{line}:{col}: " if line else ""
        super().__init__(where + message)


class CspSyntaxError(ParseError):
    pass


class UndeclaredEvent(ParseError):
    pass


class UnknownDefinition(ParseError):
    pass


class DuplicateDefinition(ParseError):
    pass


class UnknownRoot(ParseError):
    pass


@dataclass
class Spec:
    alphabet: Tuple[str, ...]
    equations: Dict[str, Term]
    roots: Tuple[str, ...]
    options: dict = field(default_factory=dict)

    @property
    def root(self) -> str:
        return self.roots[0]

    def __eq__(self, other):
        if not isinstance(other, Spec):
            return NotImplemented
        return (
            self.alphabet == other.alphabet
            and list(self.equations.items()) == list(other.equations.items())
            and self.roots == other.roots
        )


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>--[^\n]*)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<op>\|~\||\|\|\||\[\||\|\]|\[\[|\]\]|\[\]|->|<-|[{}(),;=.\\])
    """,
    re.VERBOSE,
)

KEYWORDS = {"alphabet", "root", "mu", "STOP", "SKIP", "DIV"}


@dataclass
class Token:
    kind: str  # 'ident', 'op', 'kw', 'eof'
    text: str
    line: int
    col: int


def tokenize(text: str) -> List[Token]:
    out: List[Token] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise CspSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        lexeme = m.group()
        if kind == "ident":
            out.append(Token("kw" if lexeme in KEYWORDS else "ident", lexeme, line, pos - line_start + 1))
        elif kind == "op":
            out.append(Token("op", lexeme, line, pos - line_start + 1))
        nl = lexeme.count("\n")
        if nl:
            line += nl
            line_start = pos + lexeme.rindex("\n") + 1
        pos = m.end()
    out.append(Token("eof", "", line, pos - line_start + 1))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    # -- token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, text: str) -> bool:
        t = self.tok
        return t.kind in ("op", "kw") and t.text == text

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(f"expected {text!r}")
        t = self.tok
        self.i += 1
        return t

    def ident(self) -> Token:
        if self.tok.kind != "ident":
            self.fail("expected identifier")
        t = self.tok
        self.i += 1
        return t

    def fail(self, msg: str):
        t = self.tok
        found = "end of input" if t.kind == "eof" else repr(t.text)
        raise CspSyntaxError(f"{msg}, found {found}", t.line, t.col)

    # -- spec level
    def spec(self) -> Tuple[Tuple[Token, ...], List[Tuple[Token, Term, dict]], List[Token]]:
        self.expect("alphabet")
        events = self.ident_set()
        self.expect(";")
        eqs = []
        while self.tok.kind == "ident":
            name = self.ident()
            self.expect("=")
            self.event_locs: dict = {}
            body = self.proc()
            eqs.append((name, body, self.event_locs))
            self.expect(";")
        self.expect("root")
        roots = [self.ident()]
        while self.at(","):
            self.i += 1
            roots.append(self.ident())
        if self.at(";"):
            self.i += 1
        if self.tok.kind != "eof":
            self.fail("expected end of input")
        return events, eqs, roots

    def ident_set(self) -> Tuple[Token, ...]:
        self.expect("{")
        out = []
        if not self.at("}"):
            out.append(self.ident())
            while self.at(","):
                self.i += 1
                out.append(self.ident())
        self.expect("}")
        return tuple(out)

    def note_event(self, t: Token) -> str:
        self.event_locs.setdefault(t.text, (t.line, t.col))
        return t.text

    # -- processes
    def proc(self) -> Term:
        if self.at("mu"):
            return self.mu()
        return self.intc()

    def mu(self) -> Term:
        self.expect("mu")
        name = self.ident().text
        self.expect(".")
        return Mu(name, self.proc())

    def intc(self) -> Term:
        t = self.extc()
        while self.at("|~|"):
            self.i += 1
            t = IntChoice(t, self.extc())
        return t

    def extc(self) -> Term:
        t = self.par()
        while self.at("[]"):
            self.i += 1
            t = ExtChoice(t, self.par())
        return t

    def par(self) -> Term:
        t = self.seq()
        while True:
            if self.at("[|"):
                self.i += 1
                sync = frozenset(self.note_event(e) for e in self.ident_set())
                self.expect("|]")
            elif self.at("|||"):
                self.i += 1
                sync = frozenset()
            else:
                return t
            t = Parallel(sync, t, self.seq())

    def seq_ends_here(self) -> bool:
        nxt = self.peek()
        if nxt.kind == "eof" or (nxt.kind == "kw" and nxt.text == "root"):
            return True
        after = self.peek(2)
        return nxt.kind == "ident" and after.kind == "op" and after.text == "="

    def seq(self) -> Term:
        t = self.pre()
        while self.at(";") and not self.seq_ends_here():
            self.i += 1
            t = Seq(t, self.pre())
        return t

    def pre(self) -> Term:
        if self.tok.kind == "ident" and self.peek().kind == "op" and self.peek().text == "->":
            ev = self.note_event(self.ident())
            self.i += 1
            return Prefix(ev, self.pre())
        return self.post()

    def post(self) -> Term:
        t = self.atom()
        while True:
            if self.at("\\"):
                self.i += 1
                t = Hide(frozenset(self.note_event(e) for e in self.ident_set()), t)
            elif self.at("[["):
                self.i += 1
                pairs = [self.rename_pair()]
                while self.at(","):
                    self.i += 1
                    pairs.append(self.rename_pair())
                self.expect("]]")
                t = Rename(frozenset(pairs), t)
            else:
                return t

    def rename_pair(self) -> Tuple[str, str]:
        a = self.note_event(self.ident())
        self.expect("<-")
        b = self.note_event(self.ident())
        return (a, b)

    def atom(self) -> Term:
        t = self.tok
        if t.kind == "kw":
            if t.text == "STOP":
                self.i += 1
                return STOP
            if t.text == "SKIP":
                self.i += 1
                return SKIP
            if t.text == "DIV":
                self.i += 1
                return DIV
            if t.text == "mu":
                return self.mu()
        if t.kind == "ident":
            self.i += 1
            self.var_locs.setdefault(t.text, (t.line, t.col))
            return Var(t.text)
        if self.at("("):
            self.i += 1
            inner = self.proc()
            self.expect(")")
            return inner
        self.fail("expected a process")


def _totalize(term: Term, alphabet) -> Term:
    kids = term.children()
    if kids:
        new = tuple(_totalize(k, alphabet) for k in kids)
        if any(a is not b for a, b in zip(new, kids)):
            term = term.with_children(new)
    if isinstance(term, Rename):
        return Rename(total_renaming(term.pairs, alphabet), term.body)
    return term


def parse(text: str) -> Spec:
    """Parse ``.cspl`` source into a validated :class:`Spec`."""
    p = _Parser(text)
    p.var_locs = {}
    event_toks, eqs, root_toks = p.spec()

    alphabet: List[str] = []
    for t in event_toks:
        if t.text in alphabet:
            raise DuplicateDefinition(f"event {t.text!r} declared twice", t.line, t.col)
        alphabet.append(t.text)
    declared = set(alphabet)

    equations: Dict[str, Term] = {}
    for name_tok, body, event_locs in eqs:
        name = name_tok.text
        if name in equations:
            raise DuplicateDefinition(f"process {name!r} defined twice", name_tok.line, name_tok.col)
        if name in declared:
            raise DuplicateDefinition(f"{name!r} is both an event and a process", name_tok.line, name_tok.col)
        for ev in sorted(events_of(body)):
            if ev not in declared:
                line, col = event_locs.get(ev, (name_tok.line, name_tok.col))
                raise UndeclaredEvent(f"event {ev!r} is not in the alphabet", line, col)
        equations[name] = _totalize(body, alphabet)

    for name_tok, body, _ in eqs:
        for v in sorted(body.free_vars):
            if v not in equations:
                line, col = p.var_locs.get(v, (name_tok.line, name_tok.col))
                raise UnknownDefinition(f"process {v!r} is not defined", line, col)
        for t in subterms(body):
            if isinstance(t, Mu) and t.name in declared:
                raise DuplicateDefinition(f"{t.name!r} is both an event and a variable", name_tok.line, name_tok.col)

    roots = []
    for t in root_toks:
        if t.text not in equations:
            raise UnknownRoot(f"root {t.text!r} is not defined", t.line, t.col)
        roots.append(t.text)
    return Spec(tuple(alphabet), equations, tuple(roots))


def parse_term(text: str, alphabet=None) -> Term:
    """Parse a single process expression (used by tests and generators).

    Events are not checked against an alphabet unless one is given; renaming
    relations are totalized over ``alphabet`` when it is given.
    """
    p = _Parser(text)
    p.var_locs = {}
    p.event_locs = {}
    t = p.proc()
    if p.tok.kind != "eof":
        p.fail("expected end of input")
    if alphabet is not None:
        for ev in events_of(t):
            if ev not in alphabet:
                line, col = p.event_locs.get(ev, (0, 0))
                raise UndeclaredEvent(f"event {ev!r} is not in the alphabet", line, col)
        t = _totalize(t, alphabet)
    return t
