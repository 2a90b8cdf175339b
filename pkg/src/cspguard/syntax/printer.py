"""Pretty-printer for terms and specs in the ``.cspl`` dialect.

Output re-parses to an equal value; see ``parser`` for the precedence table.
"""

from __future__ import annotations

from .terms import (
    Div,
    ExtChoice,
    Hide,
    IntChoice,
    Mu,
    Parallel,
    Prefix,
    Rename,
    Seq,
    Skip,
    Stop,
    Term,
    Var,
)

# smaller binds tighter
ATOM, POSTFIX, PREFIX, SEQ, PAR, EXT, INT, MU = range(8)

_BINARY = {Seq: (SEQ, ";"), ExtChoice: (EXT, "[]"), IntChoice: (INT, "|~|")}


def event_set(events) -> str:
    return "{" + ",".join(sorted(events)) + "}"


def _level(t: Term) -> int:
    if isinstance(t, (Stop, Skip, Div, Var)):
        return ATOM
    if isinstance(t, (Hide, Rename)):
        return POSTFIX
    if isinstance(t, Prefix):
        return PREFIX
    if isinstance(t, Parallel):
        return PAR
    if isinstance(t, Mu):
        return MU
    return _BINARY[type(t)][0]


def _wrap(t: Term, max_level: int) -> str:
    s = print_term(t)
    if _level(t) > max_level:
        return "(" + s + ")"
    return s


def print_term(t: Term) -> str:
    if isinstance(t, Stop):
        return "STOP"
    if isinstance(t, Skip):
        return "SKIP"
    if isinstance(t, Div):
        return "DIV"
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Prefix):
        return f"{t.event} -> {_wrap(t.body, PREFIX)}"
    if isinstance(t, Hide):
        return f"{_wrap(t.body, POSTFIX)} \\ {event_set(t.hidden)}"
    if isinstance(t, Rename):
        pairs = ", ".join(f"{a} <- {b}" for a, b in sorted(t.pairs))
        return f"{_wrap(t.body, POSTFIX)}[[{pairs}]]"
    if isinstance(t, Mu):
        return f"mu {t.name} . {print_term(t.body)}"
    if isinstance(t, Parallel):
        op = f"[|{event_set(t.sync)}|]"
        return f"{_wrap(t.left, PAR)} {op} {_wrap(t.right, PAR - 1)}"
    level, op = _BINARY[type(t)]
    # left-associative; mu (loosest) is always parenthesized as an operand
    return f"{_wrap(t.left, level)} {op} {_wrap(t.right, level - 1)}"


def print_spec(spec) -> str:
    lines = ["alphabet {" + ", ".join(spec.alphabet) + "};"]
    for name, body in spec.equations.items():
        lines.append(f"{name} = {print_term(body)};")
    lines.append("root " + ", ".join(spec.roots) + ";")
    return "\n".join(lines) + "\n"
