"""Syntactic classes: sequential, structurally finite-state (SFS), general."""

from __future__ import annotations

import enum

from .terms import (
    Div,
    ExtChoice,
    Hide,
    IntChoice,
    Mu,
    OpenTermError,
    Parallel,
    Prefix,
    Rename,
    Seq,
    Skip,
    Stop,
    Term,
    Var,
)


class Kind(enum.Enum):
    SEQUENTIAL = "sequential"
    SFS = "sfs"
    GENERAL = "general"


def is_sequential(t: Term) -> bool:
    """Sequential terms (open terms allowed).

    STOP, SKIP, variables (and DIV, a one-state LTS) are sequential; prefix,
    both choices and ``mu`` preserve it; ``;``, hiding and renaming preserve it
    only when the left/inner operand is closed.
    """
    memo = {}

    def go(t: Term) -> bool:
        r = memo.get(id(t))
        if r is not None:
            return r
        if isinstance(t, (Stop, Skip, Var, Div)):
            r = True
        elif isinstance(t, (Prefix, Mu)):
            r = go(t.body)
        elif isinstance(t, (IntChoice, ExtChoice)):
            r = go(t.left) and go(t.right)
        elif isinstance(t, Seq):
            r = t.left.is_closed and go(t.left) and go(t.right)
        elif isinstance(t, (Hide, Rename)):
            r = t.body.is_closed and go(t.body)
        else:
            r = False
        memo[id(t)] = r
        return r

    return go(t)


def is_sfs(t: Term) -> bool:
    if not t.is_closed:
        return False
    if is_sequential(t):
        return True
    if isinstance(t, (Prefix, Hide, Rename)):
        return is_sfs(t.body)
    if isinstance(t, (IntChoice, ExtChoice, Parallel, Seq)):
        return is_sfs(t.left) and is_sfs(t.right)
    return False


def classify(t: Term) -> Kind:
    if not t.is_closed:
        raise OpenTermError(f"cannot classify an open term (free: {sorted(t.free_vars)})")
    if is_sequential(t):
        return Kind.SEQUENTIAL
    if is_sfs(t):
        return Kind.SFS
    return Kind.GENERAL
