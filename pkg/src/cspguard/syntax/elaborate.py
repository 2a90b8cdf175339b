"""Bekič elaboration of equation systems into closed single-variable terms."""

from __future__ import annotations

from typing import Dict, FrozenSet, Optional

from .parser import Spec, UnknownRoot
from .terms import Mu, Term, Var


def bekic_elaborate(spec: Spec, name: Optional[str] = None) -> Term:
    """Turn the equation named ``name`` (default: the root) into a closed term.

    Each equation ``Y`` referenced from inside ``mu X`` is replaced by
    ``mu Y . body(Y)`` elaborated with ``X`` still bound, so a system
    ``P = f(P, Q), Q = g(P, Q)`` becomes ``mu P . f(P, mu Q . g(P, Q))``.
    Equations are inlined in depth-first first-use order; a binder is only
    introduced when the name actually recurs.  Unreachable equations vanish.
    """
    name = spec.root if name is None else name
    if name not in spec.equations:
        raise UnknownRoot(f"root {name!r} is not defined")
    return _elab(spec.equations, name, frozenset())


def _elab(eqs: Dict[str, Term], name: str, bound: FrozenSet[str]) -> Term:
    inner = bound | {name}
    body = _inline(eqs, eqs[name], inner, frozenset())
    if name in body.free_vars:
        return Mu(name, body)
    return body


def _inline(eqs: Dict[str, Term], t: Term, bound: FrozenSet[str], local: FrozenSet[str]) -> Term:
    """Replace references to equations outside ``bound`` by their elaboration.

    ``local`` tracks binders written by the user inside the equation body;
    those shadow equation names.
    """
    if isinstance(t, Var):
        if t.name in local or t.name in bound:
            return t
        return _elab(eqs, t.name, bound)
    if isinstance(t, Mu):
        body = _inline(eqs, t.body, bound, local | {t.name})
        return t if body is t.body else Mu(t.name, body)
    kids = t.children()
    if not kids:
        return t
    new = tuple(_inline(eqs, k, bound, local) for k in kids)
    if all(a is b for a, b in zip(new, kids)):
        return t
    return t.with_children(new)
