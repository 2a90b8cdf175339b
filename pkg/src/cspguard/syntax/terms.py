"""CSP abstract syntax.

Terms are immutable and hashable; structural equality is the identity used
for LTS states and analysis memo tables.  Hashes and free-variable sets are
computed once per node and cached.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from functools import lru_cache
from weakref import WeakValueDictionary
from typing import Callable, FrozenSet, Iterable, Iterator, Tuple


_FIELDS: dict = {}


class OpenTermError(ValueError):
    """Raised when an operation needs a closed term but got an open one."""


class Term:
    """Base class of all CSP terms."""

    __slots__ = ()

    def children(self) -> Tuple["Term", ...]:
        return ()

    def with_children(self, kids: Tuple["Term", ...]) -> "Term":
        return self

    @property
    def free_vars(self) -> FrozenSet[str]:
        try:
            return self.__dict__["_fv"]
        except KeyError:
            fv = self._compute_free_vars()
            object.__setattr__(self, "_fv", fv)
            return fv

    def _compute_free_vars(self) -> FrozenSet[str]:
        out: FrozenSet[str] = frozenset()
        for c in self.children():
            out |= c.free_vars
        return out

    @property
    def is_closed(self) -> bool:
        return not self.free_vars

    @property
    def tsize(self) -> int:
        """Number of syntax nodes (cached)."""
        try:
            return self.__dict__["_sz"]
        except KeyError:
            n = 1 + sum(c.tsize for c in self.children())
            object.__setattr__(self, "_sz", n)
            return n

    def _key(self) -> tuple:
        try:
            return self.__dict__["_k"]
        except KeyError:
            pass
        names = _FIELDS.get(type(self))
        if names is None:
            names = _FIELDS[type(self)] = tuple(f.name for f in fields(self))
        k = tuple(getattr(self, n) for n in names)
        object.__setattr__(self, "_k", k)
        return k

    def __hash__(self) -> int:
        try:
            return self.__dict__["_h"]
        except KeyError:
            h = hash((type(self).__name__,) + self._key())
            object.__setattr__(self, "_h", h)
            return h

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if type(self) is not type(other):
            return False
        if hash(self) != hash(other):
            return False
        return self._key() == other._key()  # type: ignore[attr-defined]

    def __ne__(self, other: object) -> bool:
        return not self.__eq__(other)

    def __str__(self) -> str:
        from .printer import print_term

        return print_term(self)


@dataclass(frozen=True, eq=False)
class Stop(Term):
    pass


@dataclass(frozen=True, eq=False)
class Skip(Term):
    pass


@dataclass(frozen=True, eq=False)
class Div(Term):
    pass


STOP = Stop()
SKIP = Skip()
DIV = Div()


@dataclass(frozen=True, eq=False)
class Prefix(Term):
    event: str
    body: Term

    def children(self):
        return (self.body,)

    def with_children(self, kids):
        return Prefix(self.event, kids[0])


@dataclass(frozen=True, eq=False)
class IntChoice(Term):
    left: Term
    right: Term

    def children(self):
        return (self.left, self.right)

    def with_children(self, kids):
        return IntChoice(*kids)


@dataclass(frozen=True, eq=False)
class ExtChoice(Term):
    left: Term
    right: Term

    def children(self):
        return (self.left, self.right)

    def with_children(self, kids):
        return ExtChoice(*kids)


@dataclass(frozen=True, eq=False)
class Parallel(Term):
    sync: FrozenSet[str]
    left: Term
    right: Term

    def children(self):
        return (self.left, self.right)

    def with_children(self, kids):
        return Parallel(self.sync, *kids)


@dataclass(frozen=True, eq=False)
class Seq(Term):
    left: Term
    right: Term

    def children(self):
        return (self.left, self.right)

    def with_children(self, kids):
        return Seq(*kids)


@dataclass(frozen=True, eq=False)
class Hide(Term):
    hidden: FrozenSet[str]
    body: Term

    def children(self):
        return (self.body,)

    def with_children(self, kids):
        return Hide(self.hidden, kids[0])


@lru_cache(maxsize=1 << 12)
def _images(pairs: FrozenSet[Tuple[str, str]], a: str) -> Tuple[str, ...]:
    return tuple(sorted(b for (x, b) in pairs if x == a))


@dataclass(frozen=True, eq=False)
class Rename(Term):
    """``body[[a <- b, ...]]``; ``pairs`` holds ``(a, b)`` meaning a R b."""

    pairs: FrozenSet[Tuple[str, str]]
    body: Term

    def children(self):
        return (self.body,)

    def with_children(self, kids):
        return Rename(self.pairs, kids[0])

    def images(self, a: str) -> Tuple[str, ...]:
        return _images(self.pairs, a)


@dataclass(frozen=True, eq=False)
class Var(Term):
    name: str

    def _compute_free_vars(self):
        return frozenset((self.name,))


@dataclass(frozen=True, eq=False)
class Mu(Term):
    name: str
    body: Term

    def children(self):
        return (self.body,)

    def with_children(self, kids):
        return Mu(self.name, kids[0])

    def _compute_free_vars(self):
        return self.body.free_vars - {self.name}


# -- constructors used by generators and tests --------------------------------


def prefix(events: Iterable[str], body: Term) -> Term:
    """``a -> b -> ... -> body``."""
    out = body
    for e in reversed(list(events)):
        out = Prefix(e, out)
    return out


def ext_choice(*terms: Term) -> Term:
    out = terms[0]
    for t in terms[1:]:
        out = ExtChoice(out, t)
    return out


def int_choice(*terms: Term) -> Term:
    out = terms[0]
    for t in terms[1:]:
        out = IntChoice(out, t)
    return out


def parallel(sync: Iterable[str], left: Term, right: Term) -> Parallel:
    return Parallel(frozenset(sync), left, right)


def hide(hidden: Iterable[str], body: Term) -> Hide:
    return Hide(frozenset(hidden), body)


def total_renaming(pairs: Iterable[Tuple[str, str]], alphabet: Iterable[str]) -> FrozenSet[Tuple[str, str]]:
    """Add ``(a, a)`` for every event of ``alphabet`` without a declared image."""
    pairs = set(pairs)
    has_image = {a for a, _ in pairs}
    for a in alphabet:
        if a not in has_image:
            pairs.add((a, a))
    return frozenset(pairs)


def rename(pairs: Iterable[Tuple[str, str]], body: Term, alphabet: Iterable[str]) -> Rename:
    return Rename(total_renaming(pairs, alphabet), body)


# -- traversal ----------------------------------------------------------------


def subterms(term: Term) -> Iterator[Term]:
    """Pre-order walk over all syntactic subterms (with repetition)."""
    stack = [term]
    while stack:
        t = stack.pop()
        yield t
        stack.extend(reversed(t.children()))


def size(term: Term) -> int:
    return term.tsize


def depth(term: Term) -> int:
    kids = term.children()
    return 1 + (max(depth(k) for k in kids) if kids else 0)


def events_of(term: Term) -> FrozenSet[str]:
    """Every event name mentioned syntactically (prefixes, sync/hide sets, renamings)."""
    out = set()
    for t in subterms(term):
        if isinstance(t, Prefix):
            out.add(t.event)
        elif isinstance(t, Parallel):
            out |= t.sync
        elif isinstance(t, Hide):
            out |= t.hidden
        elif isinstance(t, Rename):
            for a, b in t.pairs:
                out.add(a)
                out.add(b)
    return frozenset(out)


def contains_div(term: Term) -> bool:
    return any(isinstance(t, Div) for t in subterms(term))


def binders(term: Term) -> list:
    """Binder census: the names of every ``mu`` node in pre-order."""
    return [t.name for t in subterms(term) if isinstance(t, Mu)]


def map_bottom_up(term: Term, fn: Callable[[Term], Term]) -> Term:
    kids = term.children()
    if kids:
        new = tuple(map_bottom_up(k, fn) for k in kids)
        if any(a is not b for a, b in zip(new, kids)):
            term = term.with_children(new)
    return fn(term)


# -- substitution and canonical forms -----------------------------------------


def substitute(term: Term, var: str, replacement: Term) -> Term:
    """``[replacement/var]term``.

    ``replacement`` must be closed, so no capture can occur.
    """
    if replacement.free_vars:
        raise OpenTermError(f"substituted term must be closed: {replacement}")
    return _subst(term, var, replacement)


def _subst(t: Term, var: str, rep: Term) -> Term:
    if var not in t.free_vars:
        return t
    if isinstance(t, Var):
        return rep
    # Mu binding var has var not free, handled above
    kids = t.children()
    return t.with_children(tuple(_subst(k, var, rep) for k in kids))


def unfold(mu: Mu) -> Term:
    """One recursion unfolding: ``[(mu X . P)/X] P``."""
    return _subst(mu.body, mu.name, mu)


_INTERNED: "WeakValueDictionary[Term, Term]" = WeakValueDictionary()


def intern(term: Term) -> Term:
    """The shared instance of ``term``, so equal subterms are identical.

    Children are interned first, which keeps every equality test during
    lookup shallow.
    """
    if "_i" in term.__dict__:
        return term
    kids = term.children()
    if kids:
        new = tuple(intern(k) for k in kids)
        if any(a is not b for a, b in zip(new, kids)):
            term = term.with_children(new)
    hit = _INTERNED.get(term)
    if hit is not None:
        return hit
    object.__setattr__(term, "_i", True)
    _INTERNED[term] = term
    return term


def alpha_normalize(term: Term) -> Term:
    """Rename each binder to ``#d`` where ``d`` is its binder depth.

    Depth restarts at every closed subterm, which cannot see outer binders,
    so closed pieces normalize independently of context and are memoized.
    Two alpha-equivalent terms normalize to the same term.  ``#`` can never
    appear in a parsed identifier, so no user variable is captured.
    """
    if term.free_vars:
        return _alpha(term, {}, 0)
    return _alpha_closed(term)


@lru_cache(maxsize=1 << 16)
def _alpha_closed(t: Term) -> Term:
    return _alpha(t, {}, 0, top=True)


def _alpha(t: Term, env: dict, d: int, top: bool = False) -> Term:
    if not top and not t.free_vars:
        return _alpha_closed(t)
    if isinstance(t, Var):
        new = env.get(t.name)
        return t if new is None or new == t.name else Var(new)
    if isinstance(t, Mu):
        name = f"#{d}"
        inner = dict(env)
        inner[t.name] = name
        body = _alpha(t.body, inner, d + 1)
        if name == t.name and body is t.body:
            return t
        return Mu(name, body)
    kids = t.children()
    if not kids:
        return t
    new = tuple(_alpha(k, env, d) for k in kids)
    if all(a is b for a, b in zip(new, kids)):
        return t
    return t.with_children(new)


@lru_cache(maxsize=1 << 16)
def fuse_hiding(term: Term) -> Term:
    """Rewrite ``(P \\ A) \\ B`` to ``P \\ (A | B)`` everywhere."""
    kids = term.children()
    if kids:
        new = tuple(fuse_hiding(k) for k in kids)
        if any(a is not b for a, b in zip(new, kids)):
            term = term.with_children(new)
    if isinstance(term, Hide) and isinstance(term.body, Hide):
        return Hide(term.hidden | term.body.hidden, term.body.body)
    return term


def unique_binders(term: Term) -> Term:
    """Rename binders so that no two ``mu`` nodes share a name.

    Free variables keep their names; fresh names never collide with them.
    """
    taken = set(term.free_vars)
    counter: dict = {}

    def fresh(base: str) -> str:
        n = counter.get(base, 0)
        while True:
            name = base if n == 0 else f"{base}_{n}"
            n += 1
            if name not in taken:
                counter[base] = n
                taken.add(name)
                return name

    def go(t: Term, env: dict) -> Term:
        if isinstance(t, Var):
            return Var(env[t.name]) if t.name in env and env[t.name] != t.name else t
        if isinstance(t, Mu):
            name = fresh(t.name)
            inner = dict(env)
            inner[t.name] = name
            return Mu(name, go(t.body, inner))
        kids = t.children()
        if not kids:
            return t
        return t.with_children(tuple(go(k, env) for k in kids))

    return go(term, {})
