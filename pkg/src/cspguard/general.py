"""Nonexpansive, guard, contractive and fair set rules for arbitrary terms.

``N(P, X)``, ``G(P)``, ``C(P, X)`` and ``F(P)`` are computed by one
demand-driven, memoized structural recursion.  A closed term with a
non-empty ``F`` and no ``DIV`` is livelock-free.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .setlogic import PAIR, SET, Algebra, Family, make_algebra
from .syntax.terms import (
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
    contains_div,
    unique_binders,
)


class GeneralContext:
    """Memo tables plus the set algebra the rules are evaluated in."""

    def __init__(self, algebra: Algebra, memo: bool = True):
        self.alg = algebra
        self.memo = memo
        self._n: Dict[Tuple[Term, str], Family] = {}
        self._c: Dict[Tuple[Term, str], Family] = {}
        self._g: Dict[Term, Family] = {}
        self._f: Dict[Term, Family] = {}
        self._full_pair = algebra.full(PAIR)
        self._subset = algebra.subset_pairs()

    @classmethod
    def for_alphabet(cls, alphabet, backend: str = "explicit", memo: bool = True) -> "GeneralContext":
        return cls(make_algebra(alphabet, backend), memo)

    def _img(self, t: Rename):
        return self.alg.renaming(t.pairs)

    def _mask(self, events) -> int:
        return self.alg.mask(events)

    # -- N_X
    def N(self, p: Term, x: str) -> Family:
        if x not in p.free_vars:
            return self._full_pair
        key = (p, x)
        r = self._n.get(key)
        if r is None:
            r = self._nonexp(p, x)
            if self.memo:
                self._n[key] = r
        return r

    def _nonexp(self, p: Term, x: str) -> Family:
        alg = self.alg
        if isinstance(p, Prefix):
            return self.N(p.body, x)
        if isinstance(p, (IntChoice, ExtChoice, Seq, Parallel)):
            return self.N(p.left, x) & self.N(p.right, x)
        if isinstance(p, Hide):
            return alg.hide_image(self.N(p.body, x), self._mask(p.hidden))
        if isinstance(p, Rename):
            return alg.rename_image(self.N(p.body, x), self._img(p))
        if isinstance(p, Var):
            return self._subset
        if isinstance(p, Mu):
            return self._mu_clause(self.N(p.body, x), p)
        raise TypeError(f"no nonexpansive rule for {type(p).__name__}")

    def _mu_clause(self, inner: Family, p: Mu) -> Family:
        # (U', V') in inner with (V', V') in N_Y(body), then close
        alg = self.alg
        loops = alg.diagonal(self.N(p.body, p.name))
        return alg.udcl(inner & alg.second_in(loops))

    # -- G
    def G(self, p: Term) -> Family:
        r = self._g.get(p)
        if r is None:
            r = self._guard(p)
            if self.memo:
                self._g[p] = r
        return r

    def _guard(self, p: Term) -> Family:
        alg = self.alg
        if isinstance(p, Stop):
            return alg.full(SET)
        if isinstance(p, (Skip, Var, Div)):
            return alg.empty(SET)
        if isinstance(p, Prefix):
            return self.G(p.body) | alg.sets_containing(p.event)
        if isinstance(p, (IntChoice, ExtChoice)):
            return self.G(p.left) & self.G(p.right)
        if isinstance(p, Seq):
            if self._live(p.left):
                return self.G(p.left) | self.G(p.right)
            return self.G(p.left)
        if isinstance(p, Parallel):
            if self._live(p.left) and self._live(p.right):
                return self.G(p.left) | self.G(p.right)
            return self.G(p.left) & self.G(p.right)
        if isinstance(p, Hide):
            a = self._mask(p.hidden)
            if p.body.is_closed and (0, alg.universe & ~a) in self.F(p.body):
                return alg.hide_image(self.G(p.body), a)
            return alg.empty(SET)
        if isinstance(p, Rename):
            return alg.rename_image(self.G(p.body), self._img(p))
        if isinstance(p, Mu):
            return self.G(p.body)
        raise TypeError(f"no guard rule for {type(p).__name__}")

    def _live(self, p: Term) -> bool:
        return p.is_closed and not self.F(p).is_empty()

    # -- C_X
    def C(self, p: Term, x: str) -> Family:
        if x not in p.free_vars:
            return self._full_pair
        key = (p, x)
        r = self._c.get(key)
        if r is None:
            r = self._contr(p, x)
            if self.memo:
                self._c[key] = r
        return r

    def _contr(self, p: Term, x: str) -> Family:
        alg = self.alg
        if isinstance(p, Prefix):
            return self.C(p.body, x) | (self.N(p.body, x) & alg.second_in(alg.sets_containing(p.event)))
        if isinstance(p, (IntChoice, ExtChoice, Parallel)):
            return self.C(p.left, x) & self.C(p.right, x)
        if isinstance(p, Seq):
            guarded = self.N(p.right, x) & alg.second_in(self.G(p.left))
            return self.C(p.left, x) & (self.C(p.right, x) | guarded)
        if isinstance(p, Hide):
            return alg.hide_image(self.C(p.body, x), self._mask(p.hidden))
        if isinstance(p, Rename):
            return alg.rename_image(self.C(p.body, x), self._img(p))
        if isinstance(p, Var):
            return alg.empty(PAIR)
        if isinstance(p, Mu):
            return self._mu_clause(self.C(p.body, x), p)
        raise TypeError(f"no contractive rule for {type(p).__name__}")

    # -- F
    def F(self, p: Term) -> Family:
        r = self._f.get(p)
        if r is None:
            r = self._fair(p)
            if self.memo:
                self._f[p] = r
        return r

    def _fair(self, p: Term) -> Family:
        alg = self.alg
        if isinstance(p, (Stop, Skip)):
            return self._full_pair
        if isinstance(p, Div):
            return alg.empty(PAIR)
        if isinstance(p, Prefix):
            return self.F(p.body)
        if isinstance(p, (IntChoice, ExtChoice, Seq)):
            return self.F(p.left) & self.F(p.right)
        if isinstance(p, Parallel):
            f1, f2 = self.F(p.left), self.F(p.right)
            a = self._mask(p.sync)
            return (
                (f1 & f2)
                | alg.meet_first(f1, alg.column(f2, a))
                | alg.meet_first(f2, alg.column(f1, a))
            )
        if isinstance(p, Hide):
            return alg.hide_image(self.F(p.body), self._mask(p.hidden))
        if isinstance(p, Rename):
            return alg.rename_image(self.F(p.body), self._img(p))
        if isinstance(p, Var):
            return self._subset
        if isinstance(p, Mu):
            w = self.fixpoint_sets(p)
            if p.free_vars:
                return alg.udcl(alg.diag_pairs(w))
            return alg.second_in(alg.ucl(w))
        raise TypeError(f"no fair-set rule for {type(p).__name__}")

    def fixpoint_sets(self, p: Mu) -> Family:
        """``{W | (W, W) in C_X(body) & F(body)}`` for ``p = mu X . body``."""
        return self.alg.diagonal(self.C(p.body, p.name) & self.F(p.body))

    # -- inspection
    def table(self) -> List[Tuple[str, str, Optional[str], Family]]:
        """Every memoized family as (function, subterm, variable, family)."""
        rows = []
        for (t, x), f in self._n.items():
            rows.append(("N", str(t), x, f))
        for (t, x), f in self._c.items():
            rows.append(("C", str(t), x, f))
        for t, f in self._g.items():
            rows.append(("G", str(t), None, f))
        for t, f in self._f.items():
            rows.append(("F", str(t), None, f))
        return rows


@dataclass
class GeneralResult:
    livelock_free: bool
    reason: Optional[str]
    fair: Optional[Family]
    witness: Optional[Tuple[int, int]] = None
    fixpoints: List[dict] = field(default_factory=list)
    context: Optional[GeneralContext] = field(default=None, repr=False)


def prepare(term: Term) -> Term:
    """Rename nested binders apart so N_X/C_X never conflate two binders."""
    return unique_binders(term)


def analyze_general(term: Term, ctx: GeneralContext) -> GeneralResult:
    """Livelock freedom of a closed term from its fair sets."""
    if term.free_vars:
        raise OpenTermError(f"cannot analyze an open term (free: {sorted(term.free_vars)})")
    term = prepare(term)
    if contains_div(term):
        return GeneralResult(False, "contains DIV", None, context=ctx)
    fam = ctx.F(term)
    if fam.is_empty():
        return GeneralResult(False, "empty fair-set family", fam, context=ctx)
    fixpoints = []
    for path, sub in _paths(term):
        if isinstance(sub, Mu):
            w = ctx.fixpoint_sets(sub)
            fixpoints.append({
                "path": path,
                "binder": sub.name,
                "W": ctx.alg.witness(w) if not w.is_empty() else None,
            })
    return GeneralResult(True, None, fam, ctx.alg.witness(fam), fixpoints, ctx)


def _paths(term: Term, path: str = "") -> List[Tuple[str, Term]]:
    out = [(path or "/", term)]
    for i, k in enumerate(term.children()):
        out.extend(_paths(k, f"{path}/{i}"))
    return out
