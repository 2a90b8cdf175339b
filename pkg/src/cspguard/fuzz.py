"""Seeded random terms for property tests and the soundness campaign."""

from __future__ import annotations

import random
from typing import List, Optional, Sequence

from .syntax.terms import (
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
    total_renaming,
)

DEFAULT_EVENTS = ("a", "b", "c", "d", "e")


class TermGen:
    """Random closed terms over a fixed alphabet.

    ``sequential`` and ``sfs`` stay inside those classes by construction;
    ``general`` may recurse through any operator.
    """

    def __init__(self, seed: int = 0, events: Sequence[str] = DEFAULT_EVENTS, div_weight: float = 0.03):
        self.rng = random.Random(seed)
        self.events = tuple(events)
        self.div_weight = div_weight
        self._fresh = 0

    # -- pieces
    def event(self) -> str:
        return self.rng.choice(self.events)

    def subset(self, lo: int = 0) -> frozenset:
        k = self.rng.randint(lo, max(lo, len(self.events) - 1))
        return frozenset(self.rng.sample(self.events, k))

    def relation(self) -> frozenset:
        pairs = set()
        for a in self.rng.sample(self.events, self.rng.randint(1, len(self.events))):
            for b in self.rng.sample(self.events, self.rng.randint(1, 2)):
                pairs.add((a, b))
        return total_renaming(pairs, self.events)

    def _var(self) -> str:
        self._fresh += 1
        return f"X{self._fresh}"

    def _leaf(self, scope: List[str]) -> Term:
        r = self.rng.random()
        if r < self.div_weight:
            return DIV
        if scope and r < 0.45:
            return Var(self.rng.choice(scope))
        return STOP if r < 0.7 else SKIP

    # -- sequential
    def sequential(self, depth: int, scope: Optional[List[str]] = None) -> Term:
        scope = list(scope or [])
        if depth <= 0:
            return self._leaf(scope)
        r = self.rng.random()
        if r < 0.30:
            return Prefix(self.event(), self.sequential(depth - 1, scope))
        if r < 0.42:
            return IntChoice(self.sequential(depth - 1, scope), self.sequential(depth - 1, scope))
        if r < 0.54:
            return ExtChoice(self.sequential(depth - 1, scope), self.sequential(depth - 1, scope))
        if r < 0.74:
            x = self._var()
            return Mu(x, self.sequential(depth - 1, scope + [x]))
        if r < 0.82:
            return Seq(self.sequential(depth - 1), self.sequential(depth - 1, scope))
        if r < 0.91:
            return Hide(self.subset(1), self.sequential(depth - 1))
        if r < 0.96:
            return Rename(self.relation(), self.sequential(depth - 1))
        return self._leaf(scope)

    # -- structurally finite-state
    def sfs(self, depth: int) -> Term:
        if depth <= 1:
            return self.sequential(depth)
        r = self.rng.random()
        if r < 0.25:
            return self.sequential(depth)
        if r < 0.33:
            return Prefix(self.event(), self.sfs(depth - 1))
        if r < 0.40:
            return IntChoice(self.sfs(depth - 1), self.sfs(depth - 1))
        if r < 0.47:
            return ExtChoice(self.sfs(depth - 1), self.sfs(depth - 1))
        if r < 0.55:
            return Seq(self.sfs(depth - 1), self.sfs(depth - 1))
        if r < 0.75:
            return Parallel(self.subset(), self.sfs(depth - 1), self.sfs(depth - 1))
        if r < 0.92:
            return Hide(self.subset(1), self.sfs(depth - 1))
        return Rename(self.relation(), self.sfs(depth - 1))

    # -- anything closed
    def general(self, depth: int, scope: Optional[List[str]] = None) -> Term:
        scope = list(scope or [])
        if depth <= 0:
            return self._leaf(scope)
        r = self.rng.random()
        d = depth - 1
        if r < 0.22:
            return Prefix(self.event(), self.general(d, scope))
        if r < 0.30:
            return IntChoice(self.general(d, scope), self.general(d, scope))
        if r < 0.38:
            return ExtChoice(self.general(d, scope), self.general(d, scope))
        if r < 0.55:
            x = self._var()
            return Mu(x, self.general(d, scope + [x]))
        if r < 0.63:
            return Seq(self.general(d, scope), self.general(d, scope))
        if r < 0.75:
            return Parallel(self.subset(), self.general(d, scope), self.general(d, scope))
        if r < 0.88:
            return Hide(self.subset(1), self.general(d, scope))
        if r < 0.95:
            return Rename(self.relation(), self.general(d, scope))
        return self._leaf(scope)
