"""Symbolic backend: families as BDDs over one-hot event variables.

Each event owns a block of ``SLOTS`` consecutive variables: ``x`` (first
component, U or F), ``y`` (second component, V or C) and four auxiliary
copies used while quantifying.  Blocks follow alphabet order, so x and y of
one event are adjacent.  Set families live on the ``y`` variables.
"""

from __future__ import annotations

from typing import Dict, Sequence, Tuple

from . import bdd
from .families import PAIR, SET, Algebra

SLOTS = 6
X, Y, A1, A2, A3, A4 = range(SLOTS)


class SymbolicAlgebra(Algebra):
    backend = "symbolic"

    def __init__(self, alphabet: Sequence[str], manager_cls=None):
        super().__init__(alphabet)
        cls = manager_cls or bdd.Manager
        self.mgr = cls(max(1, self.n * SLOTS))
        n = self.n
        m = self.mgr
        self.xs = [self.v(X, i) for i in range(n)]
        self.ys = [self.v(Y, i) for i in range(n)]
        self._pair_vars = self.xs + self.ys
        self._cubes: Dict[Tuple[int, ...], int] = {}
        self._maps: Dict[Tuple[Tuple[int, int], ...], int] = {}
        self.eq_xy = bdd.conj(m, [m.equiv(m.var(self.xs[i]), m.var(self.ys[i])) for i in range(n)])

    # -- variables
    @staticmethod
    def v(slot: int, i: int) -> int:
        return i * SLOTS + slot

    def lit(self, slot: int, i: int) -> int:
        return self.mgr.var(self.v(slot, i))

    def slot_cube(self, *slots: int) -> int:
        key = tuple(sorted(slots))
        c = self._cubes.get(key)
        if c is None:
            c = self.mgr.cube([self.v(s, i) for s in key for i in range(self.n)])
            self._cubes[key] = c
        return c

    def move(self, f: int, *pairs: Tuple[int, int]) -> int:
        """Substitute slot ``b`` for slot ``a`` in ``f``, for each ``(a, b)``."""
        key = tuple(pairs)
        mid = self._maps.get(key)
        if mid is None:
            mapping = {}
            for a, b in pairs:
                for i in range(self.n):
                    mapping[self.v(a, i)] = self.v(b, i)
            mid = self.mgr.register_map(mapping)
            self._maps[key] = mid
        return self.mgr.rename(f, mid)

    def mask_cube(self, slot: int, mask: int) -> int:
        """Literal cube fixing every ``slot`` variable to the bits of ``mask``."""
        return self.mgr.literal_cube({self.v(slot, i): bool(mask >> i & 1) for i in range(self.n)})

    def encode(self, slot: int, mask: int) -> int:
        return self.mask_cube(slot, mask)

    # -- boolean algebra
    def _empty(self, kind):
        return 0

    def _full(self, kind):
        return 1

    def _or(self, a, b):
        return self.mgr.or_(a, b)

    def _and(self, a, b):
        return self.mgr.and_(a, b)

    def _not(self, kind, a):
        return self.mgr.not_(a)

    def _is_empty(self, a):
        return a == 0

    def _vars(self, kind):
        return self.ys if kind == SET else self._pair_vars

    def _count(self, kind, a):
        return bdd.count(self.mgr, a, self._vars(kind))

    def _contains_set(self, a, v):
        return self.mgr.restrict(a, self.mask_cube(Y, v)) == 1

    def _contains_pair(self, a, u, v):
        return self.mgr.restrict(self.mgr.restrict(a, self.mask_cube(X, u)), self.mask_cube(Y, v)) == 1

    def _members(self, kind, a):
        ms = sorted(bdd.models(self.mgr, a, self._vars(kind)))
        if kind == SET:
            return ms
        low = (1 << self.n) - 1
        return [(i & low, i >> self.n) for i in ms]

    def _witness(self, kind, a):
        # least index: V (MSB first) then U, preferring 0 at every bit
        m = self.mgr
        order = list(reversed(self.ys))
        if kind == PAIR:
            order += list(reversed(self.xs))
        f = a
        u = v = 0
        for var in order:
            f0 = m.restrict(f, m.literal_cube({var: False}))
            if f0 != 0:
                f = f0
                continue
            f = m.restrict(f, m.literal_cube({var: True}))
            i, slot = divmod(var, SLOTS)
            if slot == Y:
                v |= 1 << i
            else:
                u |= 1 << i
        return v if kind == SET else (u, v)

    # -- constructors
    def _sets(self, masks):
        return bdd.disj(self.mgr, [self.mask_cube(Y, s) for s in set(masks)])

    def _pairs(self, pairs):
        m = self.mgr
        return bdd.disj(m, [m.and_(self.mask_cube(X, u), self.mask_cube(Y, v)) for u, v in set(pairs)])

    def _sets_containing(self, i):
        return self.lit(Y, i)

    def _disjoint_sets(self, a):
        m = self.mgr
        return bdd.conj(m, [m.not_(self.lit(Y, i)) for i in range(self.n) if a >> i & 1])

    def _subset_pairs(self):
        m = self.mgr
        return bdd.conj(m, [m.implies(self.lit(X, i), self.lit(Y, i)) for i in range(self.n)])

    def _second_in(self, s):
        return s

    def _first_in(self, s):
        return self.move(s, (Y, X))

    def _diagonal(self, p):
        return self.mgr.and_exists(p, self.eq_xy, self.slot_cube(X))

    def _diag_pairs(self, s):
        return self.mgr.and_(s, self.eq_xy)

    def _column(self, p, v):
        return self.move(self.mgr.restrict(p, self.mask_cube(Y, v)), (X, Y))

    # -- closures: one cofactor sweep per variable
    def _close(self, f: int, slot: int, up: bool) -> int:
        m = self.mgr
        for i in range(self.n):
            var = self.v(slot, i)
            if up:
                f = m.or_(f, m.and_(m.var(var), m.restrict(f, m.literal_cube({var: False}))))
            else:
                f = m.or_(f, m.and_(m.nvar(var), m.restrict(f, m.literal_cube({var: True}))))
        return f

    def _ucl_set(self, s):
        return self._close(s, Y, True)

    def _dcl_set(self, s):
        return self._close(s, Y, False)

    def _ucl_second(self, p):
        return self._close(p, Y, True)

    def _dcl_second(self, p):
        return self._close(p, Y, False)

    def _dcl_first(self, p):
        return self._close(p, X, False)

    # -- images
    def _rename_image(self, kind, f, img):
        # exists V' (in slot A1) . f[V'] and  AND_a (V'_a -> R(a) <= V)
        m = self.mgr
        moved = self.move(f, (Y, A1))
        cons = []
        for a in range(self.n):
            targets = bdd.conj(m, [self.lit(Y, b) for b in range(self.n) if img[a] >> b & 1])
            cons.append(m.implies(self.lit(A1, a), targets))
        return m.and_exists(moved, bdd.conj(m, cons), self.slot_cube(A1))

    def _meet_first(self, p, s):
        m = self.mgr
        left = self.move(p, (X, A1))
        right = self.move(s, (Y, A2))
        cons = bdd.conj(
            m, [m.equiv(self.lit(X, i), m.and_(self.lit(A1, i), self.lit(A2, i))) for i in range(self.n)]
        )
        return m.and_exists(m.and_(left, right), cons, self.slot_cube(A1, A2))

    # -- fair/co-fair families
    def _phi_parallel(self, p1, p2, a):
        m = self.mgr
        n = self.n
        left = self.move(p1, (X, A1), (Y, A2))
        right = self.move(p2, (X, A3), (Y, A4))
        cons = []
        for i in range(n):
            x, y = self.lit(X, i), self.lit(Y, i)
            f1, c1, f2, c2 = (self.lit(s, i) for s in (A1, A2, A3, A4))
            cons.append(m.equiv(x, m.or_(f1, f2)))
            cons.append(m.equiv(y, m.or_(c1, c2) if a >> i & 1 else m.and_(c1, c2)))
            cons.append(m.not_(m.and_(x, y)))
        inner = m.and_exists(right, bdd.conj(m, cons), self.slot_cube(A3, A4))
        merged = m.and_exists(left, inner, self.slot_cube(A1, A2))
        avoid = bdd.conj(m, [m.not_(self.lit(X, i)) for i in range(n) if a >> i & 1])
        return m.or_(merged, m.or_(m.and_(p1, avoid), m.and_(p2, avoid)))

    def _phi_hide(self, p, a):
        m = self.mgr
        hidden = [i for i in range(self.n) if a >> i & 1]
        if not hidden:
            return p
        cube = m.cube([self.v(X, i) for i in hidden] + [self.v(Y, i) for i in hidden])
        fixed = bdd.conj(m, [m.and_(m.not_(self.lit(X, i)), self.lit(Y, i)) for i in hidden])
        return m.and_(m.exists(p, cube), fixed)

    def _phi_rename(self, p, img):
        m = self.mgr
        n = self.n
        moved = self.move(p, (X, A1), (Y, A2))
        cons = []
        for a in range(n):
            # F' <= R^-1(F)
            cons.append(m.implies(self.lit(A1, a), bdd.disj(m, [self.lit(X, b) for b in range(n) if img[a] >> b & 1])))
        for b in range(n):
            pre = [a for a in range(n) if img[a] >> b & 1]
            # F <= R(F')
            cons.append(m.implies(self.lit(X, b), bdd.disj(m, [self.lit(A1, a) for a in pre])))
            # C = {b | R^-1(b) <= C'}
            cons.append(m.equiv(self.lit(Y, b), bdd.conj(m, [self.lit(A2, a) for a in pre])))
        return m.and_exists(moved, bdd.conj(m, cons), self.slot_cube(A1, A2))

    def _phi_has_F_within(self, p, a):
        m = self.mgr
        outside = [self.v(X, i) for i in range(self.n) if not a >> i & 1]
        return m.restrict(p, m.literal_cube({v: False for v in outside})) != 0

    # -- inspection
    def node_count(self, f) -> int:
        return self.mgr.node_count(f.raw)

    def to_dot(self, f) -> str:
        names = {}
        for i, e in enumerate(self.alphabet):
            for slot, tag in ((X, "x"), (Y, "y"), (A1, "a1"), (A2, "a2"), (A3, "a3"), (A4, "a4")):
                names[self.v(slot, i)] = f"{tag}:{e}"
        return bdd.to_dot(self.mgr, f.raw, names)

