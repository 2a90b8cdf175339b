"""Reduced ordered BDD manager, pure Python.

Nodes are integers; 0 and 1 are the terminals.  Variable ``i`` sits at level
``i`` (fixed order, no reordering, no garbage collection: a manager lives as
long as one analysis).  ``_bdd_core.pyx`` implements the same interface.
"""

from __future__ import annotations

import sys

if sys.getrecursionlimit() < 20000:
    sys.setrecursionlimit(20000)


class Manager:
    IMPL = "python"

    def __init__(self, nvars: int):
        self.nvars = nvars
        self._var = [nvars, nvars]
        self._lo = [0, 1]
        self._hi = [0, 1]
        self._unique = {}
        self._and = {}
        self._or = {}
        self._xor = {}
        self._not = {}
        self._ite = {}
        self._quant = {}
        self._relprod = {}
        self._restr = {}
        self._ren = {}
        self._maps = []

    # -- structure
    @property
    def size(self) -> int:
        return len(self._var)

    def level(self, u: int) -> int:
        return self._var[u]

    def low(self, u: int) -> int:
        return self._lo[u]

    def high(self, u: int) -> int:
        return self._hi[u]

    def mk(self, v: int, lo: int, hi: int) -> int:
        if lo == hi:
            return lo
        key = (v, lo, hi)
        u = self._unique.get(key)
        if u is None:
            u = len(self._var)
            self._var.append(v)
            self._lo.append(lo)
            self._hi.append(hi)
            self._unique[key] = u
        return u

    def var(self, i: int) -> int:
        return self.mk(i, 0, 1)

    def nvar(self, i: int) -> int:
        return self.mk(i, 1, 0)

    def cube(self, variables) -> int:
        """Positive cube over ``variables`` (used as a quantifier set)."""
        u = 1
        for v in sorted(set(variables), reverse=True):
            u = self.mk(v, 0, u)
        return u

    def literal_cube(self, assignment) -> int:
        """Conjunction of literals, ``assignment`` maps variable -> bool."""
        u = 1
        for v in sorted(assignment, reverse=True):
            u = self.mk(v, u, 0) if not assignment[v] else self.mk(v, 0, u)
        return u

    # -- boolean connectives
    def and_(self, u: int, v: int) -> int:
        if u == v or v == 1:
            return u
        if u == 0 or v == 0:
            return 0
        if u == 1:
            return v
        if u > v:
            u, v = v, u
        key = (u, v)
        r = self._and.get(key)
        if r is not None:
            return r
        var, lo, hi = self._var, self._lo, self._hi
        a, b = var[u], var[v]
        if a == b:
            r = self.mk(a, self.and_(lo[u], lo[v]), self.and_(hi[u], hi[v]))
        elif a < b:
            r = self.mk(a, self.and_(lo[u], v), self.and_(hi[u], v))
        else:
            r = self.mk(b, self.and_(u, lo[v]), self.and_(u, hi[v]))
        self._and[key] = r
        return r

    def or_(self, u: int, v: int) -> int:
        if u == v or v == 0:
            return u
        if u == 1 or v == 1:
            return 1
        if u == 0:
            return v
        if u > v:
            u, v = v, u
        key = (u, v)
        r = self._or.get(key)
        if r is not None:
            return r
        var, lo, hi = self._var, self._lo, self._hi
        a, b = var[u], var[v]
        if a == b:
            r = self.mk(a, self.or_(lo[u], lo[v]), self.or_(hi[u], hi[v]))
        elif a < b:
            r = self.mk(a, self.or_(lo[u], v), self.or_(hi[u], v))
        else:
            r = self.mk(b, self.or_(u, lo[v]), self.or_(u, hi[v]))
        self._or[key] = r
        return r

    def xor(self, u: int, v: int) -> int:
        if u == v:
            return 0
        if u == 0:
            return v
        if v == 0:
            return u
        if u == 1:
            return self.not_(v)
        if v == 1:
            return self.not_(u)
        if u > v:
            u, v = v, u
        key = (u, v)
        r = self._xor.get(key)
        if r is not None:
            return r
        var, lo, hi = self._var, self._lo, self._hi
        a, b = var[u], var[v]
        if a == b:
            r = self.mk(a, self.xor(lo[u], lo[v]), self.xor(hi[u], hi[v]))
        elif a < b:
            r = self.mk(a, self.xor(lo[u], v), self.xor(hi[u], v))
        else:
            r = self.mk(b, self.xor(u, lo[v]), self.xor(u, hi[v]))
        self._xor[key] = r
        return r

    def not_(self, u: int) -> int:
        if u < 2:
            return 1 - u
        r = self._not.get(u)
        if r is None:
            r = self.mk(self._var[u], self.not_(self._lo[u]), self.not_(self._hi[u]))
            self._not[u] = r
        return r

    def ite(self, f: int, g: int, h: int) -> int:
        if f == 1:
            return g
        if f == 0:
            return h
        if g == h:
            return g
        if g == 1 and h == 0:
            return f
        if g == 0 and h == 1:
            return self.not_(f)
        if g == 1:
            return self.or_(f, h)
        if h == 0:
            return self.and_(f, g)
        key = (f, g, h)
        r = self._ite.get(key)
        if r is not None:
            return r
        var, lo, hi = self._var, self._lo, self._hi
        top = min(var[f], var[g], var[h])
        f0, f1 = (lo[f], hi[f]) if var[f] == top else (f, f)
        g0, g1 = (lo[g], hi[g]) if var[g] == top else (g, g)
        h0, h1 = (lo[h], hi[h]) if var[h] == top else (h, h)
        r = self.mk(top, self.ite(f0, g0, h0), self.ite(f1, g1, h1))
        self._ite[key] = r
        return r

    def equiv(self, u: int, v: int) -> int:
        return self.not_(self.xor(u, v))

    def implies(self, u: int, v: int) -> int:
        return self.or_(self.not_(u), v)

    # -- quantification, restriction, renaming
    def exists(self, f: int, cube: int) -> int:
        if f < 2 or cube == 1:
            return f
        var, lo, hi = self._var, self._lo, self._hi
        vf = var[f]
        while cube != 1 and var[cube] < vf:
            cube = hi[cube]
        if cube == 1:
            return f
        key = (f, cube)
        r = self._quant.get(key)
        if r is not None:
            return r
        if var[cube] == vf:
            nxt = hi[cube]
            r0 = self.exists(lo[f], nxt)
            r = 1 if r0 == 1 else self.or_(r0, self.exists(hi[f], nxt))
        else:
            r = self.mk(vf, self.exists(lo[f], cube), self.exists(hi[f], cube))
        self._quant[key] = r
        return r

    def forall(self, f: int, cube: int) -> int:
        return self.not_(self.exists(self.not_(f), cube))

    def and_exists(self, f: int, g: int, cube: int) -> int:
        """``exists cube . f & g`` without building the conjunction."""
        if f == 0 or g == 0:
            return 0
        if f == 1 and g == 1:
            return 1
        if cube == 1:
            return self.and_(f, g)
        if f == 1 or f == g:
            return self.exists(g, cube)
        if g == 1:
            return self.exists(f, cube)
        if f > g:
            f, g = g, f
        var, lo, hi = self._var, self._lo, self._hi
        top = min(var[f], var[g])
        while cube != 1 and var[cube] < top:
            cube = hi[cube]
        if cube == 1:
            return self.and_(f, g)
        key = (f, g, cube)
        r = self._relprod.get(key)
        if r is not None:
            return r
        f0, f1 = (lo[f], hi[f]) if var[f] == top else (f, f)
        g0, g1 = (lo[g], hi[g]) if var[g] == top else (g, g)
        if var[cube] == top:
            nxt = hi[cube]
            r0 = self.and_exists(f0, g0, nxt)
            r = 1 if r0 == 1 else self.or_(r0, self.and_exists(f1, g1, nxt))
        else:
            r = self.mk(top, self.and_exists(f0, g0, cube), self.and_exists(f1, g1, cube))
        self._relprod[key] = r
        return r

    def restrict(self, f: int, lits: int) -> int:
        """Cofactor of ``f`` by a literal cube built with :meth:`literal_cube`."""
        if f < 2 or lits == 1:
            return f
        var, lo, hi = self._var, self._lo, self._hi
        vf = var[f]
        while lits != 1 and var[lits] < vf:
            lits = hi[lits] if lo[lits] == 0 else lo[lits]
        if lits == 1:
            return f
        key = (f, lits)
        r = self._restr.get(key)
        if r is not None:
            return r
        if var[lits] == vf:
            if lo[lits] == 0:
                r = self.restrict(hi[f], hi[lits])
            else:
                r = self.restrict(lo[f], lo[lits])
        else:
            r = self.mk(vf, self.restrict(lo[f], lits), self.restrict(hi[f], lits))
        self._restr[key] = r
        return r

    def register_map(self, mapping) -> int:
        """Register an injective variable substitution; returns its id."""
        table = list(range(self.nvars))
        for a, b in mapping.items():
            table[a] = b
        self._maps.append(table)
        return len(self._maps) - 1

    def rename(self, f: int, map_id: int) -> int:
        if f < 2:
            return f
        key = (f, map_id)
        r = self._ren.get(key)
        if r is not None:
            return r
        table = self._maps[map_id]
        lo = self.rename(self._lo[f], map_id)
        hi = self.rename(self._hi[f], map_id)
        r = self.ite(self.var(table[self._var[f]]), hi, lo)
        self._ren[key] = r
        return r

    # -- inspection
    def support(self, f: int):
        seen, out, stack = set(), set(), [f]
        while stack:
            u = stack.pop()
            if u < 2 or u in seen:
                continue
            seen.add(u)
            out.add(self._var[u])
            stack.append(self._lo[u])
            stack.append(self._hi[u])
        return sorted(out)

    def node_count(self, f: int) -> int:
        seen, stack = set(), [f]
        while stack:
            u = stack.pop()
            if u in seen:
                continue
            seen.add(u)
            if u >= 2:
                stack.append(self._lo[u])
                stack.append(self._hi[u])
        return len(seen)

    def clear_caches(self) -> None:
        for c in (self._and, self._or, self._xor, self._not, self._ite,
                  self._quant, self._relprod, self._restr, self._ren):
            c.clear()
