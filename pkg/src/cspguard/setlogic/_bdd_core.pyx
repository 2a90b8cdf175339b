# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled ROBDD manager; same interface as ``_bdd_py.Manager``.

Node storage is three growable int32 arrays; the unique table is open
addressing; operation results go to one direct-mapped (lossy) cache.
"""

from libc.stdlib cimport malloc, calloc, realloc, free
from libc.stdint cimport int32_t, uint64_t


cdef enum:
    OP_AND = 1
    OP_OR = 2
    OP_XOR = 3
    OP_NOT = 4
    OP_ITE = 5
    OP_EX = 6
    OP_RELPROD = 7
    OP_RESTR = 8
    OP_REN = 9


cdef struct Entry:
    int32_t op
    int32_t a
    int32_t b
    int32_t c
    int32_t r


cdef inline uint64_t _mix(uint64_t a, uint64_t b, uint64_t c) noexcept nogil:
    cdef uint64_t h = a * <uint64_t>0x9E3779B97F4A7C15ULL
    h ^= b + <uint64_t>0x7F4A7C159E3779B9ULL + (h << 6) + (h >> 2)
    h ^= c * <uint64_t>0xC2B2AE3D27D4EB4FULL + (h << 6) + (h >> 2)
    h ^= h >> 31
    h *= <uint64_t>0xBF58476D1CE4E5B9ULL
    h ^= h >> 29
    return h


cdef class Manager:
    cdef int32_t *_var
    cdef int32_t *_lo
    cdef int32_t *_hi
    cdef int32_t _n
    cdef int32_t _cap
    cdef int32_t *_table
    cdef uint64_t _tmask
    cdef Entry *_cache
    cdef uint64_t _cmask
    cdef int32_t *_maps
    cdef int32_t _nmaps
    cdef readonly int nvars

    IMPL = "cython"

    def __cinit__(self, int nvars, int cache_bits=18):
        self.nvars = nvars
        self._cap = 1 << 12
        self._var = <int32_t *> malloc(self._cap * sizeof(int32_t))
        self._lo = <int32_t *> malloc(self._cap * sizeof(int32_t))
        self._hi = <int32_t *> malloc(self._cap * sizeof(int32_t))
        self._tmask = (1 << 13) - 1
        self._table = <int32_t *> calloc(self._tmask + 1, sizeof(int32_t))
        self._cmask = (<uint64_t>1 << cache_bits) - 1
        self._cache = <Entry *> calloc(self._cmask + 1, sizeof(Entry))
        self._maps = NULL
        self._nmaps = 0
        if not (self._var and self._lo and self._hi and self._table and self._cache):
            raise MemoryError()
        self._var[0] = nvars
        self._var[1] = nvars
        self._lo[0] = 0
        self._hi[0] = 0
        self._lo[1] = 1
        self._hi[1] = 1
        self._n = 2

    def __dealloc__(self):
        free(self._var)
        free(self._lo)
        free(self._hi)
        free(self._table)
        free(self._cache)
        free(self._maps)

    # -- storage
    cdef void _grow_nodes(self) noexcept:
        cdef int32_t cap = self._cap * 2
        self._var = <int32_t *> realloc(self._var, cap * sizeof(int32_t))
        self._lo = <int32_t *> realloc(self._lo, cap * sizeof(int32_t))
        self._hi = <int32_t *> realloc(self._hi, cap * sizeof(int32_t))
        self._cap = cap

    cdef void _grow_table(self) noexcept:
        cdef uint64_t size = (self._tmask + 1) * 2
        cdef uint64_t mask = size - 1
        cdef int32_t *table = <int32_t *> calloc(size, sizeof(int32_t))
        cdef int32_t u
        cdef uint64_t idx
        for u in range(2, self._n):
            idx = _mix(self._var[u], self._lo[u], self._hi[u]) & mask
            while table[idx] != 0:
                idx = (idx + 1) & mask
            table[idx] = u
        free(self._table)
        self._table = table
        self._tmask = mask

    cdef int32_t _mk(self, int32_t v, int32_t l, int32_t h) noexcept:
        if l == h:
            return l
        cdef uint64_t idx = _mix(v, l, h) & self._tmask
        cdef int32_t u
        while True:
            u = self._table[idx]
            if u == 0:
                break
            if self._var[u] == v and self._lo[u] == l and self._hi[u] == h:
                return u
            idx = (idx + 1) & self._tmask
        if self._n == self._cap:
            self._grow_nodes()
        u = self._n
        self._n += 1
        self._var[u] = v
        self._lo[u] = l
        self._hi[u] = h
        self._table[idx] = u
        if <uint64_t>self._n * 2 > self._tmask:
            self._grow_table()
        return u

    cdef inline Entry *_slot(self, int32_t op, int32_t a, int32_t b, int32_t c) noexcept:
        return &self._cache[_mix(a, b, (<uint64_t>c << 4) | op) & self._cmask]

    # -- recursive kernels
    cdef int32_t _and(self, int32_t u, int32_t v) noexcept:
        if u == v or v == 1:
            return u
        if u == 0 or v == 0:
            return 0
        if u == 1:
            return v
        if u > v:
            u, v = v, u
        cdef Entry *e = self._slot(OP_AND, u, v, 0)
        if e.op == OP_AND and e.a == u and e.b == v:
            return e.r
        cdef int32_t a = self._var[u], b = self._var[v], r
        if a == b:
            r = self._mk(a, self._and(self._lo[u], self._lo[v]), self._and(self._hi[u], self._hi[v]))
        elif a < b:
            r = self._mk(a, self._and(self._lo[u], v), self._and(self._hi[u], v))
        else:
            r = self._mk(b, self._and(u, self._lo[v]), self._and(u, self._hi[v]))
        e = self._slot(OP_AND, u, v, 0)
        e.op = OP_AND; e.a = u; e.b = v; e.c = 0; e.r = r
        return r

    cdef int32_t _or(self, int32_t u, int32_t v) noexcept:
        if u == v or v == 0:
            return u
        if u == 1 or v == 1:
            return 1
        if u == 0:
            return v
        if u > v:
            u, v = v, u
        cdef Entry *e = self._slot(OP_OR, u, v, 0)
        if e.op == OP_OR and e.a == u and e.b == v:
            return e.r
        cdef int32_t a = self._var[u], b = self._var[v], r
        if a == b:
            r = self._mk(a, self._or(self._lo[u], self._lo[v]), self._or(self._hi[u], self._hi[v]))
        elif a < b:
            r = self._mk(a, self._or(self._lo[u], v), self._or(self._hi[u], v))
        else:
            r = self._mk(b, self._or(u, self._lo[v]), self._or(u, self._hi[v]))
        e = self._slot(OP_OR, u, v, 0)
        e.op = OP_OR; e.a = u; e.b = v; e.c = 0; e.r = r
        return r

    cdef int32_t _not(self, int32_t u) noexcept:
        if u < 2:
            return 1 - u
        cdef Entry *e = self._slot(OP_NOT, u, 0, 0)
        if e.op == OP_NOT and e.a == u:
            return e.r
        cdef int32_t r = self._mk(self._var[u], self._not(self._lo[u]), self._not(self._hi[u]))
        e = self._slot(OP_NOT, u, 0, 0)
        e.op = OP_NOT; e.a = u; e.b = 0; e.c = 0; e.r = r
        return r

    cdef int32_t _xor(self, int32_t u, int32_t v) noexcept:
        if u == v:
            return 0
        if u == 0:
            return v
        if v == 0:
            return u
        if u == 1:
            return self._not(v)
        if v == 1:
            return self._not(u)
        if u > v:
            u, v = v, u
        cdef Entry *e = self._slot(OP_XOR, u, v, 0)
        if e.op == OP_XOR and e.a == u and e.b == v:
            return e.r
        cdef int32_t a = self._var[u], b = self._var[v], r
        if a == b:
            r = self._mk(a, self._xor(self._lo[u], self._lo[v]), self._xor(self._hi[u], self._hi[v]))
        elif a < b:
            r = self._mk(a, self._xor(self._lo[u], v), self._xor(self._hi[u], v))
        else:
            r = self._mk(b, self._xor(u, self._lo[v]), self._xor(u, self._hi[v]))
        e = self._slot(OP_XOR, u, v, 0)
        e.op = OP_XOR; e.a = u; e.b = v; e.c = 0; e.r = r
        return r

    cdef int32_t _ite(self, int32_t f, int32_t g, int32_t h) noexcept:
        if f == 1:
            return g
        if f == 0:
            return h
        if g == h:
            return g
        if g == 1 and h == 0:
            return f
        if g == 0 and h == 1:
            return self._not(f)
        if g == 1:
            return self._or(f, h)
        if h == 0:
            return self._and(f, g)
        cdef Entry *e = self._slot(OP_ITE, f, g, h)
        if e.op == OP_ITE and e.a == f and e.b == g and e.c == h:
            return e.r
        cdef int32_t top = self._var[f]
        if self._var[g] < top:
            top = self._var[g]
        if self._var[h] < top:
            top = self._var[h]
        cdef int32_t f0 = f, f1 = f, g0 = g, g1 = g, h0 = h, h1 = h
        if self._var[f] == top:
            f0 = self._lo[f]; f1 = self._hi[f]
        if self._var[g] == top:
            g0 = self._lo[g]; g1 = self._hi[g]
        if self._var[h] == top:
            h0 = self._lo[h]; h1 = self._hi[h]
        cdef int32_t r = self._mk(top, self._ite(f0, g0, h0), self._ite(f1, g1, h1))
        e = self._slot(OP_ITE, f, g, h)
        e.op = OP_ITE; e.a = f; e.b = g; e.c = h; e.r = r
        return r

    cdef int32_t _exists(self, int32_t f, int32_t cube) noexcept:
        if f < 2 or cube == 1:
            return f
        cdef int32_t vf = self._var[f]
        while cube != 1 and self._var[cube] < vf:
            cube = self._hi[cube]
        if cube == 1:
            return f
        cdef Entry *e = self._slot(OP_EX, f, cube, 0)
        if e.op == OP_EX and e.a == f and e.b == cube:
            return e.r
        cdef int32_t r, r0, nxt
        if self._var[cube] == vf:
            nxt = self._hi[cube]
            r0 = self._exists(self._lo[f], nxt)
            if r0 == 1:
                r = 1
            else:
                r = self._or(r0, self._exists(self._hi[f], nxt))
        else:
            r = self._mk(vf, self._exists(self._lo[f], cube), self._exists(self._hi[f], cube))
        e = self._slot(OP_EX, f, cube, 0)
        e.op = OP_EX; e.a = f; e.b = cube; e.c = 0; e.r = r
        return r

    cdef int32_t _relprod(self, int32_t f, int32_t g, int32_t cube) noexcept:
        if f == 0 or g == 0:
            return 0
        if f == 1 and g == 1:
            return 1
        if cube == 1:
            return self._and(f, g)
        if f == 1 or f == g:
            return self._exists(g, cube)
        if g == 1:
            return self._exists(f, cube)
        if f > g:
            f, g = g, f
        cdef int32_t top = self._var[f]
        if self._var[g] < top:
            top = self._var[g]
        while cube != 1 and self._var[cube] < top:
            cube = self._hi[cube]
        if cube == 1:
            return self._and(f, g)
        cdef Entry *e = self._slot(OP_RELPROD, f, g, cube)
        if e.op == OP_RELPROD and e.a == f and e.b == g and e.c == cube:
            return e.r
        cdef int32_t f0 = f, f1 = f, g0 = g, g1 = g, r, r0, nxt
        if self._var[f] == top:
            f0 = self._lo[f]; f1 = self._hi[f]
        if self._var[g] == top:
            g0 = self._lo[g]; g1 = self._hi[g]
        if self._var[cube] == top:
            nxt = self._hi[cube]
            r0 = self._relprod(f0, g0, nxt)
            if r0 == 1:
                r = 1
            else:
                r = self._or(r0, self._relprod(f1, g1, nxt))
        else:
            r = self._mk(top, self._relprod(f0, g0, cube), self._relprod(f1, g1, cube))
        e = self._slot(OP_RELPROD, f, g, cube)
        e.op = OP_RELPROD; e.a = f; e.b = g; e.c = cube; e.r = r
        return r

    cdef int32_t _restrict(self, int32_t f, int32_t lits) noexcept:
        if f < 2 or lits == 1:
            return f
        cdef int32_t vf = self._var[f]
        while lits != 1 and self._var[lits] < vf:
            lits = self._hi[lits] if self._lo[lits] == 0 else self._lo[lits]
        if lits == 1:
            return f
        cdef Entry *e = self._slot(OP_RESTR, f, lits, 0)
        if e.op == OP_RESTR and e.a == f and e.b == lits:
            return e.r
        cdef int32_t r
        if self._var[lits] == vf:
            if self._lo[lits] == 0:
                r = self._restrict(self._hi[f], self._hi[lits])
            else:
                r = self._restrict(self._lo[f], self._lo[lits])
        else:
            r = self._mk(vf, self._restrict(self._lo[f], lits), self._restrict(self._hi[f], lits))
        e = self._slot(OP_RESTR, f, lits, 0)
        e.op = OP_RESTR; e.a = f; e.b = lits; e.c = 0; e.r = r
        return r

    cdef int32_t _rename(self, int32_t f, int32_t mid) noexcept:
        if f < 2:
            return f
        cdef Entry *e = self._slot(OP_REN, f, mid, 0)
        if e.op == OP_REN and e.a == f and e.b == mid:
            return e.r
        cdef int32_t lo = self._rename(self._lo[f], mid)
        cdef int32_t hi = self._rename(self._hi[f], mid)
        cdef int32_t v = self._maps[mid * self.nvars + self._var[f]]
        cdef int32_t r = self._ite(self._mk(v, 0, 1), hi, lo)
        e = self._slot(OP_REN, f, mid, 0)
        e.op = OP_REN; e.a = f; e.b = mid; e.c = 0; e.r = r
        return r

    # -- Python interface
    @property
    def size(self):
        return self._n

    def level(self, int u):
        return self._var[u]

    def low(self, int u):
        return self._lo[u]

    def high(self, int u):
        return self._hi[u]

    def mk(self, int v, int lo, int hi):
        return self._mk(v, lo, hi)

    def var(self, int i):
        return self._mk(i, 0, 1)

    def nvar(self, int i):
        return self._mk(i, 1, 0)

    def cube(self, variables):
        cdef int32_t u = 1
        for v in sorted(set(variables), reverse=True):
            u = self._mk(v, 0, u)
        return u

    def literal_cube(self, assignment):
        cdef int32_t u = 1
        for v in sorted(assignment, reverse=True):
            if assignment[v]:
                u = self._mk(v, 0, u)
            else:
                u = self._mk(v, u, 0)
        return u

    def and_(self, int u, int v):
        return self._and(u, v)

    def or_(self, int u, int v):
        return self._or(u, v)

    def xor(self, int u, int v):
        return self._xor(u, v)

    def not_(self, int u):
        return self._not(u)

    def ite(self, int f, int g, int h):
        return self._ite(f, g, h)

    def equiv(self, int u, int v):
        return self._not(self._xor(u, v))

    def implies(self, int u, int v):
        return self._or(self._not(u), v)

    def exists(self, int f, int cube):
        return self._exists(f, cube)

    def forall(self, int f, int cube):
        return self._not(self._exists(self._not(f), cube))

    def and_exists(self, int f, int g, int cube):
        return self._relprod(f, g, cube)

    def restrict(self, int f, int lits):
        return self._restrict(f, lits)

    def register_map(self, mapping):
        cdef int32_t i
        cdef int32_t base = self._nmaps * self.nvars
        self._maps = <int32_t *> realloc(self._maps, (base + self.nvars) * sizeof(int32_t))
        for i in range(self.nvars):
            self._maps[base + i] = i
        for a, b in mapping.items():
            self._maps[base + <int32_t>a] = b
        self._nmaps += 1
        return self._nmaps - 1

    def rename(self, int f, int map_id):
        if map_id < 0 or map_id >= self._nmaps:
            raise IndexError("unknown variable map")
        return self._rename(f, map_id)

    def support(self, int f):
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

    def node_count(self, int f):
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

    def clear_caches(self):
        cdef uint64_t i
        for i in range(self._cmask + 1):
            self._cache[i].op = 0
