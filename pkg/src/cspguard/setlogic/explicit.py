"""Explicit backend: families as bitmaps packed into Python integers.

A set family over ``n`` events is a ``2**n``-bit integer (bit ``V`` set iff
``V`` is a member); a pair family is a ``4**n``-bit integer with bit
``U | V << n`` for the pair ``(U, V)``.  Closures are shift sweeps, one per
event; reindexing (renaming, diagonals, row/column broadcasts) goes through
numpy bit arrays.
"""

from __future__ import annotations

from functools import lru_cache
from typing import List, Sequence, Tuple

import numpy as np

from .families import PAIR, SET, Algebra, CapExceeded

DEFAULT_CAP = 12


def _bits(x: int, nbits: int) -> np.ndarray:
    nbytes = max(1, (nbits + 7) // 8)
    raw = np.frombuffer(x.to_bytes(nbytes, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:nbits]


def _int(bits: np.ndarray) -> int:
    return int.from_bytes(np.packbits(bits.astype(np.uint8, copy=False), bitorder="little").tobytes(), "little")


@lru_cache(maxsize=None)
def _index_mask(j: int, width: int) -> int:
    """Bits ``i < width`` whose index has bit ``j`` clear."""
    if j < 3:
        pattern = bytes([(0x55, 0x33, 0x0F)[j]])
    else:
        z = 1 << (j - 3)
        pattern = b"\xff" * z + b"\x00" * z
    nbytes = max(1, width // 8)
    reps = -(-nbytes // len(pattern))
    m = int.from_bytes((pattern * reps)[:nbytes], "little")
    return m & ((1 << width) - 1)


class ExplicitAlgebra(Algebra):
    backend = "explicit"

    def __init__(self, alphabet: Sequence[str], cap: int = DEFAULT_CAP):
        super().__init__(alphabet)
        if self.n > cap:
            raise CapExceeded(f"explicit backend supports at most {cap} events, got {self.n}")
        n = self.n
        self.N = 1 << n
        self.set_width = self.N
        self.pair_width = self.N * self.N
        self.full_set = (1 << self.set_width) - 1
        self.full_pair = (1 << self.pair_width) - 1
        self._set_masks = [_index_mask(k, self.set_width) for k in range(n)]
        self._pair_masks = [_index_mask(j, self.pair_width) for j in range(2 * n)]
        self._ids = np.arange(self.N, dtype=np.int64)

    # -- boolean algebra
    def _empty(self, kind):
        return 0

    def _full(self, kind):
        return self.full_set if kind == SET else self.full_pair

    def _or(self, a, b):
        return a | b

    def _and(self, a, b):
        return a & b

    def _not(self, kind, a):
        return self._full(kind) ^ a

    def _is_empty(self, a):
        return a == 0

    def _count(self, kind, a):
        return a.bit_count()

    def _contains_set(self, a, v):
        return bool(a >> v & 1)

    def _contains_pair(self, a, u, v):
        return bool(a >> (u | v << self.n) & 1)

    def _indices(self, a: int) -> List[int]:
        if a == 0:
            return []
        raw = a.to_bytes((a.bit_length() + 7) // 8, "little")
        arr = np.frombuffer(raw, dtype=np.uint8)
        out = []
        for byte in np.flatnonzero(arr).tolist():
            val = raw[byte]
            base = byte << 3
            while val:
                low = val & -val
                out.append(base + low.bit_length() - 1)
                val ^= low
        return out

    def _members(self, kind, a):
        idx = self._indices(a)
        if kind == SET:
            return idx
        lowmask = self.N - 1
        return [(i & lowmask, i >> self.n) for i in idx]

    def _witness(self, kind, a):
        i = (a & -a).bit_length() - 1
        if kind == SET:
            return i
        return (i & (self.N - 1), i >> self.n)

    # -- constructors
    def _sets(self, masks):
        out = 0
        for m in masks:
            out |= 1 << m
        return out

    def _pairs(self, pairs):
        out = 0
        for u, v in pairs:
            out |= 1 << (u | v << self.n)
        return out

    def _sets_containing(self, i):
        return self.full_set ^ self._set_masks[i]

    def _disjoint_sets(self, a):
        return _int((self._ids & a) == 0)

    def _subset_pairs(self):
        return self._dcl_first(self._diag_pairs(self.full_set))

    def _second_in(self, s):
        return _int(np.repeat(_bits(s, self.N), self.N))

    def _first_in(self, s):
        return _int(np.tile(_bits(s, self.N), self.N))

    def _diagonal(self, p):
        return _int(_bits(p, self.pair_width)[:: self.N + 1])

    def _diag_pairs(self, s):
        out = np.zeros(self.pair_width, dtype=np.uint8)
        out[:: self.N + 1] = _bits(s, self.N)
        return _int(out)

    def _column(self, p, v):
        return (p >> (v << self.n)) & self.full_set

    # -- closures
    def _ucl_set(self, s):
        for k, m in enumerate(self._set_masks):
            s |= (s & m) << (1 << k)
        return s

    def _dcl_set(self, s):
        for k, m in enumerate(self._set_masks):
            s |= (s >> (1 << k)) & m
        return s

    def _ucl_second(self, p):
        n = self.n
        for k in range(n):
            p |= (p & self._pair_masks[n + k]) << (1 << (n + k))
        return p

    def _dcl_second(self, p):
        n = self.n
        for k in range(n):
            p |= (p >> (1 << (n + k))) & self._pair_masks[n + k]
        return p

    def _dcl_first(self, p):
        for k in range(self.n):
            p |= (p >> (1 << k)) & self._pair_masks[k]
        return p

    # -- images
    def _rpre(self, img: Tuple[int, ...]) -> np.ndarray:
        """``Rpre[V] = {a | R(a) <= V}`` for every V."""
        r = np.zeros(self.N, dtype=np.int64)
        for a, im in enumerate(img):
            r |= ((self._ids & im) == im).astype(np.int64) << a
        return r

    def _rename_image(self, kind, f, img):
        # R(V') <= V  iff  V' <= Rpre(V): read the up-closure at Rpre(V)
        r = self._rpre(img)
        if kind == SET:
            return _int(_bits(self._ucl_set(f), self.N)[r])
        rows = _bits(self._ucl_second(f), self.pair_width).reshape(self.N, self.N)
        return _int(rows[r, :].reshape(-1))

    def _meet_first(self, p, s):
        if self._dcl_first(p) == p:
            # down-closed in U: the meet with some U2 adds nothing new, it
            # only requires U to sit below a member of s
            return p & self._first_in(self._dcl_set(s))
        rows = _bits(p, self.pair_width).reshape(self.N, self.N)
        out = np.zeros_like(rows)
        for u2 in self._members(SET, s):
            target = self._ids & u2
            np.logical_or.at(out, (slice(None), target), rows)
        return _int(out.reshape(-1))

    # -- fair/co-fair families
    def _phi_parallel(self, p1, p2, a):
        n = self.n
        ms1 = self._members(PAIR, p1)
        ms2 = self._members(PAIR, p2)
        out = set()
        for f1, c1 in ms1:
            for f2, c2 in ms2:
                f = f1 | f2
                c = (c1 & a) | (c2 & a) | ((c1 & ~a) & (c2 & ~a))
                if f & c == 0:
                    out.add(f | c << n)
        for f, c in ms1:
            if f & a == 0:
                out.add(f | c << n)
        for f, c in ms2:
            if f & a == 0:
                out.add(f | c << n)
        return self._sets(out)

    def _phi_hide(self, p, a):
        n = self.n
        return self._sets({(f & ~a) | (c | a) << n for f, c in self._members(PAIR, p)})

    def _phi_rename(self, p, img):
        n = self.n
        pre = [self.preimage(img, 1 << b) for b in range(n)]
        out = set()
        for f1, c1 in self._members(PAIR, p):
            c = 0
            for b in range(n):
                if pre[b] & ~c1 == 0:
                    c |= 1 << b
            top = self.image(img, f1)
            sub = top
            while True:
                # F <= R(F') holds by construction; check F' <= R^-1(F)
                if f1 & ~self.preimage(img, sub) == 0:
                    out.add(sub | c << n)
                if sub == 0:
                    break
                sub = (sub - 1) & top
        return self._sets(out)

    def _phi_has_F_within(self, p, a):
        return any(f & ~a == 0 for f, _ in self._members(PAIR, p))
