"""Backend-neutral family API.

A :class:`Family` is an immutable handle (algebra, kind, raw value).  ``kind``
is ``"set"`` for families of subsets of the alphabet and ``"pair"`` for
families of pairs ``(U, V)``.  Event sets are bitmasks over the algebra's
alphabet (bit ``i`` = ``alphabet[i]``).  Raw values are backend specific and
only ever combined inside one algebra.
"""

from __future__ import annotations

from typing import FrozenSet, Iterable, List, Sequence, Tuple, Union

SET = "set"
PAIR = "pair"


class FamilyError(Exception):
    pass


class BackendMismatch(FamilyError):
    pass


class AlphabetMismatch(FamilyError):
    pass


class CapExceeded(FamilyError):
    pass


class KindMismatch(FamilyError, TypeError):
    pass


Member = Union[int, Tuple[int, int]]


class Family:
    __slots__ = ("algebra", "kind", "raw")

    def __init__(self, algebra: "Algebra", kind: str, raw):
        self.algebra = algebra
        self.kind = kind
        self.raw = raw

    def __or__(self, other: "Family") -> "Family":
        return self.algebra.union(self, other)

    def __and__(self, other: "Family") -> "Family":
        return self.algebra.intersect(self, other)

    def __sub__(self, other: "Family") -> "Family":
        return self.algebra.intersect(self, self.algebra.complement(other))

    def __invert__(self) -> "Family":
        return self.algebra.complement(self)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Family):
            return NotImplemented
        self.algebra.check(self, other)
        return self.raw == other.raw

    def __hash__(self):
        return hash((id(self.algebra), self.kind, self.raw))

    def __le__(self, other: "Family") -> bool:
        return (self - other).is_empty()

    def __contains__(self, member) -> bool:
        return self.algebra.contains(self, member)

    def __bool__(self):
        raise TypeError("use is_empty() to test a family")

    def is_empty(self) -> bool:
        return self.algebra.is_empty(self)

    def members(self, cap: int = 1 << 20) -> List[Member]:
        return self.algebra.members(self, cap)

    def count(self) -> int:
        return self.algebra.count(self)

    def named(self, cap: int = 1 << 20):
        """Members with event names instead of bitmasks."""
        alg = self.algebra
        if self.kind == SET:
            return [alg.names(m) for m in self.members(cap)]
        return [(alg.names(u), alg.names(v)) for u, v in self.members(cap)]

    def __repr__(self):
        alg = self.algebra
        head = f"{alg.backend}:{self.kind}"
        try:
            n = self.count()
        except FamilyError:
            return f"<{head}>"
        if n > 8:
            return f"<{head} |{n}|>"
        return f"<{head} {[_fmt(m, alg) for m in self.members()]}>"


def _fmt(m, alg) -> str:
    if isinstance(m, tuple):
        return f"({_fmt(m[0], alg)},{_fmt(m[1], alg)})"
    return "{" + ",".join(sorted(alg.names(m))) + "}"


class Algebra:
    """Shared front of both backends.  Subclasses provide the ``_raw`` ops."""

    backend = "abstract"

    def __init__(self, alphabet: Sequence[str]):
        self.alphabet = tuple(alphabet)
        self.n = len(self.alphabet)
        self.index = {e: i for i, e in enumerate(self.alphabet)}
        if len(self.index) != self.n:
            raise ValueError("alphabet has repeated events")
        self.universe = (1 << self.n) - 1

    # -- event encoding
    def mask(self, events: Iterable[str]) -> int:
        m = 0
        for e in events:
            m |= 1 << self.index[e]
        return m

    def names(self, mask: int) -> FrozenSet[str]:
        return frozenset(self.alphabet[i] for i in range(self.n) if mask >> i & 1)

    def renaming(self, pairs) -> Tuple[int, ...]:
        """Image masks ``img[a] = R({a})`` from name pairs; unmapped events keep their name."""
        img = [0] * self.n
        for a, b in pairs:
            img[self.index[a]] |= 1 << self.index[b]
        for i in range(self.n):
            if not img[i]:
                img[i] = 1 << i
        return tuple(img)

    def image(self, img: Sequence[int], mask: int) -> int:
        out = 0
        for i in range(self.n):
            if mask >> i & 1:
                out |= img[i]
        return out

    def preimage(self, img: Sequence[int], mask: int) -> int:
        """``R^-1(mask)``: events with some image inside ``mask``."""
        out = 0
        for i in range(self.n):
            if img[i] & mask:
                out |= 1 << i
        return out

    # -- bookkeeping
    def wrap(self, kind: str, raw) -> Family:
        return Family(self, kind, raw)

    def check(self, *fams: Family) -> None:
        for f in fams:
            if f.algebra is self:
                continue
            if f.algebra.alphabet != self.alphabet:
                raise AlphabetMismatch(f"alphabets differ: {f.algebra.alphabet} vs {self.alphabet}")
            if f.algebra.backend != self.backend:
                raise BackendMismatch(f"cannot mix {f.algebra.backend} and {self.backend} families")
            raise BackendMismatch("families belong to different stores")

    def _same_kind(self, a: Family, b: Family) -> str:
        self.check(a, b)
        if a.kind != b.kind:
            raise KindMismatch(f"{a.kind} family combined with {b.kind} family")
        return a.kind

    def _want(self, f: Family, kind: str) -> None:
        self.check(f)
        if f.kind != kind:
            raise KindMismatch(f"expected a {kind} family, got {f.kind}")

    # -- boolean algebra
    def empty(self, kind: str) -> Family:
        return self.wrap(kind, self._empty(kind))

    def full(self, kind: str) -> Family:
        return self.wrap(kind, self._full(kind))

    def union(self, a: Family, b: Family) -> Family:
        return self.wrap(self._same_kind(a, b), self._or(a.raw, b.raw))

    def intersect(self, a: Family, b: Family) -> Family:
        return self.wrap(self._same_kind(a, b), self._and(a.raw, b.raw))

    def complement(self, a: Family) -> Family:
        self.check(a)
        return self.wrap(a.kind, self._not(a.kind, a.raw))

    def is_empty(self, a: Family) -> bool:
        self.check(a)
        return self._is_empty(a.raw)

    def count(self, a: Family) -> int:
        self.check(a)
        return self._count(a.kind, a.raw)

    def contains(self, a: Family, member) -> bool:
        self.check(a)
        if a.kind == SET:
            return self._contains_set(a.raw, self._as_mask(member))
        u, v = member
        return self._contains_pair(a.raw, self._as_mask(u), self._as_mask(v))

    def members(self, a: Family, cap: int = 1 << 20) -> List[Member]:
        """Sorted members: sets by mask value, pairs by (V, U)."""
        self.check(a)
        if self._count(a.kind, a.raw) > cap:
            raise CapExceeded(f"family has more than {cap} members")
        return self._members(a.kind, a.raw)

    def witness(self, a: Family):
        """The least member (smallest V, then smallest U), or None."""
        self.check(a)
        if self._is_empty(a.raw):
            return None
        return self._witness(a.kind, a.raw)

    def _as_mask(self, x) -> int:
        if isinstance(x, int):
            return x
        return self.mask(x)

    # -- constructors
    def sets(self, members: Iterable) -> Family:
        return self.wrap(SET, self._sets([self._as_mask(m) for m in members]))

    def pairs(self, members: Iterable) -> Family:
        return self.wrap(PAIR, self._pairs([(self._as_mask(u), self._as_mask(v)) for u, v in members]))

    def sets_containing(self, event) -> Family:
        i = self.index[event] if isinstance(event, str) else event
        return self.wrap(SET, self._sets_containing(i))

    def disjoint_sets(self, a) -> Family:
        """``{V | V & a = 0}``."""
        return self.wrap(SET, self._disjoint_sets(self._as_mask(a)))

    def subset_pairs(self) -> Family:
        """``{(U, V) | U <= V}``."""
        return self.wrap(PAIR, self._subset_pairs())

    def second_in(self, s: Family) -> Family:
        """``{(U, V) | V in s}``."""
        self._want(s, SET)
        return self.wrap(PAIR, self._second_in(s.raw))

    def first_in(self, s: Family) -> Family:
        """``{(U, V) | U in s}``."""
        self._want(s, SET)
        return self.wrap(PAIR, self._first_in(s.raw))

    def product(self, s1: Family, s2: Family) -> Family:
        return self.intersect(self.first_in(s1), self.second_in(s2))

    def diagonal(self, p: Family) -> Family:
        """``{W | (W, W) in p}``."""
        self._want(p, PAIR)
        return self.wrap(SET, self._diagonal(p.raw))

    def diag_pairs(self, s: Family) -> Family:
        """``{(W, W) | W in s}``."""
        self._want(s, SET)
        return self.wrap(PAIR, self._diag_pairs(s.raw))

    def column(self, p: Family, v) -> Family:
        """``{U | (U, v) in p}``."""
        self._want(p, PAIR)
        return self.wrap(SET, self._column(p.raw, self._as_mask(v)))

    # -- closures
    def ucl(self, s: Family) -> Family:
        self._want(s, SET)
        return self.wrap(SET, self._ucl_set(s.raw))

    def dcl(self, s: Family) -> Family:
        self._want(s, SET)
        return self.wrap(SET, self._dcl_set(s.raw))

    def ucl_second(self, p: Family) -> Family:
        self._want(p, PAIR)
        return self.wrap(PAIR, self._ucl_second(p.raw))

    def dcl_second(self, p: Family) -> Family:
        self._want(p, PAIR)
        return self.wrap(PAIR, self._dcl_second(p.raw))

    def dcl_first(self, p: Family) -> Family:
        self._want(p, PAIR)
        return self.wrap(PAIR, self._dcl_first(p.raw))

    def udcl(self, p: Family) -> Family:
        """Down-closed in U and up-closed in V."""
        self._want(p, PAIR)
        return self.wrap(PAIR, self._ucl_second(self._dcl_first(p.raw)))

    # -- images
    def hide_image(self, f: Family, a) -> Family:
        """``{(U, V) | (U, V') in f, V' & a = 0, V' <= V}`` (or the set analogue)."""
        self.check(f)
        a = self._as_mask(a)
        if f.kind == SET:
            return self.wrap(SET, self._ucl_set(self._and(f.raw, self._disjoint_sets(a))))
        return self.wrap(PAIR, self._ucl_second(self._and(f.raw, self._second_in(self._disjoint_sets(a)))))

    def rename_image(self, f: Family, img: Sequence[int]) -> Family:
        """``{(U, V) | (U, V') in f, R(V') <= V}`` (or the set analogue)."""
        self.check(f)
        return self.wrap(f.kind, self._rename_image(f.kind, f.raw, tuple(img)))

    def meet_first(self, p: Family, s: Family) -> Family:
        """``{(U1 & U2, V) | (U1, V) in p, U2 in s}``."""
        self._want(p, PAIR)
        self._want(s, SET)
        return self.wrap(PAIR, self._meet_first(p.raw, s.raw))

    # -- fair/co-fair pair families (members are (F, C))
    def phi_parallel(self, p1: Family, p2: Family, a) -> Family:
        self._want(p1, PAIR)
        self._want(p2, PAIR)
        return self.wrap(PAIR, self._phi_parallel(p1.raw, p2.raw, self._as_mask(a)))

    def phi_hide(self, p: Family, a) -> Family:
        self._want(p, PAIR)
        return self.wrap(PAIR, self._phi_hide(p.raw, self._as_mask(a)))

    def phi_rename(self, p: Family, img: Sequence[int]) -> Family:
        self._want(p, PAIR)
        return self.wrap(PAIR, self._phi_rename(p.raw, tuple(img)))

    def phi_has_F_within(self, p: Family, a) -> bool:
        """Is there a member (F, C) with F <= a?"""
        self._want(p, PAIR)
        return self._phi_has_F_within(p.raw, self._as_mask(a))

    # -- debugging
    def dump(self, f: Family) -> str:
        return "\n".join(_fmt(m, self) for m in self.members(f))

    def convert(self, f: Family) -> Family:
        """Re-encode a family from another algebra over the same alphabet."""
        if f.algebra is self:
            return f
        if f.algebra.alphabet != self.alphabet:
            raise AlphabetMismatch("cannot convert between alphabets")
        ms = f.members()
        return self.sets(ms) if f.kind == SET else self.pairs(ms)
