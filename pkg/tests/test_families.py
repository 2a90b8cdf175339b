"""Both backends against a plain-set reference model."""

import random

import pytest

from cspguard.setlogic import (
    PAIR,
    SET,
    AlphabetMismatch,
    BackendMismatch,
    CapExceeded,
    ExplicitAlgebra,
    KindMismatch,
    SymbolicAlgebra,
    backend_parity,
    make_algebra,
)

BACKENDS = ["explicit", "symbolic"]


def sub(a, b):
    return a & ~b == 0


class Ref:
    """Families as Python sets of masks / mask pairs."""

    def __init__(self, n):
        self.n = n
        self.all = range(1 << n)

    def ucl(self, s):
        return {v for v in self.all if any(sub(w, v) for w in s)}

    def dcl(self, s):
        return {v for v in self.all if any(sub(v, w) for w in s)}

    def udcl(self, p):
        return {(u, v) for u in self.all for v in self.all if any(sub(u, u2) and sub(v2, v) for u2, v2 in p)}

    def ucl_second(self, p):
        return {(u, v) for u in self.all for v in self.all if any(u2 == u and sub(v2, v) for u2, v2 in p)}

    def hide(self, p, a):
        return {(u, v) for u in self.all for v in self.all if any(u2 == u and v2 & a == 0 and sub(v2, v) for u2, v2 in p)}

    def image(self, img, m):
        out = 0
        for i in range(self.n):
            if m >> i & 1:
                out |= img[i]
        return out

    def rename(self, p, img):
        return {(u, v) for u in self.all for v in self.all if any(u2 == u and sub(self.image(img, v2), v) for u2, v2 in p)}

    def meet_first(self, p, s):
        return {(u1 & u2, v) for u1, v in p for u2 in s}

    def phi_par(self, p1, p2, a):
        out = set()
        for f1, c1 in p1:
            for f2, c2 in p2:
                c = (c1 & a) | (c2 & a) | ((c1 & ~a) & (c2 & ~a))
                f = f1 | f2
                if f & c == 0:
                    out.add((f, c))
        out |= {(f, c) for f, c in p1 | p2 if f & a == 0}
        return out

    def phi_hide(self, p, a):
        return {(f & ~a, c | a) for f, c in p}

    def phi_rename(self, p, img):
        n = self.n
        pre = lambda m: sum(1 << a for a in range(n) if img[a] & m)  # noqa: E731
        out = set()
        for f1, c1 in p:
            c = sum(1 << b for b in range(n) if sub(pre(1 << b), c1))
            for f in self.all:
                if sub(f1, pre(f)) and sub(f, self.image(img, f1)):
                    out.add((f, c))
        return out


def random_sets(rng, n, k=None):
    return {rng.randrange(1 << n) for _ in range(k if k is not None else rng.randint(0, 5))}


def random_pairs(rng, n, k=None):
    return {(rng.randrange(1 << n), rng.randrange(1 << n)) for _ in range(k if k is not None else rng.randint(0, 6))}


def random_relation(rng, n):
    img = []
    for _ in range(n):
        m = 0
        while m == 0:
            m = rng.randrange(1 << n)
        img.append(m)
    return tuple(img)


@pytest.mark.parametrize("backend", BACKENDS)
def test_operations_match_reference(backend):
    rng = random.Random(42)
    for n in (1, 2, 3):
        alg = make_algebra([f"e{i}" for i in range(n)], backend)
        ref = Ref(n)
        for _ in range(60):
            s, p, q = random_sets(rng, n), random_pairs(rng, n), random_pairs(rng, n)
            S, P, Q = alg.sets(s), alg.pairs(p), alg.pairs(q)
            a = rng.randrange(1 << n)
            img = random_relation(rng, n)
            assert set(alg.ucl(S).members()) == ref.ucl(s)
            assert set(alg.dcl(S).members()) == ref.dcl(s)
            assert set(alg.udcl(P).members()) == ref.udcl(p)
            assert set(alg.ucl_second(P).members()) == ref.ucl_second(p)
            assert set(alg.hide_image(P, a).members()) == ref.hide(p, a)
            assert set(alg.rename_image(P, img).members()) == ref.rename(p, img)
            assert set(alg.meet_first(P, S).members()) == ref.meet_first(p, s)
            assert set(alg.meet_first(alg.udcl(P), S).members()) == ref.meet_first(ref.udcl(p), s)
            assert set(alg.diagonal(P).members()) == {u for u, v in p if u == v}
            assert set(alg.column(P, a).members()) == {u for u, v in p if v == a}
            assert set(alg.second_in(S).members()) == {(u, v) for u in ref.all for v in s}
            assert set(alg.first_in(S).members()) == {(u, v) for u in s for v in ref.all}
            assert set(alg.diag_pairs(S).members()) == {(v, v) for v in s}
            assert set(alg.disjoint_sets(a).members()) == {v for v in ref.all if v & a == 0}
            assert set(alg.phi_parallel(P, Q, a).members()) == ref.phi_par(p, q, a)
            assert set(alg.phi_hide(P, a).members()) == ref.phi_hide(p, a)
            assert set(alg.phi_rename(P, img).members()) == ref.phi_rename(p, img)
            assert alg.phi_has_F_within(P, a) == any(sub(f, a) for f, _ in p)
            assert (P | Q).members() == sorted(p | q, key=lambda m: (m[1], m[0]))
            assert set((P & Q).members()) == p & q
            assert set((~P).members()) == {(u, v) for u in ref.all for v in ref.all} - p


@pytest.mark.parametrize("backend", BACKENDS)
def test_lattice_laws_and_closure_idempotence(backend):
    rng = random.Random(7)
    alg = make_algebra(["a", "b", "c"], backend)
    for _ in range(1000 // 4):
        x, y, z = (alg.pairs(random_pairs(rng, 3)) for _ in range(3))
        assert ~(x | y) == (~x & ~y)
        assert ~(x & y) == (~x | ~y)
        assert (x & (y | z)) == ((x & y) | (x & z))
        assert (x | (x & y)) == x
        assert alg.udcl(alg.udcl(x)) == alg.udcl(x)
        assert x <= alg.ucl_second(x) and x <= alg.udcl(x)
        s = alg.sets(random_sets(rng, 3))
        assert alg.ucl(alg.ucl(s)) == alg.ucl(s) and alg.dcl(alg.dcl(s)) == alg.dcl(s)
        assert s <= alg.dcl(s)


@pytest.mark.parametrize("backend", BACKENDS)
def test_documented_examples(backend):
    alg = make_algebra(["a", "b"], backend)
    x = alg.pairs([({"a"}, {"b"}), (set(), {"a", "b"})])
    assert alg.empty(PAIR) | x == x
    assert alg.full(PAIR) & x == x
    assert ({"a"}, {"a", "b"}) in alg.subset_pairs()
    assert alg.ucl(alg.sets([{"a"}])).named() == [frozenset({"a"}), frozenset({"a", "b"})]
    assert alg.dcl(alg.sets([{"a", "b"}])).count() == 4
    assert alg.udcl(alg.pairs([({"a", "b"}, {"a"})])) == alg.second_in(alg.sets_containing("a"))
    swap = alg.renaming([("a", "b"), ("b", "b")])
    f = alg.pairs([(set(), {"a"})])
    assert alg.rename_image(f, swap) == alg.first_in(alg.sets([0])) & alg.second_in(alg.sets_containing("b"))
    ident = alg.renaming([("a", "a"), ("b", "b")])
    assert alg.rename_image(x, ident) == alg.ucl_second(x)
    alg3 = make_algebra(["a", "b", "c"], backend)
    r = alg3.renaming([("a", "b"), ("a", "c")])
    got = alg3.rename_image(alg3.pairs([(set(), {"a"})]), r)
    want = alg3.first_in(alg3.sets([0])) & alg3.second_in(alg3.sets_containing("b") & alg3.sets_containing("c"))
    assert got == want
    # hiding example: a single pair loses the hidden event from F and gains it in C
    assert alg.phi_hide(alg.pairs([({"a", "b"}, set())]), alg.mask({"a"})).named() == [
        (frozenset({"b"}), frozenset({"a"}))
    ]


def test_backend_parity_on_random_op_sequences():
    rng = random.Random(2024)
    events = [f"e{i}" for i in range(6)]
    ex, sy = ExplicitAlgebra(events), SymbolicAlgebra(events)
    for _ in range(500):
        p = random_pairs(rng, 6, 4)
        s = random_sets(rng, 6, 3)
        a = rng.randrange(64)
        img = random_relation(rng, 6)
        fams = []
        for alg in (ex, sy):
            P, S = alg.pairs(p), alg.sets(s)
            op = rng.getstate()
            r = alg.udcl(alg.hide_image(P, a)) | alg.meet_first(P, S)
            r = alg.rename_image(r, img) & ~alg.second_in(alg.ucl(S))
            r = r | alg.phi_parallel(P, alg.phi_hide(P, a), a)
            fams.append(r)
            rng.setstate(op)
        assert backend_parity(*fams)
    assert not backend_parity(ex.full(PAIR), sy.empty(PAIR))


def test_errors():
    a, b = ExplicitAlgebra(["a"]), ExplicitAlgebra(["a", "b"])
    with pytest.raises(AlphabetMismatch):
        a.full(SET) | b.full(SET)
    with pytest.raises(BackendMismatch):
        a.full(SET) | SymbolicAlgebra(["a"]).full(SET)
    with pytest.raises(KindMismatch):
        a.full(SET) | a.full(PAIR)
    with pytest.raises(CapExceeded):
        ExplicitAlgebra([f"e{i}" for i in range(13)])
    with pytest.raises(AlphabetMismatch):
        backend_parity(a.full(SET), SymbolicAlgebra(["b"]).full(SET))
    with pytest.raises(TypeError):
        bool(a.full(SET))


def test_symbolic_handles_large_alphabets():
    events = [f"e{i}" for i in range(40)]
    alg = SymbolicAlgebra(events)
    f = alg.udcl(alg.pairs([({"e0", "e1"}, {"e39"})]))
    assert ({"e0"}, {"e39", "e5"}) in f
    assert alg.witness(f) == (0, alg.mask({"e39"}))
    assert alg.node_count(f) <= 2 * len(events)
    assert "digraph" in alg.to_dot(f)


def test_convert_between_backends():
    ex, sy = ExplicitAlgebra(["a", "b"]), SymbolicAlgebra(["a", "b"])
    f = ex.udcl(ex.pairs([({"a"}, {"b"})]))
    assert backend_parity(f, sy.convert(f))
    assert ex.convert(sy.convert(f)) == f
