import os
import random
import subprocess
import sys

import pytest

from cspguard.setlogic import bdd

MANAGERS = [bdd.PyManager] + ([bdd.CyManager] if bdd.CyManager is not None else [])
N = 6


def truth_table(m, f, n=N):
    out = []
    for bits in range(1 << n):
        u = f
        while u > 1:
            u = m.high(u) if bits >> m.level(u) & 1 else m.low(u)
        out.append(u)
    return out


@pytest.mark.parametrize("M", MANAGERS, ids=lambda M: M.IMPL)
def test_random_operations_match_truth_tables(M):
    rng = random.Random(1)
    for _ in range(150):
        m = M(N)
        pool = [m.var(i) for i in range(N)] + [0, 1]
        for _ in range(25):
            op = rng.choice(["and", "or", "xor", "not", "ite", "ex", "fa", "ae", "restr", "ren", "eq", "imp"])
            a, b, c = (rng.choice(pool) for _ in range(3))
            ta, tb, tc = truth_table(m, a), truth_table(m, b), truth_table(m, c)
            if op == "and":
                r, exp = m.and_(a, b), [x & y for x, y in zip(ta, tb)]
            elif op == "or":
                r, exp = m.or_(a, b), [x | y for x, y in zip(ta, tb)]
            elif op == "xor":
                r, exp = m.xor(a, b), [x ^ y for x, y in zip(ta, tb)]
            elif op == "eq":
                r, exp = m.equiv(a, b), [1 - (x ^ y) for x, y in zip(ta, tb)]
            elif op == "imp":
                r, exp = m.implies(a, b), [(1 - x) | y for x, y in zip(ta, tb)]
            elif op == "not":
                r, exp = m.not_(a), [1 - x for x in ta]
            elif op == "ite":
                r, exp = m.ite(a, b, c), [y if x else z for x, y, z in zip(ta, tb, tc)]
            elif op in ("ex", "fa"):
                vs = rng.sample(range(N), 2)
                mask = sum(1 << v for v in vs)
                subs = [s for s in range(1 << N) if s & ~mask == 0]
                agg = max if op == "ex" else min
                r = m.exists(a, m.cube(vs)) if op == "ex" else m.forall(a, m.cube(vs))
                exp = [agg(ta[(x & ~mask) | s] for s in subs) for x in range(1 << N)]
            elif op == "ae":
                vs = rng.sample(range(N), 3)
                r = m.and_exists(a, b, m.cube(vs))
                exp = truth_table(m, m.exists(m.and_(a, b), m.cube(vs)))
            elif op == "restr":
                v, val = rng.randrange(N), rng.random() < 0.5
                r = m.restrict(a, m.literal_cube({v: val}))
                exp = [ta[(x | 1 << v) if val else (x & ~(1 << v))] for x in range(1 << N)]
            else:
                perm = list(range(N))
                rng.shuffle(perm)
                r = m.rename(a, m.register_map(dict(enumerate(perm))))
                exp = [ta[sum(((x >> perm[v]) & 1) << v for v in range(N))] for x in range(1 << N)]
            assert truth_table(m, r) == exp, op
            pool.append(r)
        for f in pool:
            t = truth_table(m, f)
            assert bdd.count(m, f, range(N)) == sum(t)
            assert sorted(bdd.models(m, f, list(range(N)))) == [i for i in range(1 << N) if t[i]]


@pytest.mark.parametrize("M", MANAGERS, ids=lambda M: M.IMPL)
def test_canonicity(M):
    # rebuilding a function from its models gives the very same node
    rng = random.Random(3)
    m = M(N)
    for _ in range(100):
        f = 0
        for _ in range(8):
            f = m.or_(f, m.and_(m.var(rng.randrange(N)), m.nvar(rng.randrange(N))))
        rebuilt = bdd.disj(m, [m.literal_cube({v: bool(x >> v & 1) for v in range(N)}) for x in bdd.models(m, f, range(N))])
        assert rebuilt == f
        assert m.node_count(rebuilt) == m.node_count(f)


@pytest.mark.skipif(bdd.CyManager is None, reason="compiled core not built")
def test_both_cores_build_identical_diagrams():
    rng = random.Random(9)
    a, b = bdd.PyManager(8), bdd.CyManager(8)
    fa, fb = 0, 0
    for _ in range(40):
        i, j, k = rng.randrange(8), rng.randrange(8), rng.randrange(8)
        fa = a.xor(fa, a.and_(a.var(i), a.or_(a.var(j), a.nvar(k))))
        fb = b.xor(fb, b.and_(b.var(i), b.or_(b.var(j), b.nvar(k))))
        assert a.node_count(fa) == b.node_count(fb)
        assert sorted(bdd.models(a, fa, range(8))) == sorted(bdd.models(b, fb, range(8)))


def test_support_and_dot():
    m = bdd.PyManager(4)
    f = m.and_(m.var(1), m.nvar(3))
    assert sorted(m.support(f)) == [1, 3]
    assert "digraph" in bdd.to_dot(m, f)


def test_pure_fallback_is_selectable():
    code = "from cspguard.setlogic import bdd; print(bdd.IMPLEMENTATION)"
    env = dict(os.environ, CSPGUARD_PURE="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
