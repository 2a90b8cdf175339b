import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from cspguard.fuzz import TermGen
from cspguard.semantics import (
    TAU,
    TICK,
    build_lts,
    oracle_divergence,
    scc_of_graph,
    step,
    tarjan_scc,
    tau_cycle,
)
from cspguard.syntax import DIV, SKIP, STOP, Hide, Prefix, alpha_normalize, bekic_elaborate, parse_term

from conftest import fs, load


def test_step_skip():
    assert step(SKIP) == [(TICK, STOP)]


def test_step_internal_choice():
    p, q = parse_term("a -> STOP"), parse_term("b -> STOP")
    assert sorted(step(parse_term("a -> STOP |~| b -> STOP")), key=str) == sorted([(TAU, p), (TAU, q)], key=str)


def test_step_hide():
    assert step(parse_term("(a -> STOP) \\ {a}")) == [(TAU, Hide(fs("a"), STOP))]


def test_step_mu_unfolds():
    loop = parse_term("mu X . a -> X")
    assert step(loop) == [(TAU, Prefix("a", loop))]


def test_step_external_choice():
    t = parse_term("(STOP |~| a -> STOP) [] b -> STOP")
    got = {(g, str(q)) for g, q in step(t)}
    assert got == {(TAU, "STOP [] b -> STOP"), (TAU, "a -> STOP [] b -> STOP"), ("b", "STOP")}


def test_step_parallel_and_tick_sync():
    t = parse_term("(a -> SKIP) [|{a}|] (a -> SKIP [] b -> STOP)")
    assert {(g, str(q)) for g, q in step(t)} == {("a", "SKIP [|{a}|] SKIP"), ("b", "a -> SKIP [|{a}|] STOP")}
    blocked = parse_term("(a -> SKIP) [|{a}|] (b -> STOP)")
    assert [g for g, _ in step(blocked)] == ["b"]
    half = parse_term("SKIP [|{}|] a -> SKIP")
    assert [g for g, _ in step(half)] == ["a"]
    done = parse_term("SKIP [|{}|] SKIP")
    assert [g for g, _ in step(done)] == [TICK]
    inter = parse_term("a -> STOP [|{}|] b -> STOP")
    assert sorted(g for g, _ in step(inter)) == ["a", "b"]


def test_step_sequential_composition():
    t = parse_term("SKIP ; a -> STOP")
    assert step(t) == [(TAU, Prefix("a", STOP))]


def test_step_rename_to_every_image():
    t = parse_term("(a -> STOP)[[a <- b, a <- c]]", alphabet=("a", "b", "c"))
    assert sorted(g for g, _ in step(t)) == ["b", "c"]


def test_step_div():
    assert step(DIV) == [(TAU, DIV)]


def test_build_lts_guarded_loop():
    lts = build_lts(parse_term("mu X . a -> X"), 100)
    assert lts.n_states == 2 and lts.complete
    assert sorted(lts.edges) == [(0, TAU, 1), (1, "a", 0)]


def test_build_lts_div():
    lts = build_lts(DIV, 10)
    assert (lts.n_states, lts.edges, lts.complete) == (1, [(0, TAU, 0)], True)


def test_build_lts_bound_flag():
    lts = build_lts(parse_term("mu X . a -> (X ; SKIP)"), 20)
    assert not lts.complete and lts.n_states == 20
    assert all(0 <= s < 20 and 0 <= t < 20 for s, _, t in lts.edges)


def test_send_lts_is_the_two_state_machine(abp):
    lts = build_lts(bekic_elaborate(abp, "Send"))
    visible = {(str(lts.states[s]).split(" ")[0], g) for s, g, _ in lts.edges if g != TAU}
    assert {g for _, g in visible} == {"in", "out", "error"}
    assert lts.complete


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**6))
def test_lts_is_exactly_the_step_closure(seed):
    t = TermGen(seed, events=("a", "b", "c")).sfs(5)
    lts = build_lts(t, 2000)
    if not lts.complete:
        return
    index = {s: i for i, s in enumerate(lts.states)}
    for i, s in enumerate(lts.states):
        expected = {(g, index[alpha_normalize(q)]) for g, q in step(s)}
        assert {(g, d) for src, g, d in lts.edges if src == i} == expected


def _naive_scc(n, succ):
    reach = [set() for _ in range(n)]
    for s in range(n):
        stack, seen = [s], {s}
        while stack:
            v = stack.pop()
            for w in succ[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        reach[s] = seen
    comps = {frozenset(t for t in range(n) if t in reach[s] and s in reach[t]) for s in range(n)}
    return sorted(sorted(c) for c in comps)


def test_tarjan_matches_naive_scc_on_small_graphs():
    rng = random.Random(5)
    for _ in range(3000):
        n = rng.randint(1, 8)
        succ = [[t for t in range(n) if rng.random() < 0.25] for _ in range(n)]
        comps = scc_of_graph(n, succ)
        assert sorted(comps) == _naive_scc(n, succ)
        # reverse topological: no edge from an earlier component to a later one
        pos = {s: i for i, c in enumerate(comps) for s in c}
        assert all(pos[s] >= pos[t] for s in range(n) for t in succ[s])


def test_tarjan_examples(abp):
    two = parse_term("mu X . (mu Y . X)")
    lts = build_lts(two)
    assert [len(c) for c in tarjan_scc(lts, lambda g: g == TAU)] == [lts.n_states]
    dag = build_lts(parse_term("a -> b -> STOP"))
    assert len(tarjan_scc(dag)) == 3
    fair = build_lts(bekic_elaborate(abp, "Fair"))
    comps = tarjan_scc(fair, lambda g: g in ("out", "error", TAU))
    assert len(comps) == 1


def test_tau_cycle_witness():
    lts = build_lts(parse_term("(mu X . a -> X) \\ {a}"))
    cyc = tau_cycle(lts)
    assert cyc[0] == cyc[-1]
    edges = set(lts.edges)
    assert all((s, TAU, t) in edges for s, t in zip(cyc, cyc[1:]))


@pytest.mark.parametrize(
    "src, kind",
    [
        ("mu X . X", "divergent"),
        ("mu X . a -> (X \\ {a})", "divergent"),
        ("mu X . a -> X", "livelock-free"),
        ("DIV", "divergent"),
        ("STOP", "livelock-free"),
    ],
)
def test_oracle_examples(src, kind):
    assert oracle_divergence(parse_term(src), 1000).kind == kind


def test_oracle_on_incompleteness_example():
    spec = load("incompleteness.cspl")
    r = oracle_divergence(bekic_elaborate(spec, "R"), 1000)
    assert r.kind == "livelock-free" and r.complete


def test_oracle_witness_is_replayable():
    r = oracle_divergence(parse_term("a -> (mu X . b -> X) \\ {b}"), 100)
    assert r.kind == "divergent"
    assert r.witness["trace"] == ["a"]
    assert r.witness["cycle_states"][0] == r.witness["cycle_states"][-1]


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from(["a", "b"]))
def test_prefix_preserves_oracle_verdict(seed, ev):
    t = TermGen(seed, events=("a", "b")).sfs(4)
    r1, r2 = oracle_divergence(t, 2000), oracle_divergence(Prefix(ev, t), 2000)
    if r1.complete and r2.complete:
        assert r1.kind == r2.kind


def test_oracle_monotone_in_bound():
    g = TermGen(11, events=("a", "b"))
    for _ in range(60):
        t = g.general(4)
        kinds = [oracle_divergence(t, n).kind for n in (5, 50, 500)]
        for lo, hi in itertools.combinations(kinds, 2):
            if lo != "unknown":
                assert hi == lo


def test_lts_exports():
    lts = build_lts(parse_term("mu X . a -> X"))
    assert lts.to_dot().startswith("digraph")
    lines = lts.to_json_lines().splitlines()
    assert len(lines) == 1 + lts.n_states + len(lts.edges)
