"""Fair/co-fair analysis for structurally finite-state (SFS) terms.

Sequential components are analyzed exactly on their LTS: ``delta`` is
tau-cycle detection, and ``Phi`` is computed either by enumerating event
sets ``L`` (the explicit loop) or with one path-matrix circuit over BDD
variables.  Compound nodes combine child results rule by rule, ``delta``
before ``Phi``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional

from .semantics import DEFAULT_MAX_STATES, TAU, TICK, Lts, build_lts, scc_of_graph, tau_cycle
from .setlogic import PAIR, Algebra, Family, SymbolicAlgebra, make_algebra
from .setlogic import bdd
from .setlogic.symbolic import X, Y
from .syntax.classify import is_sequential, is_sfs
from .syntax.terms import (
    ExtChoice,
    Hide,
    IntChoice,
    Parallel,
    Prefix,
    Rename,
    Seq,
    Term,
)

# A finite sequential LTS has a few states per syntax node; exploration past
# this many is treated as unbounded (unguarded recursion under a choice).
SEQ_STATE_FACTOR = 32


def leaf_bound(p: Term, max_states: int) -> int:
    return min(max_states, SEQ_STATE_FACTOR * p.tsize + 64)


class NotSequential(ValueError):
    pass


class NotSFS(ValueError):
    pass


class DivergentProcess(ValueError):
    pass


def sequential_lts(p: Term, max_states: int = DEFAULT_MAX_STATES) -> Lts:
    if not (p.is_closed and is_sequential(p)):
        raise NotSequential(f"not a closed sequential term: {p}")
    return build_lts(p, leaf_bound(p, max_states))


def seq_delta(p: Term, max_states: int = DEFAULT_MAX_STATES) -> bool:
    """Does the LTS of a closed sequential term have a reachable tau-cycle?

    Sequential LTSs are finite up to unguarded recursion, whose unfoldings
    grow forever; if the state bound is hit the answer is the conservative
    ``True``.
    """
    return _delta_of(sequential_lts(p, max_states))


def _delta_of(lts: Lts) -> bool:
    return not lts.complete or tau_cycle(lts) is not None


def sigma_p(lts: Lts) -> List[str]:
    return sorted(lts.visible_events())


def alg1_members(lts: Lts, alg: Algebra) -> List[tuple]:
    """(L, Sigma - L) for every non-empty L with an SCC of G_L using all of L.

    G_L keeps tau edges and L-labelled edges; SCCs need not be reachable
    inside G_L.
    """
    events = sigma_p(lts)
    out = []
    n = lts.n_states
    for sel in range(1, 1 << len(events)):
        chosen = {e for k, e in enumerate(events) if sel >> k & 1}
        kept = [(s, g, t) for s, g, t in lts.edges if g == TAU or g in chosen]
        succ: List[List[int]] = [[] for _ in range(n)]
        for s, _, t in kept:
            succ[s].append(t)
        comp_of = {}
        for ci, comp in enumerate(scc_of_graph(n, succ)):
            for s in comp:
                comp_of[s] = ci
        used: Dict[int, set] = {}
        for s, g, t in kept:
            if g != TAU and comp_of[s] == comp_of[t]:
                used.setdefault(comp_of[s], set()).add(g)
        if any(labels >= chosen for labels in used.values()):
            m = alg.mask(chosen)
            out.append((m, alg.universe & ~m))
    return out


def maxscc_phi(lts: Lts, alg: SymbolicAlgebra) -> Family:
    """Phi as one BDD, from the path-matrix circuit over the x variables.

    ``Path[s][t]`` collects, as a monotone formula, the event sets of paths
    of length 1..|S| from s to t (tau edges are unconditional, tick edges are
    dropped); it is built by |S|-1 matrix products over (or, and) without a
    fixpoint test.
    """
    m = alg.mgr
    n = lts.n_states
    adj: List[Dict[int, int]] = [dict() for _ in range(n)]
    for s, g, t in lts.edges:
        if g == TICK:
            continue
        lit = 1 if g == TAU else alg.lit(X, alg.index[g])
        adj[s][t] = m.or_(adj[s].get(t, 0), lit)
    path = [dict(row) for row in adj]
    for _ in range(n - 1):
        nxt = []
        for s in range(n):
            row = dict(path[s])
            for u, f in path[s].items():
                for t, g in adj[u].items():
                    row[t] = m.or_(row.get(t, 0), m.and_(f, g))
            nxt.append(row)
        path = nxt

    events = sigma_p(lts)
    by_event: Dict[str, list] = {e: [] for e in events}
    for s, g, t in lts.edges:
        if g in by_event:
            by_event[g].append((s, t))
    scc = 0
    for s in range(n):
        clause = 1
        for e in events:
            a = alg.index[e]
            through = bdd.disj(m, [m.and_(path[s].get(src, 0), path[dst].get(s, 0)) for src, dst in by_event[e]])
            clause = m.and_(clause, m.or_(m.not_(alg.lit(X, a)), through))
            if clause == 0:
                break
        scc = m.or_(scc, clause)
    inside = {alg.index[e] for e in events}
    some = bdd.disj(m, [alg.lit(X, a) for a in sorted(inside)])
    outside = bdd.conj(m, [m.not_(alg.lit(X, a)) for a in range(alg.n) if a not in inside])
    cofair = bdd.conj(m, [m.equiv(alg.lit(Y, a), m.not_(alg.lit(X, a))) for a in range(alg.n)])
    return alg.wrap(PAIR, bdd.conj(m, [some, outside, scc, cofair]))


def seq_phi(p: Term, alg: Algebra, impl: str = "auto", max_states: int = DEFAULT_MAX_STATES) -> Family:
    """Fair/co-fair pairs of a closed, livelock-free sequential term."""
    lts = sequential_lts(p, max_states)
    if _delta_of(lts):
        raise DivergentProcess(f"sequential term can diverge: {p}")
    return _phi_of(lts, alg, impl)


def _phi_of(lts: Lts, alg: Algebra, impl: str) -> Family:
    if impl == "auto":
        impl = "circuit" if isinstance(alg, SymbolicAlgebra) else "loop"
    if impl == "circuit":
        if not isinstance(alg, SymbolicAlgebra):
            raise ValueError("the path-matrix circuit needs the symbolic backend")
        return maxscc_phi(lts, alg)
    return alg.pairs(alg1_members(lts, alg))


def phi_compose(node: Term, phis: List[Family], alg: Algebra) -> Family:
    if isinstance(node, Prefix):
        return phis[0]
    if isinstance(node, (IntChoice, ExtChoice, Seq)):
        return phis[0] | phis[1]
    if isinstance(node, Parallel):
        return alg.phi_parallel(phis[0], phis[1], alg.mask(node.sync))
    if isinstance(node, Hide):
        return alg.phi_hide(phis[0], alg.mask(node.hidden))
    if isinstance(node, Rename):
        return alg.phi_rename(phis[0], alg.renaming(node.pairs))
    raise NotSFS(f"no fair/co-fair rule for {type(node).__name__}")


def delta_compose(node: Term, deltas: List[bool], phis: List[Optional[Family]], alg: Algebra) -> bool:
    if isinstance(node, (Prefix, Rename)):
        return deltas[0]
    if isinstance(node, (IntChoice, ExtChoice, Seq, Parallel)):
        return deltas[0] or deltas[1]
    if isinstance(node, Hide):
        # negated form: some member has F inside the hidden set
        return deltas[0] or alg.phi_has_F_within(phis[0], alg.mask(node.hidden))
    raise NotSFS(f"no delta rule for {type(node).__name__}")


@dataclass
class NodeResult:
    path: str
    term: Term
    sequential: bool
    delta: bool
    phi: Optional[Family]
    states: Optional[int] = None


@dataclass
class SfsResult:
    delta: bool
    phi: Optional[Family]
    nodes: List[NodeResult] = field(default_factory=list)
    failing: Optional[NodeResult] = None

    @property
    def livelock_free(self) -> bool:
        return not self.delta


class SfsContext:
    def __init__(self, algebra: Algebra, impl: str = "auto", max_states: int = DEFAULT_MAX_STATES):
        self.alg = algebra
        self.impl = impl
        self.max_states = max_states

    @classmethod
    def for_alphabet(cls, alphabet, backend: str = "explicit", **kw) -> "SfsContext":
        return cls(make_algebra(alphabet, backend), **kw)


def analyze_sfs(term: Term, ctx: SfsContext) -> SfsResult:
    """delta/Phi for a closed SFS term; livelock-free iff delta is false."""
    if not is_sfs(term):
        raise NotSFS(f"not a structurally finite-state term: {term}")
    nodes: List[NodeResult] = []
    top = _visit(term, "/", ctx, nodes)
    failing = next((r for r in nodes if r.delta), None)
    return SfsResult(top.delta, top.phi, nodes, failing)


def _visit(t: Term, path: str, ctx: SfsContext, out: List[NodeResult]) -> NodeResult:
    alg = ctx.alg
    if is_sequential(t):
        lts = build_lts(t, leaf_bound(t, ctx.max_states))
        delta = _delta_of(lts)
        phi = None if delta else _phi_of(lts, alg, ctx.impl)
        res = NodeResult(path, t, True, delta, phi, lts.n_states)
        out.append(res)
        return res
    kids = [_visit(k, f"{path.rstrip('/')}/{i}", ctx, out) for i, k in enumerate(t.children())]
    deltas = [k.delta for k in kids]
    if any(deltas):
        # delta is a disjunction at every node; once true, Phi is unused
        res = NodeResult(path, t, False, True, None)
    else:
        phis = [k.phi for k in kids]
        delta = delta_compose(t, deltas, phis, alg)
        res = NodeResult(path, t, False, delta, None if delta else phi_compose(t, phis, alg))
    out.append(res)
    return res
