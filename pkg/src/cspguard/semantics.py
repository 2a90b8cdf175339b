"""Structural operational semantics, explicit LTS construction, and the
tau-cycle divergence oracle.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Set, Tuple

from .syntax.terms import (
    Div,
    ExtChoice,
    Hide,
    IntChoice,
    Mu,
    OpenTermError,
    Parallel,
    Prefix,
    Rename,
    Seq,
    Skip,
    STOP,
    Stop,
    Term,
    Var,
    alpha_normalize,
    fuse_hiding,
    intern,
    unfold,
)

# Labels are plain strings: event names, or one of these two reserved marks
# (neither can be an identifier of the input dialect).
TAU = "τ"
TICK = "✓"

DEFAULT_MAX_STATES = 100_000
TERM_SIZE_FACTOR = 16

Label = str
Step = Tuple[Label, Term]


def is_visible(label: Label) -> bool:
    return label != TAU and label != TICK


def step(p: Term) -> List[Step]:
    """All SOS successors of a closed term, deduplicated, in a stable order."""
    if p.free_vars:
        raise OpenTermError(f"cannot execute an open term: {p}")
    return sorted(set(_step(p)), key=_step_key)


def _step_key(s: Step):
    return (s[0], str(s[1]))


def _dedup(steps: List[Step]) -> List[Step]:
    # hiding and renaming can merge transitions; without this, nested
    # one-to-many renamings multiply duplicates at every level
    return list(dict.fromkeys(steps))


def _step(p: Term) -> Iterable[Step]:
    if isinstance(p, Prefix):
        return [(p.event, p.body)]
    if isinstance(p, Skip):
        return [(TICK, STOP)]
    if isinstance(p, Stop):
        return []
    if isinstance(p, Div):
        return [(TAU, p)]
    if isinstance(p, Mu):
        return [(TAU, unfold(p))]
    if isinstance(p, IntChoice):
        return [(TAU, p.left), (TAU, p.right)]
    if isinstance(p, ExtChoice):
        out = []
        for g, q in _step(p.left):
            out.append((g, ExtChoice(q, p.right)) if g == TAU else (g, q))
        for g, q in _step(p.right):
            out.append((g, ExtChoice(p.left, q)) if g == TAU else (g, q))
        return out
    if isinstance(p, Parallel):
        a = p.sync
        left = list(_step(p.left))
        right = list(_step(p.right))
        out = []
        for g, q in left:
            if g != TICK and g not in a:
                out.append((g, Parallel(a, q, p.right)))
        for g, q in right:
            if g != TICK and g not in a:
                out.append((g, Parallel(a, p.left, q)))
        for g, q in left:
            if g == TICK or g in a:
                for h, r in right:
                    if h == g:
                        out.append((g, Parallel(a, q, r)))
        return _dedup(out)
    if isinstance(p, Seq):
        out = []
        for g, q in _step(p.left):
            if g == TICK:
                out.append((TAU, p.right))
            else:
                out.append((g, Seq(q, p.right)))
        return out
    if isinstance(p, Hide):
        return _dedup([(TAU if g in p.hidden else g, Hide(p.hidden, q)) for g, q in _step(p.body)])
    if isinstance(p, Rename):
        out = []
        for g, q in _step(p.body):
            r = Rename(p.pairs, q)
            if g == TAU or g == TICK:
                out.append((g, r))
            else:
                for b in p.images(g):
                    out.append((b, r))
        return _dedup(out)
    if isinstance(p, Var):
        raise OpenTermError(f"free variable {p.name}")
    raise TypeError(f"unknown term {p!r}")


@dataclass
class Lts:
    states: List[Term]
    initial: int
    edges: List[Tuple[int, Label, int]]
    complete: bool
    _succ: Optional[List[List[Tuple[Label, int]]]] = field(default=None, repr=False, compare=False)

    @property
    def n_states(self) -> int:
        return len(self.states)

    def successors(self) -> List[List[Tuple[Label, int]]]:
        if self._succ is None:
            succ: List[List[Tuple[Label, int]]] = [[] for _ in self.states]
            for s, g, t in self.edges:
                succ[s].append((g, t))
            self._succ = succ
        return self._succ

    def labels(self) -> Set[Label]:
        return {g for _, g, _ in self.edges}

    def visible_events(self) -> Set[str]:
        return {g for _, g, _ in self.edges if is_visible(g)}

    def to_dot(self) -> str:
        lines = ["digraph lts {", "  rankdir=LR;", '  init [shape=point];', "  init -> s%d;" % self.initial]
        for i, t in enumerate(self.states):
            label = str(t).replace("\\", "\\\\").replace('"', '\\"')
            lines.append(f'  s{i} [label="{label}"];')
        for s, g, t in self.edges:
            lines.append(f'  s{s} -> s{t} [label="{g}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_json_lines(self) -> str:
        """One JSON object per line: a header, then states, then edges."""
        out = [json.dumps({"kind": "lts", "initial": self.initial, "states": self.n_states,
                           "edges": len(self.edges), "complete": self.complete}, ensure_ascii=False)]
        for i, t in enumerate(self.states):
            out.append(json.dumps({"kind": "state", "id": i, "term": str(t)}, ensure_ascii=False))
        for s, g, t in self.edges:
            out.append(json.dumps({"kind": "edge", "src": s, "label": g, "dst": t}, ensure_ascii=False))
        return "\n".join(out) + "\n"


def state_canonical(t: Term) -> Term:
    return intern(alpha_normalize(intern(t)))


def build_lts(
    p: Term,
    max_states: int = DEFAULT_MAX_STATES,
    canonical: Optional[Callable[[Term], Term]] = None,
    max_term_size: Optional[int] = None,
) -> Lts:
    """Breadth-first closure of :func:`step` from ``p``.

    States are identified up to ``canonical``.  When more than ``max_states``
    states would be needed, or a state term outgrows ``max_term_size`` nodes,
    the result is returned with ``complete=False``; edges into unexplored
    states are dropped so every edge endpoint is valid.

    States only grow without bound when recursion keeps unfolding under an
    unresolved choice along an endless tau run, so the default size cap
    (a multiple of the initial term) cuts such runs short.
    """
    if p.free_vars:
        raise OpenTermError(f"cannot execute an open term: {p}")
    if max_term_size is None:
        max_term_size = TERM_SIZE_FACTOR * p.tsize + 64
    canonical = canonical or state_canonical
    init = canonical(p)
    index: Dict[Term, int] = {init: 0}
    states = [init]
    edges: List[Tuple[int, Label, int]] = []
    queue = deque([0])
    complete = True
    while queue:
        s = queue.popleft()
        seen_here = set()
        for g, q in _step(states[s]):
            q = canonical(q)
            t = index.get(q)
            if t is None:
                if len(states) >= max_states or q.tsize > max_term_size:
                    complete = False
                    continue
                t = len(states)
                index[q] = t
                states.append(q)
                queue.append(t)
            if (g, t) not in seen_here:
                seen_here.add((g, t))
                edges.append((s, g, t))
    return Lts(states, 0, edges, complete)


def tarjan_scc(lts: Lts, label_filter: Callable[[Label], bool] = lambda g: True) -> List[List[int]]:
    """Strongly connected components of the filtered edge subgraph.

    Iterative Tarjan; components come out in reverse topological order
    (every edge between components points from a later to an earlier one).
    """
    succ = [[t for g, t in out if label_filter(g)] for out in lts.successors()]
    return scc_of_graph(len(succ), succ)


def scc_of_graph(n: int, succ: List[List[int]]) -> List[List[int]]:
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: List[int] = []
    comps: List[List[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, i = work[-1]
            if i < len(succ[v]):
                work[-1] = (v, i + 1)
                w = succ[v][i]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w] and index[w] < low[v]:
                    low[v] = index[w]
            else:
                work.pop()
                if work:
                    u = work[-1][0]
                    if low[v] < low[u]:
                        low[u] = low[v]
                if low[v] == index[v]:
                    comp = []
                    while True:
                        w = stack.pop()
                        on_stack[w] = False
                        comp.append(w)
                        if w == v:
                            break
                    comps.append(sorted(comp))
    return comps


def tau_cycle(lts: Lts) -> Optional[List[int]]:
    """A tau-cycle as a list of states ``[s0, s1, ..., s0]``, or None."""
    comp_of = {}
    for ci, comp in enumerate(tarjan_scc(lts, lambda g: g == TAU)):
        for s in comp:
            comp_of[s] = ci
    succ = lts.successors()
    for s, g, t in lts.edges:
        if g == TAU and comp_of[s] == comp_of[t]:
            return [s] + _path_within(succ, t, s, comp_of) if s != t else [s, s]
    return None


def _path_within(succ, src: int, dst: int, comp_of) -> List[int]:
    """Tau path ``src -> ... -> dst`` inside one component (BFS)."""
    c = comp_of[src]
    prev = {src: None}
    queue = deque([src])
    while queue:
        v = queue.popleft()
        if v == dst:
            break
        for g, w in succ[v]:
            if g == TAU and comp_of.get(w) == c and w not in prev:
                prev[w] = v
                queue.append(w)
    path = [dst]
    while path[-1] != src:
        path.append(prev[path[-1]])
    return path[::-1]


def reachable_prefix(lts: Lts, target: int) -> List[Tuple[int, Label, int]]:
    """Shortest edge path from the initial state to ``target``."""
    prev: Dict[int, Optional[Tuple[int, Label, int]]] = {lts.initial: None}
    queue = deque([lts.initial])
    succ = lts.successors()
    while queue and target not in prev:
        v = queue.popleft()
        for g, w in succ[v]:
            if w not in prev:
                prev[w] = (v, g, w)
                queue.append(w)
    path = []
    cur = target
    while prev[cur] is not None:
        e = prev[cur]
        path.append(e)
        cur = e[0]
    return path[::-1]


@dataclass
class OracleResult:
    kind: str  # "divergent" | "livelock-free" | "unknown"
    states: int
    complete: bool
    witness: Optional[dict] = None

    @property
    def divergent(self) -> bool:
        return self.kind == "divergent"


ORACLE_FIRST_ROUND = 1024


def oracle_canonical(t: Term) -> Term:
    return intern(alpha_normalize(fuse_hiding(intern(t))))


def oracle_divergence(p: Term, max_states: int = DEFAULT_MAX_STATES) -> OracleResult:
    """Ground-truth divergence check by explicit exploration.

    Divergent when the explored state space has a reachable tau-cycle (any
    explored cycle is real, so this holds even for incomplete exploration);
    livelock-free only when exploration finished without finding one.
    Exploration runs in rounds of growing bounds so that an early cycle is
    reported without filling the whole budget.
    """
    bound = min(ORACLE_FIRST_ROUND, max_states)
    while True:
        lts = build_lts(p, bound, canonical=oracle_canonical)
        cyc = tau_cycle(lts)
        if cyc is not None or lts.complete or bound >= max_states:
            break
        bound = min(bound * 4, max_states)
    if cyc is not None:
        prefix = reachable_prefix(lts, cyc[0])
        witness = {
            "trace": [g for _, g, _ in prefix if g != TAU],
            "prefix_states": [str(lts.states[s]) for s, _, _ in prefix] + [str(lts.states[cyc[0]])],
            "cycle_states": [str(lts.states[s]) for s in cyc],
        }
        return OracleResult("divergent", lts.n_states, lts.complete, witness)
    if lts.complete:
        return OracleResult("livelock-free", lts.n_states, True)
    return OracleResult("unknown", lts.n_states, False)
