"""Selects the BDD manager implementation and adds backend-neutral helpers.

The compiled core is used when it was built; ``CSPGUARD_PURE=1`` forces the
pure-Python manager.
"""

from __future__ import annotations

import os
from typing import Dict, Iterator, List, Sequence

from . import _bdd_py

PyManager = _bdd_py.Manager

try:
    from ._bdd_core import Manager as CyManager
except ImportError:  # extension not built
    CyManager = None

if CyManager is not None and os.environ.get("CSPGUARD_PURE", "") not in ("1", "true", "yes"):
    Manager = CyManager
else:
    Manager = PyManager

IMPLEMENTATION = Manager.IMPL


def count(mgr, f: int, variables: Sequence[int]) -> int:
    """Number of assignments to ``variables`` satisfying ``f``.

    ``f`` must not depend on variables outside ``variables``.
    """
    order = sorted(variables)
    pos = {v: i for i, v in enumerate(order)}
    n = len(order)
    memo: Dict[int, int] = {0: 0, 1: 1}

    def at(u: int) -> int:
        return n if u < 2 else pos[mgr.level(u)]

    def go(u: int) -> int:
        r = memo.get(u)
        if r is not None:
            return r
        p = at(u)
        lo, hi = mgr.low(u), mgr.high(u)
        r = (go(lo) << (at(lo) - p - 1)) + (go(hi) << (at(hi) - p - 1))
        memo[u] = r
        return r

    return go(f) << at(f)


def models(mgr, f: int, variables: Sequence[int]) -> Iterator[int]:
    """Satisfying assignments as bitmasks (bit i = ``variables[i]``), don't-cares expanded."""
    order = sorted(variables)
    pos = {v: i for i, v in enumerate(order)}
    n = len(order)
    variables = list(variables)
    index = [variables.index(v) for v in order]
    stack = [(f, 0, 0)]
    while stack:
        u, p, acc = stack.pop()
        if u == 0:
            continue
        level = n if u == 1 else pos[mgr.level(u)]
        if p < level:
            bit = 1 << index[p]
            stack.append((u, p + 1, acc | bit))
            stack.append((u, p + 1, acc))
            continue
        if u == 1:
            yield acc
            continue
        stack.append((mgr.high(u), p + 1, acc | (1 << index[p])))
        stack.append((mgr.low(u), p + 1, acc))


def to_dot(mgr, f: int, names=None) -> str:
    names = names or {}
    lines = ["digraph bdd {", '  n0 [shape=box,label="0"];', '  n1 [shape=box,label="1"];']
    seen, stack = set(), [f]
    while stack:
        u = stack.pop()
        if u < 2 or u in seen:
            continue
        seen.add(u)
        v = mgr.level(u)
        lines.append(f'  n{u} [label="{names.get(v, v)}"];')
        lines.append(f"  n{u} -> n{mgr.low(u)} [style=dashed];")
        lines.append(f"  n{u} -> n{mgr.high(u)};")
        stack.extend((mgr.low(u), mgr.high(u)))
    lines.append("}")
    return "\n".join(lines) + "\n"


def conj(mgr, nodes: List[int]) -> int:
    r = 1
    for u in nodes:
        r = mgr.and_(r, u)
        if r == 0:
            break
    return r


def disj(mgr, nodes: List[int]) -> int:
    r = 0
    for u in nodes:
        r = mgr.or_(r, u)
        if r == 1:
            break
    return r
