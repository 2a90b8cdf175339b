"""Parameterized benchmark families and the timing harness.

Each generator returns ``.cspl`` source text so instances can be saved,
inspected and re-parsed like hand-written models.  Internal handshakes are
hidden, which turns livelock-freedom into a progress property.
"""

from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Optional

from .driver import AnalysisTimeout, Config, analyze
from .syntax import parse


def _alphabet(events: Iterable[str]) -> str:
    return "alphabet {" + ", ".join(events) + "};"


def _set(events: Iterable[str]) -> str:
    return "{" + ", ".join(events) + "}"


def _chain(names: List[str], alphabets: List[List[str]]) -> str:
    """Left-nested parallel composition synchronizing on shared events."""
    expr = names[0]
    seen = list(alphabets[0])
    for name, alpha in zip(names[1:], alphabets[1:]):
        shared = [e for e in seen if e in alpha]
        op = f"[|{_set(shared)}|]" if shared else "|||"
        expr = f"({expr} {op} {name})"
        seen += [e for e in alpha if e not in seen]
    return expr


def milner(n: int) -> str:
    """Milner's cyclic scheduler: cycler i takes token a_i, starts task b_i,
    then passes the token on and ends the task d_i in either order."""
    if n < 2:
        raise ValueError("the scheduler needs at least two cyclers")
    events = [f"{c}{i}" for i in range(n) for c in "abd"]
    lines = [f"-- Milner's scheduler with {n} cyclers; token passing hidden.", _alphabet(events), ""]
    for i in range(n):
        nxt = f"a{(i + 1) % n}"
        lines.append(f"Go{i} = b{i} -> ({nxt} -> d{i} -> Wait{i} [] d{i} -> {nxt} -> Wait{i});")
        lines.append(f"Wait{i} = a{i} -> Go{i};")
    names = ["Go0"] + [f"Wait{i}" for i in range(1, n)]
    alphas = [[f"a{i}", f"b{i}", f"d{i}", f"a{(i + 1) % n}"] for i in range(n)]
    lines.append(f"Ring = {_chain(names, alphas)};")
    lines.append(f"Sched = Ring \\ {_set(f'a{i}' for i in range(n))};")
    lines.append("root Sched;")
    return "\n".join(lines) + "\n"


def philosophers(n: int) -> str:
    """Dining philosophers; fork handling is hidden, eating stays visible."""
    if n < 2:
        raise ValueError("need at least two philosophers")
    events = []
    for i in range(n):
        events += [f"eat{i}", f"pl{i}", f"pr{i}", f"dl{i}", f"dr{i}"]
    lines = [f"-- {n} dining philosophers; fork events hidden.", _alphabet(events), ""]
    names, alphas = [], []
    for i in range(n):
        j = (i - 1) % n  # the philosopher whose right fork is fork i
        lines.append(f"Phil{i} = pl{i} -> pr{i} -> eat{i} -> dl{i} -> dr{i} -> Phil{i};")
        lines.append(f"Fork{i} = pl{i} -> dl{i} -> Fork{i} [] pr{j} -> dr{j} -> Fork{i};")
        names += [f"Phil{i}", f"Fork{i}"]
        alphas += [[f"eat{i}", f"pl{i}", f"pr{i}", f"dl{i}", f"dr{i}"], [f"pl{i}", f"dl{i}", f"pr{j}", f"dr{j}"]]
    lines.append(f"Table = {_chain(names, alphas)};")
    hidden = [e for e in events if not e.startswith("eat")]
    lines.append(f"College = Table \\ {_set(hidden)};")
    lines.append("root College;")
    return "\n".join(lines) + "\n"


def _abp_copy(i: int, inp: str, out: str) -> List[str]:
    e = f"error{i}"
    return [
        f"Send{i} = {inp} -> Medium{i};",
        f"Medium{i} = {out} -> Send{i} [] {e} -> Medium{i};",
        f"Fair{i} = {out} -> Fair{i} [] {e} -> {out} -> Fair{i};",
        f"Net{i} = Send{i} [|{_set([e, out])}|] Fair{i};",
    ]


def abp_interleave(n: int) -> str:
    """n independent abstracted protocol instances side by side."""
    events = [f"{c}{i}" for i in range(n) for c in ("in", "out", "error")]
    lines = [f"-- {n} interleaved abstract protocols; errors hidden.", _alphabet(events), ""]
    for i in range(n):
        lines += _abp_copy(i, f"in{i}", f"out{i}")
    body = _chain([f"Net{i}" for i in range(n)], [[f"in{i}", f"out{i}", f"error{i}"] for i in range(n)])
    lines.append(f"All = {body};")
    lines.append(f"System = All \\ {_set(f'error{i}' for i in range(n))};")
    lines.append("root System;")
    return "\n".join(lines) + "\n"


def abp_pipe(n: int) -> str:
    """n protocol instances in series; link i carries stage i's output to stage i+1."""
    links = [f"l{i}" for i in range(n + 1)]
    events = links + [f"error{i}" for i in range(n)]
    lines = [f"-- {n} abstract protocols in a pipeline; errors and inner links hidden.", _alphabet(events), ""]
    for i in range(n):
        lines += _abp_copy(i, links[i], links[i + 1])
    body = _chain([f"Net{i}" for i in range(n)], [[links[i], links[i + 1], f"error{i}"] for i in range(n)])
    lines.append(f"Pipe = {body};")
    hidden = [f"error{i}" for i in range(n)] + links[1:n]
    lines.append(f"System = Pipe \\ {_set(hidden)};")
    lines.append("root System;")
    return "\n".join(lines) + "\n"


FAMILIES: Dict[str, Callable[[int], str]] = {
    "milner": milner,
    "philosophers": philosophers,
    "abp-interleave": abp_interleave,
    "abp-pipe": abp_pipe,
}


@dataclass
class BenchRow:
    family: str
    n: int
    events: int
    verdict: str
    framework: str
    backend: str
    seconds: float
    oracle: Optional[str] = None


def run_bench(family: str, sizes: Iterable[int], config: Optional[Config] = None) -> List[BenchRow]:
    config = config or Config()
    gen = FAMILIES[family]
    rows = []
    for n in sizes:
        spec = parse(gen(n))
        t0 = time.perf_counter()
        try:
            proc = analyze(spec, config).processes[0]
            v = proc.verdict
            row = BenchRow(family, n, len(spec.alphabet), v.kind, v.framework, v.backend or "", 0.0,
                           proc.oracle.kind if proc.oracle else None)
        except AnalysisTimeout:
            row = BenchRow(family, n, len(spec.alphabet), "Timeout", "", config.pick_backend(len(spec.alphabet)), 0.0)
        row.seconds = time.perf_counter() - t0
        rows.append(row)
    return rows


CSV_FIELDS = ["family", "n", "events", "verdict", "framework", "backend", "seconds", "oracle"]


def to_csv(rows: List[BenchRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for r in rows:
        w.writerow([r.family, r.n, r.events, r.verdict, r.framework, r.backend, f"{r.seconds:.4f}", r.oracle or ""])
    return buf.getvalue()


def to_table(rows: List[BenchRow]) -> str:
    head = f"{'instance':<20} {'|S|':>4} {'verdict':<13} {'framework':<9} {'backend':<9} {'seconds':>9}"
    out = [head, "-" * len(head)]
    for r in rows:
        out.append(
            f"{r.family + '-' + str(r.n):<20} {r.events:>4} {r.verdict:<13} {r.framework:<9} {r.backend:<9} {r.seconds:>9.3f}"
            + (f"  oracle={r.oracle}" if r.oracle else "")
        )
    return "\n".join(out)
