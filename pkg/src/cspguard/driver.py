"""Orchestration: classify each root process, pick a framework and backend,
run the analysis under a time limit, and assemble a versioned report."""

from __future__ import annotations

import json
import queue
import threading
import time
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from . import __version__
from .general import GeneralContext, analyze_general
from .semantics import DEFAULT_MAX_STATES, oracle_divergence
from .setlogic import EXPLICIT_CAP, Family, make_algebra
from .sfs import NotSFS, SfsContext, analyze_sfs
from .syntax import Kind, Spec, Term, bekic_elaborate, classify, print_term

SCHEMA_VERSION = 1

LIVELOCK_FREE = "LivelockFree"
INCONCLUSIVE = "Inconclusive"
DIVERGENT = "Divergent"

SFS = "SFS"
GENERAL = "General"
ORACLE = "Oracle"

MEMBER_LIMIT = 256


class AnalysisTimeout(RuntimeError):
    pass


class NoCertificate(ValueError):
    pass


class RaceMismatch(AssertionError):
    pass


@dataclass
class Config:
    mode: str = "auto"  # auto | sfs | general
    backend: str = "auto"  # auto | explicit | symbolic
    symbolic_threshold: int = 12
    oracle: bool = False
    race: bool = False
    verify_race: bool = False
    timeout: Optional[float] = 60.0
    max_states: int = DEFAULT_MAX_STATES
    debug_families: bool = False

    def pick_backend(self, n_events: int) -> str:
        if self.backend != "auto":
            return self.backend
        return "symbolic" if n_events > self.symbolic_threshold else "explicit"


@dataclass
class Verdict:
    kind: str
    framework: str
    reason: Optional[str] = None
    certificate: Optional[dict] = None
    backend: Optional[str] = None
    seconds: float = 0.0
    stats: Dict[str, Any] = field(default_factory=dict)
    debug: Optional[list] = field(default=None, repr=False)

    def to_dict(self, timing: bool = True) -> dict:
        d = {
            "kind": self.kind,
            "framework": self.framework,
            "reason": self.reason,
            "backend": self.backend,
            "certificate": self.certificate,
            "stats": self.stats,
        }
        if timing:
            d["seconds"] = round(self.seconds, 6)
        return d


@dataclass
class ProcessReport:
    name: str
    classification: str
    term: str
    verdict: Verdict
    oracle: Optional[Verdict] = None
    race: List[Verdict] = field(default_factory=list)

    def to_dict(self, timing: bool = True) -> dict:
        d = {
            "name": self.name,
            "classification": self.classification,
            "term": self.term,
            "verdict": self.verdict.to_dict(timing),
        }
        if self.oracle is not None:
            d["oracle"] = self.oracle.to_dict(timing)
        if self.race:
            d["race"] = [v.to_dict(timing) for v in self.race]
        return d


@dataclass
class Report:
    alphabet: List[str]
    processes: List[ProcessReport]
    config: Config

    def to_dict(self, timing: bool = True) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "tool_version": __version__,
            "alphabet": list(self.alphabet),
            "mode": self.config.mode,
            "processes": [p.to_dict(timing) for p in self.processes],
        }

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), indent=2, sort_keys=True, ensure_ascii=False)

    @property
    def exit_code(self) -> int:
        if any(p.oracle is not None and p.oracle.kind == DIVERGENT for p in self.processes):
            return 3
        if all(p.verdict.kind == LIVELOCK_FREE for p in self.processes):
            return 0
        return 1


# -- family rendering


def family_summary(fam: Optional[Family], limit: int = MEMBER_LIMIT) -> Optional[dict]:
    if fam is None:
        return None
    alg = fam.algebra
    n = fam.count()
    out: Dict[str, Any] = {"kind": fam.kind, "count": n}
    if n:
        out["witness"] = _render(alg.witness(fam), alg)
    if n <= limit:
        out["members"] = [_render(m, alg) for m in fam.members()]
    return out


def _render(member, alg):
    if isinstance(member, tuple):
        return [sorted(alg.names(member[0])), sorted(alg.names(member[1]))]
    return sorted(alg.names(member))


# -- single-process analysis


def framework_for(term: Term, mode: str) -> str:
    if mode == "general":
        return GENERAL
    if mode == "sfs":
        return SFS
    if mode != "auto":
        raise ValueError(f"unknown mode {mode!r}")
    return SFS if classify(term) in (Kind.SEQUENTIAL, Kind.SFS) else GENERAL


def run_framework(term: Term, alphabet, framework: str, backend: str, config: Config) -> Verdict:
    t0 = time.perf_counter()
    alg = make_algebra(alphabet, backend)
    if framework == SFS:
        v = _run_sfs(term, alg, config)
    else:
        v = _run_general(term, alg, config)
    v.backend = backend
    if backend == "symbolic":
        v.stats["bdd_nodes"] = alg.mgr.size
    v.seconds = time.perf_counter() - t0
    return v


def _run_sfs(term: Term, alg, config: Config) -> Verdict:
    res = analyze_sfs(term, SfsContext(alg, max_states=config.max_states))
    stats = {
        "nodes": len(res.nodes),
        "sequential_states": sum(r.states or 0 for r in res.nodes),
    }
    debug = None
    if config.debug_families:
        debug = [
            {"path": r.path, "term": print_term(r.term), "delta": r.delta, "phi": family_summary(r.phi)}
            for r in res.nodes
        ]
    if res.delta:
        f = res.failing
        return Verdict(INCONCLUSIVE, SFS, f"delta true at {f.path}: {print_term(f.term)}", stats=stats, debug=debug)
    cert = {
        "root_phi": family_summary(res.phi),
        "nodes": [
            {
                "path": r.path,
                "term": print_term(r.term),
                "sequential": r.sequential,
                "delta": r.delta,
                "phi": family_summary(r.phi),
            }
            for r in res.nodes
        ],
    }
    return Verdict(LIVELOCK_FREE, SFS, None, cert, stats=stats, debug=debug)


def _run_general(term: Term, alg, config: Config) -> Verdict:
    ctx = GeneralContext(alg)
    res = analyze_general(term, ctx)
    rows = ctx.table()
    stats = {"memo_entries": len(rows)}
    debug = None
    if config.debug_families:
        debug = [{"rule": r, "term": t, "var": x, "family": family_summary(f)} for r, t, x, f in rows]
    if not res.livelock_free:
        return Verdict(INCONCLUSIVE, GENERAL, res.reason, stats=stats, debug=debug)
    alg = ctx.alg
    cert = {
        "fair_witness": _render(res.witness, alg),
        "root_fair": family_summary(res.fair),
        "fixpoints": [
            {"path": fp["path"], "binder": fp["binder"], "W": None if fp["W"] is None else _render(fp["W"], alg)}
            for fp in res.fixpoints
        ],
    }
    return Verdict(LIVELOCK_FREE, GENERAL, None, cert, stats=stats, debug=debug)


def run_oracle(term: Term, config: Config) -> Verdict:
    t0 = time.perf_counter()
    r = oracle_divergence(term, config.max_states)
    kind = {"divergent": DIVERGENT, "livelock-free": LIVELOCK_FREE}.get(r.kind, INCONCLUSIVE)
    reason = None if r.complete else f"exploration stopped at {r.states} states"
    cert = r.witness
    if kind == LIVELOCK_FREE:
        cert = {"states": r.states, "complete": True}
    v = Verdict(kind, ORACLE, reason, cert, None, stats={"states": r.states, "complete": r.complete})
    v.seconds = time.perf_counter() - t0
    return v


def _timed_oracle(term: Term, config: Config) -> Verdict:
    # the oracle is a cross-check; running out of time leaves it undecided
    try:
        return _with_timeout(lambda: run_oracle(term, config), config.timeout)
    except AnalysisTimeout as e:
        return Verdict(INCONCLUSIVE, ORACLE, str(e), stats={"states": None, "complete": False},
                       seconds=config.timeout or 0.0)


def _with_timeout(fn, limit: Optional[float]):
    """Run ``fn`` on a daemon thread; an overrun thread is abandoned."""
    if limit is None:
        return fn()
    box: "queue.Queue" = queue.Queue()

    def work():
        try:
            box.put((True, fn()))
        except BaseException as e:  # re-raised on the caller's thread
            box.put((False, e))

    threading.Thread(target=work, daemon=True).start()
    try:
        ok, val = box.get(timeout=limit)
    except queue.Empty:
        raise AnalysisTimeout(f"analysis exceeded {limit:g} s") from None
    if ok:
        return val
    raise val


def _race(term: Term, alphabet, framework: str, config: Config) -> List[Verdict]:
    """Both backends at once.  Without verification the first answer wins."""
    backends = ["explicit", "symbolic"] if len(alphabet) <= EXPLICIT_CAP else ["symbolic"]
    box: "queue.Queue" = queue.Queue()

    def work(b):
        try:
            box.put((b, run_framework(term, alphabet, framework, b, config)))
        except BaseException as e:
            box.put((b, e))

    for b in backends:
        threading.Thread(target=work, args=(b,), daemon=True).start()
    wanted = len(backends) if config.verify_race else 1
    done: List[Verdict] = []
    deadline = None if config.timeout is None else time.monotonic() + config.timeout
    while len(done) < wanted:
        left = None if deadline is None else max(0.0, deadline - time.monotonic())
        try:
            b, v = box.get(timeout=left)
        except queue.Empty:
            raise AnalysisTimeout(f"analysis exceeded {config.timeout:g} s") from None
        if isinstance(v, BaseException):
            raise v
        done.append(v)
    if config.verify_race and len({v.kind for v in done}) > 1:
        raise RaceMismatch("backends disagree: " + ", ".join(f"{v.backend}={v.kind}" for v in done))
    return done


def analyze_term(term: Term, alphabet, config: Config, name: str = "P") -> ProcessReport:
    framework = framework_for(term, config.mode)
    if framework == SFS and classify(term) not in (Kind.SEQUENTIAL, Kind.SFS):
        raise NotSFS(f"{name} is not structurally finite-state")
    race: List[Verdict] = []
    if config.race or config.verify_race:
        race = _race(term, alphabet, framework, config)
        verdict = race[0]
    else:
        backend = config.pick_backend(len(alphabet))
        verdict = _with_timeout(lambda: run_framework(term, alphabet, framework, backend, config), config.timeout)
    oracle = _timed_oracle(term, config) if config.oracle else None
    return ProcessReport(name, classify(term).value, print_term(term), verdict, oracle, race if len(race) > 1 else [])


def analyze(spec: Spec, config: Optional[Config] = None) -> Report:
    config = config or Config()
    procs = [analyze_term(bekic_elaborate(spec, r), spec.alphabet, config, r) for r in spec.roots]
    return Report(list(spec.alphabet), procs, config)


def emit_certificate(proc: ProcessReport, alphabet=None) -> dict:
    """Self-contained livelock-freedom certificate for one analyzed process."""
    v = proc.verdict
    if v.kind != LIVELOCK_FREE or v.certificate is None:
        raise NoCertificate(f"{proc.name}: verdict is {v.kind}, nothing to certify")
    return {
        "schema_version": SCHEMA_VERSION,
        "tool_version": __version__,
        "process": proc.name,
        "term": proc.term,
        "alphabet": list(alphabet) if alphabet is not None else None,
        "framework": v.framework,
        "backend": v.backend,
        "evidence": v.certificate,
    }
