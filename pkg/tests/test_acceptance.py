"""One test per acceptance criterion; the terminal summary prints a PASS/FAIL
line for each (see ``conftest.py``)."""

import time

import pytest

from cspguard.bench import abp_interleave, milner, run_bench, to_csv
from cspguard.driver import DIVERGENT, INCONCLUSIVE, LIVELOCK_FREE, Config, analyze, analyze_term
from cspguard.fuzz import TermGen
from cspguard.general import GeneralContext, analyze_general
from cspguard.semantics import build_lts, oracle_divergence
from cspguard.setlogic import backend_parity, make_algebra
from cspguard.sfs import SfsContext, analyze_sfs, seq_delta, seq_phi, sigma_p
from cspguard.syntax import bekic_elaborate, parse
from cspguard.syntax.terms import depth

from conftest import check_walk, fs, lasso_signatures, load

EVENTS5 = ("a", "b", "c", "d", "e")
EVENTS6 = EVENTS5 + ("f",)
CORPUS_SIZE = 1000
ORACLE_BOUND = 3000


def named_pairs(fam):
    alg = fam.algebra
    return {(alg.names(x), alg.names(y)) for x, y in fam.members()}


def up(alg, *gens):
    return alg.second_in(alg.ucl(alg.sets(gens)))


# -- 1


@pytest.mark.criterion(1, "ABP golden values")
def test_abp_golden_values(abp_terms, record_property):
    t0 = time.perf_counter()
    abp = ("in", "out", "error")
    gen = GeneralContext.for_alphabet(abp, "explicit")
    alg = gen.alg
    F = {n: gen.F(t) for n, t in abp_terms.items()}
    sfs = {n: analyze_sfs(t, SfsContext.for_alphabet(abp, "explicit")) for n, t in abp_terms.items()}
    elapsed = time.perf_counter() - t0

    assert F["Send"] == up(alg, {"in", "error"}, {"out", "error"})
    assert F["Fair"] == up(alg, {"out"})
    assert F["Network"] == up(alg, {"out"}, {"out", "error"}, {"in", "error"})
    assert F["System"] == up(alg, {"out"})
    # the weakness: hiding out as well leaves the general framework with nothing
    assert F["SystemOut"].is_empty()

    assert named_pairs(sfs["Send"].phi) == {
        (fs("in", "out"), fs("error")),
        (fs("error"), fs("in", "out")),
        (fs("error", "in", "out"), fs()),
    }
    assert named_pairs(sfs["Fair"].phi) == {(fs("out"), fs("in", "error")), (fs("error", "out"), fs("in"))}
    assert named_pairs(sfs["Network"].phi) == {(fs("in", "out"), fs("error")), (fs("error", "in", "out"), fs())}
    # the pair ({in}, {error, out}) belongs to Network \ {error, out}, here SystemOut
    assert named_pairs(sfs["SystemOut"].phi) == {(fs("in"), fs("error", "out"))}
    assert sfs["SystemOut"].delta is False and sfs["System"].delta is False
    assert elapsed < 1.0
    record_property("detail", f"{elapsed:.3f} s")


# -- 2


@pytest.mark.criterion(2, "divergence gallery")
def test_gallery(record_property):
    spec = load("gallery.cspl")
    report = analyze(spec)
    assert [p.verdict.kind for p in report.processes] == [INCONCLUSIVE] * 5
    oracle = {}
    for name in ("Loop", "HideOwn", "Swap"):
        o = oracle_divergence(bekic_elaborate(spec, name), 100_000)
        oracle[name] = o
        assert o.kind == "divergent"
    record_property("detail", ", ".join(f"{n} divergent in {o.states} states" for n, o in oracle.items()))


# -- 3


@pytest.mark.criterion(3, "incompleteness example")
def test_incompleteness(record_property):
    spec = load("incompleteness.cspl")
    r = bekic_elaborate(spec, "R")
    res = analyze_sfs(r, SfsContext.for_alphabet(spec.alphabet))
    assert res.delta is True
    assert GeneralContext.for_alphabet(spec.alphabet).F(r).is_empty()
    o = oracle_divergence(r)
    assert o.kind == "livelock-free" and o.complete
    record_property("detail", f"oracle livelock-free, {o.states} states")


# -- shared fuzz corpus for 4, 5, 7


class Case:
    __slots__ = ("term", "oracle", "sfs", "fair")

    def __init__(self, term, oracle):
        self.term, self.oracle = term, oracle
        self.sfs = analyze_sfs(term, SfsContext.for_alphabet(EVENTS5))
        # terms with DIV get no fair-set family at all
        self.fair = analyze_general(term, GeneralContext.for_alphabet(EVENTS5)).fair


@pytest.fixture(scope="module")
def corpus():
    """At least CORPUS_SIZE terms with fully explored state spaces.

    Divergent terms whose tau-cycle was found before exploration finished
    are kept as well; undecided ones are skipped.
    """
    gen = TermGen(20240611, events=EVENTS5)
    cases, skipped, complete = [], 0, 0
    while complete < CORPUS_SIZE:
        t = gen.sfs(5)
        assert depth(t) <= 6
        o = oracle_divergence(t, ORACLE_BOUND)
        if o.kind == "unknown":
            skipped += 1
            continue
        complete += o.complete
        cases.append(Case(t, o))
    return cases, skipped


@pytest.mark.criterion(4, "soundness fuzz, both frameworks")
def test_soundness_fuzz(corpus, record_property):
    cases, skipped = corpus
    unsound = {"sfs": [], "general": []}
    proved = {"sfs": 0, "general": 0}
    for c in cases:
        for mode in unsound:
            v = analyze_term(c.term, EVENTS5, Config(mode=mode, timeout=None)).verdict
            if v.kind == LIVELOCK_FREE:
                proved[mode] += 1
                if c.oracle.divergent:
                    unsound[mode].append(str(c.term))
    divergent = sum(c.oracle.divergent for c in cases)
    complete = sum(c.oracle.complete for c in cases)
    record_property(
        "detail",
        f"{len(cases)} terms, {complete} fully explored ({divergent} divergent, {skipped} undecided skipped); "
        f"proved sfs={proved['sfs']} general={proved['general']}",
    )
    assert unsound == {"sfs": [], "general": []}


@pytest.mark.criterion(5, "fair sets imply delta false, and F meets V")
def test_relative_strength(corpus, record_property):
    cases, _ = corpus
    bad_delta, bad_meet, checked = [], [], 0
    for c in cases:
        if c.fair is None or c.fair.is_empty():
            continue
        if c.sfs.delta:
            bad_delta.append(str(c.term))
            continue
        if c.sfs.phi.is_empty():
            continue
        checked += 1
        vs = {v for _, v in c.fair.members()}
        for f, _ in c.sfs.phi.members():
            if any(not (f & v) for v in vs):
                bad_meet.append(str(c.term))
                break
    record_property("detail", f"cross-invariant checked on {checked} terms")
    assert bad_delta == [] and bad_meet == []


# -- 6


def _general_rows(term, backend):
    ctx = GeneralContext.for_alphabet(EVENTS6, backend)
    analyze_general(term, ctx)
    return {(fn, t, x): fam for fn, t, x, fam in ctx.table()}


@pytest.mark.criterion(6, "explicit and symbolic backends agree")
def test_backend_parity(record_property):
    gen = TermGen(77, events=EVENTS6)
    families = 0
    for i in range(500):
        t = gen.sfs(5) if i % 2 else gen.general(5)
        ex, sy = _general_rows(t, "explicit"), _general_rows(t, "symbolic")
        assert ex.keys() == sy.keys()
        for k in ex:
            assert backend_parity(ex[k], sy[k]), (k, str(t))
        families += len(ex)
        if i % 2:
            a = analyze_sfs(t, SfsContext.for_alphabet(EVENTS6, "explicit"))
            b = analyze_sfs(t, SfsContext.for_alphabet(EVENTS6, "symbolic"))
            assert [n.delta for n in a.nodes] == [n.delta for n in b.nodes]
            for m, n in zip(a.nodes, b.nodes):
                if m.phi is not None:
                    assert backend_parity(m.phi, n.phi)
                    families += 1
    verdicts = []
    for src in (milner(4), abp_interleave(4)):
        spec = parse(src)
        assert len(spec.alphabet) == 12
        for mode in ("sfs", "general"):
            kinds = {b: analyze(spec, Config(mode=mode, backend=b)).processes[0].verdict.kind
                     for b in ("explicit", "symbolic")}
            assert kinds["explicit"] == kinds["symbolic"]
            verdicts.append(kinds["explicit"])
    record_property("detail", f"500 terms, {families} families; 12-event verdicts {verdicts}")


# -- 7


@pytest.mark.criterion(7, "sequential Phi: loop equals circuit")
def test_loop_equals_circuit(corpus, record_property):
    cases, _ = corpus
    alg = make_algebra(EVENTS5, "symbolic")
    seen = set()
    for c in cases:
        for node in c.sfs.nodes:
            if node.sequential and not node.delta and node.term not in seen:
                seen.add(node.term)
                assert seq_phi(node.term, alg, impl="loop") == seq_phi(node.term, alg, impl="circuit")
    record_property("detail", f"{len(seen)} distinct sequential components")
    assert seen


# -- 8


@pytest.mark.criterion(8, "benchmark performance")
def test_benchmarks(tmp_path, record_property):
    rows = run_bench("milner", [20]) + run_bench("philosophers", [10])
    csv_path = tmp_path / "bench.csv"
    csv_path.write_text(to_csv(rows))
    assert csv_path.read_text().startswith("family,n,events,verdict")
    for r in rows:
        assert r.verdict == LIVELOCK_FREE and r.seconds <= 10.0
    record_property("detail", ", ".join(f"{r.family}-{r.n} {r.seconds:.2f} s" for r in rows))


# -- 9


@pytest.mark.criterion(9, "lasso witnesses for sequential Phi")
def test_lasso_witnesses(record_property):
    gen = TermGen(31337, events=EVENTS5)
    alg = make_algebra(EVENTS5)
    done = nonempty = 0
    while done < 100:
        t = gen.sequential(5)
        lts = build_lts(t, 51)
        if not lts.complete or lts.n_states > 50 or seq_delta(t):
            continue
        phi = named_pairs(seq_phi(t, alg))
        if not phi and done - nonempty >= 25:
            continue  # keep most of the sample non-trivial
        done += 1
        nonempty += bool(phi)
        sigs = lasso_signatures(lts)
        for f, c in phi:
            assert f in sigs
            cyc = check_walk(lts, *sigs[f])
            assert f <= cyc and not cyc & c
        for e in sigs:
            assert any(f <= e and not e & c for f, c in phi), (str(t), e)
    record_property("detail", f"100 terms, {nonempty} with nonempty Phi")
