import json

from click.testing import CliRunner

from cspguard import __version__
from cspguard.cli import main
from cspguard.syntax import parse

from conftest import MODELS


def run(*args):
    return CliRunner().invoke(main, [str(a) for a in args])


def test_version():
    r = run("--version")
    assert r.exit_code == 0 and __version__ in r.output


def test_analyze_abp():
    r = run("analyze", MODELS / "abp.cspl")
    assert r.exit_code == 0, r.output
    lines = r.output.splitlines()
    assert lines[0].startswith("System: LivelockFree [SFS, explicit,")
    assert lines[1].startswith("SystemOut: LivelockFree")


def test_analyze_general_mode_and_oracle():
    r = run("analyze", MODELS / "abp.cspl", "--mode", "general", "--oracle")
    assert r.exit_code == 1
    assert "SystemOut: Inconclusive [General" in r.output
    assert "empty fair-set family" in r.output
    assert r.output.count("oracle: LivelockFree") == 2


def test_gallery_exit_three():
    r = run("analyze", MODELS / "gallery.cspl", "--oracle", "--max-states", 20000)
    assert r.exit_code == 3
    assert "Loop: Inconclusive [SFS" in r.output and "delta true at /" in r.output
    assert "oracle: Divergent" in r.output


def test_json_and_certificate(tmp_path):
    js, cert = tmp_path / "r.json", tmp_path / "c.json"
    r = run("analyze", MODELS / "abp.cspl", "--json", js, "--certificate", cert)
    assert r.exit_code == 0
    report = json.loads(js.read_text())
    assert [p["name"] for p in report["processes"]] == ["System", "SystemOut"]
    certs = json.loads(cert.read_text())
    assert set(certs) == {"System", "SystemOut"}
    assert certs["System"]["evidence"]["root_phi"]["members"] == [[["in", "out"], ["error"]]]


def test_certificate_skips_inconclusive(tmp_path):
    cert = tmp_path / "c.json"
    r = run("analyze", MODELS / "incompleteness.cspl", "--certificate", cert)
    assert r.exit_code == 1
    assert json.loads(cert.read_text()) == {}
    assert "no certificate: R" in r.output


def test_dump_lts(tmp_path):
    one = tmp_path / "r.dot"
    assert run("analyze", MODELS / "incompleteness.cspl", "--dump-lts", one).exit_code == 1
    assert one.read_text().startswith("digraph")
    many = tmp_path / "abp.dot"
    run("analyze", MODELS / "abp.cspl", "--dump-lts", many)
    assert (tmp_path / "abp-System.dot").exists() and (tmp_path / "abp-SystemOut.dot").exists()


def test_debug_families_go_to_stderr():
    r = CliRunner().invoke(main, ["analyze", str(MODELS / "abp.cspl"), "--debug-families"])
    assert r.exit_code == 0
    assert "-- families for System" in r.stderr and "-- families" not in r.stdout
    rows = [json.loads(l) for l in r.stderr.splitlines() if l.startswith("{")]
    assert {row["path"] for row in rows} >= {"/", "/0"}


def test_parse_error_exit_two(tmp_path):
    bad = tmp_path / "bad.cspl"
    bad.write_text("alphabet {a};\nP = a -> ;\nroot P;\n")
    r = run("analyze", bad)
    assert r.exit_code == 2 and "2:" in r.output


def test_race_flags():
    r = run("analyze", MODELS / "abp.cspl", "--verify-race")
    assert r.exit_code == 0
    assert "race: explicit -> LivelockFree" in r.output and "race: symbolic -> LivelockFree" in r.output


def test_generate_and_bench(tmp_path):
    r = run("generate", "milner", 3)
    assert r.exit_code == 0 and parse(r.output).roots == ("Sched",)
    out = tmp_path / "b.csv"
    r = run("bench", "abp-interleave", "--from", 1, "--to", 2, "--csv", out)
    assert r.exit_code == 0 and "abp-interleave-2" in r.output
    assert out.read_text().splitlines()[0].startswith("family,n,events,verdict")


def test_oracle_timeout_keeps_the_verdict():
    r = run("analyze", MODELS / "gallery.cspl", "--oracle", "--timeout", 2)
    assert r.exit_code == 3
    assert "Flip: Inconclusive" in r.output and "oracle: Inconclusive" in r.output
