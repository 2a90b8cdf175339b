"""``cspguard`` command line."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import __version__
from .bench import FAMILIES, run_bench, to_csv, to_table
from .driver import AnalysisTimeout, Config, NoCertificate, analyze, emit_certificate
from .semantics import build_lts
from .syntax import ParseError, bekic_elaborate, parse

EXIT_ERROR = 2


@click.group()
@click.version_option(__version__, prog_name="cspguard")
def main():
    """Static livelock-freedom checker for CSP processes."""


@main.command("analyze")
@click.argument("file", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--mode", type=click.Choice(["auto", "sfs", "general"]), default="auto", show_default=True)
@click.option("--backend", type=click.Choice(["auto", "explicit", "symbolic"]), default="auto", show_default=True)
@click.option("--oracle", is_flag=True, help="Cross-check with explicit state exploration.")
@click.option("--race", is_flag=True, help="Run both backends; the first verdict wins.")
@click.option("--verify-race", is_flag=True, help="Run both backends and require equal verdicts.")
@click.option("--certificate", type=click.Path(dir_okay=False, path_type=Path), help="Write certificates (JSON).")
@click.option("--json", "json_path", type=click.Path(dir_okay=False, path_type=Path), help="Write the report (JSON).")
@click.option("--timeout", type=float, default=60.0, show_default=True, help="Seconds per process; 0 disables.")
@click.option("--max-states", type=int, default=100_000, show_default=True)
@click.option("--dump-lts", type=click.Path(dir_okay=False, path_type=Path), help="Write the root LTS as DOT.")
@click.option("--debug-families", is_flag=True, help="Print every computed family to stderr.")
def analyze_cmd(file, mode, backend, oracle, race, verify_race, certificate, json_path, timeout, max_states,
                dump_lts, debug_families):
    """Analyze every root process declared in FILE."""
    config = Config(
        mode=mode,
        backend=backend,
        oracle=oracle,
        race=race,
        verify_race=verify_race,
        timeout=timeout or None,
        max_states=max_states,
        debug_families=debug_families,
    )
    try:
        spec = parse(file.read_text(encoding="utf-8"))
        if dump_lts:
            _dump(spec, dump_lts, max_states)
        report = analyze(spec, config)
    except ParseError as e:
        click.echo(f"{file}: {e}", err=True)
        sys.exit(EXIT_ERROR)
    except AnalysisTimeout as e:
        click.echo(f"timeout: {e}", err=True)
        sys.exit(EXIT_ERROR)
    except Exception as e:
        click.echo(f"error: {type(e).__name__}: {e}", err=True)
        sys.exit(EXIT_ERROR)

    for p in report.processes:
        v = p.verdict
        line = f"{p.name}: {v.kind} [{v.framework}, {v.backend}, {v.seconds:.3f}s]"
        if v.reason:
            line += f" - {v.reason}"
        click.echo(line)
        if p.oracle is not None:
            o = p.oracle
            size = f" ({o.stats['states']} states)" if o.stats.get("states") is not None else ""
            click.echo(f"  oracle: {o.kind}{size}" + (f" - {o.reason}" if o.reason else ""))
        for r in p.race:
            click.echo(f"  race: {r.backend} -> {r.kind} in {r.seconds:.3f}s")
        if debug_families and v.debug:
            click.echo(f"-- families for {p.name}", err=True)
            for row in v.debug:
                click.echo(json.dumps(row, ensure_ascii=False, sort_keys=True), err=True)

    if json_path:
        json_path.write_text(report.to_json() + "\n", encoding="utf-8")
    if certificate:
        certs = {}
        for p in report.processes:
            try:
                certs[p.name] = emit_certificate(p, spec.alphabet)
            except NoCertificate as e:
                click.echo(f"no certificate: {e}", err=True)
        certificate.write_text(json.dumps(certs, indent=2, sort_keys=True, ensure_ascii=False) + "\n", encoding="utf-8")
    sys.exit(report.exit_code)


def _dump(spec, path: Path, max_states: int) -> None:
    roots = spec.roots
    for r in roots:
        lts = build_lts(bekic_elaborate(spec, r), max_states)
        target = path if len(roots) == 1 else path.with_name(f"{path.stem}-{r}{path.suffix}")
        target.write_text(lts.to_dot(), encoding="utf-8")


@main.command("bench")
@click.argument("family", type=click.Choice(sorted(FAMILIES)))
@click.option("--from", "lo", type=int, required=True)
@click.option("--to", "hi", type=int, required=True)
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False, path_type=Path))
@click.option("--backend", type=click.Choice(["auto", "explicit", "symbolic"]), default="auto", show_default=True)
@click.option("--mode", type=click.Choice(["auto", "sfs", "general"]), default="auto", show_default=True)
@click.option("--oracle", is_flag=True)
@click.option("--timeout", type=float, default=60.0, show_default=True)
def bench_cmd(family, lo, hi, csv_path, backend, mode, oracle, timeout):
    """Time instances of FAMILY for every size in the given range."""
    config = Config(mode=mode, backend=backend, oracle=oracle, timeout=timeout or None)
    rows = run_bench(family, range(lo, hi + 1), config)
    click.echo(to_table(rows))
    if csv_path:
        csv_path.write_text(to_csv(rows), encoding="utf-8")
    sys.exit(0 if all(r.verdict == "LivelockFree" for r in rows) else 1)


@main.command("generate")
@click.argument("family", type=click.Choice(sorted(FAMILIES)))
@click.argument("n", type=int)
def generate_cmd(family, n):
    """Print the .cspl source of one benchmark instance."""
    click.echo(FAMILIES[family](n), nl=False)


if __name__ == "__main__":
    main()
