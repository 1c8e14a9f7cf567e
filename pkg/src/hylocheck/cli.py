"""Command-line front end.

Exit codes: 0 ran and expectations met, 1 an expectation or criterion
failed, 2 invalid input, 3 budget exceeded.  ``HYLOCHECK_LOG`` sets the log
level; everything else is a flag.
"""
from __future__ import annotations

import json
import logging
import os
import sys
import time

import click

from . import codata as cd
from .coinductive import check_criteria, compute_quotient, extract_quotient_solution
from .errors import BudgetExceeded, HyloError, ParamsTooLarge, StuckTerm
from .inductive import extract_partial_solution
from .instance import emit_instance, generate_example, load_instance
from .oracle import DEFAULT_CAMPAIGN, DEFAULT_FUNCTION_BUDGET, enumerate_solutions, run_campaign
from .report import SCHEMA_VERSION, build_report, oracle_section, render_solution, \
    render_text, to_json

log = logging.getLogger("hylocheck")

EXIT_OK, EXIT_FAILED, EXIT_INVALID, EXIT_BUDGET = 0, 1, 2, 3


def _setup_logging():
    level = os.environ.get("HYLOCHECK_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="[%(levelname)s] %(name)s: %(message)s", stream=sys.stderr)


def _fail(code, message):
    click.echo(message, err=True)
    sys.exit(code)


def _load(path):
    try:
        return load_instance(path)
    except OSError as exc:
        _fail(EXIT_INVALID, f"error: {exc}")
    except HyloError as exc:
        _fail(EXIT_INVALID, f"error: {type(exc).__name__}: {exc}")


def _parse_bool(text):
    low = text.strip().lower()
    if low in ("true", "1", "yes"):
        return True
    if low in ("false", "0", "no"):
        return False
    _fail(EXIT_INVALID, f"error: expected true/false, got {text!r}")


def _parse_count(text):
    try:
        return int(text)
    except ValueError:
        _fail(EXIT_INVALID, f"error: expected an integer, got {text!r}")


@click.group()
def main():
    """Decide unique solvability of f = beta . F f . alpha on finite instances."""
    _setup_logging()


@main.command()
@click.argument("file", type=click.Path(dir_okay=False))
@click.option("--json", "as_json", is_flag=True, help="Emit the full JSON report.")
@click.option("--expect", multiple=True, metavar="KEY=VALUE",
              help="Assert a verdict (wellfounded, antifounded, criterion_bisim, "
                   "criterion_equiv, solutions).")
@click.option("--oracle/--no-oracle", default=False,
              help="Also count solutions by brute force.")
@click.option("--timings", is_flag=True, help="Add wall-clock timings (breaks byte-stability).")
@click.option("--budget", default=DEFAULT_FUNCTION_BUDGET, show_default=True)
def check(file, as_json, expect, oracle, timings, budget):
    """Run the inductive and coinductive analyses on an instance file."""
    inst = _load(file)
    expectations = {}
    for item in expect:
        key, sep, value = item.partition("=")
        if not sep:
            _fail(EXIT_INVALID, f"error: --expect needs KEY=VALUE, got {item!r}")
        key = key.strip()
        expectations[key] = _parse_count(value) if key == "solutions" else _parse_bool(value)
    t0 = time.perf_counter()
    verdict = check_criteria(inst)
    t1 = time.perf_counter()
    oracle_part = None
    if oracle or "solutions" in expectations:
        try:
            oracle_part = oracle_section(inst, enumerate_solutions(inst, cap=16, budget=budget))
        except BudgetExceeded as exc:
            _fail(EXIT_BUDGET, f"error: {exc}")
    t2 = time.perf_counter()
    report = build_report(inst, verdict, oracle_part,
                          {"analyses_s": t1 - t0, "oracle_s": t2 - t1} if timings else None)
    click.echo(to_json(report) if as_json else render_text(report))

    actual = dict(verdict.flags())
    if oracle_part is not None:
        actual["solutions"] = oracle_part["count"]
    diffs = []
    for key, want in expectations.items():
        if key not in actual:
            _fail(EXIT_INVALID, f"error: unknown --expect key {key!r}")
        if actual[key] != want:
            diffs.append(f"expected {key}={str(want).lower()}, got {str(actual[key]).lower()}")
    if diffs:
        _fail(EXIT_FAILED, "\n".join(diffs))


@main.command()
@click.argument("file", type=click.Path(dir_okay=False))
@click.option("--via", type=click.Choice(["inductive", "coinductive"]), default="inductive",
              show_default=True)
@click.option("--json", "as_json", is_flag=True)
@click.option("--budget", default=DEFAULT_FUNCTION_BUDGET, show_default=True)
def solve(file, via, as_json, budget):
    """Extract the restricted (inductive) or quotiented (coinductive) solution."""
    inst = _load(file)
    if via == "inductive":
        sol = extract_partial_solution(inst)
        out = {"schema_version": SCHEMA_VERSION, "via": via,
               "defined_on": [inst.A.elements[a] for a in sorted(sol.value)],
               "total": sol.total, "values": sol.named(inst)}
        header = "f (on the inductive domain):"
        warning = None if sol.total else "warning: solution is only defined on the inductive domain"
    else:
        quotient = compute_quotient(inst)
        sol = extract_quotient_solution(inst, quotient)
        out = {"schema_version": SCHEMA_VERSION, "via": via,
               "classes": [quotient.label(c) for c in range(len(quotient))],
               "defined_on": [inst.A.elements[a] for a in sorted(sol.value)],
               "total": sol.total, "values": sol.named(inst)}
        header = f"f (into {len(quotient)} bisimilarity classes):"
        warning = None
        try:
            count = enumerate_solutions(inst, cap=0, budget=budget).count
            out["plain_solutions"] = count
            if count != 1:
                warning = f"warning: the plain equation has {count} solutions"
        except BudgetExceeded:
            pass
    if as_json:
        click.echo(json.dumps(out, indent=1, sort_keys=True))
    else:
        click.echo(render_solution(out["values"], out["total"], header))
    if warning:
        click.echo(warning, err=True)


@main.command()
@click.argument("file", type=click.Path(dir_okay=False))
@click.option("--cap", default=16, show_default=True, help="Solutions retained.")
@click.option("--budget", default=DEFAULT_FUNCTION_BUDGET, show_default=True)
@click.option("--json", "as_json", is_flag=True)
def oracle(file, cap, budget, as_json):
    """Count solutions by enumerating every total function."""
    inst = _load(file)
    try:
        res = enumerate_solutions(inst, cap=cap, budget=budget)
    except BudgetExceeded as exc:
        _fail(EXIT_BUDGET, f"error: {exc}")
    section = oracle_section(inst, res)
    if as_json:
        click.echo(json.dumps({"schema_version": SCHEMA_VERSION, **section}, indent=1,
                              sort_keys=True))
        return
    click.echo(f"solutions: {res.count}")
    for i, sol in enumerate(section["solutions"]):
        click.echo(f"  #{i}: " + ", ".join(f"{a}->{b}" for a, b in sol.items()))
    if res.truncated:
        click.echo(f"  ... ({res.count - len(section['solutions'])} more)")


@main.command()
@click.option("--config", "config_path", type=click.Path(dir_okay=False),
              help="JSON campaign config; defaults to the standard sweep.")
@click.option("--seed", type=int, help="Override the config seed (64-bit unsigned).")
@click.option("--random", "random_count", type=int,
              help="Override the random sample count of every random sweep.")
@click.option("--workers", type=int, help="Worker processes.")
@click.option("--json", "as_json", is_flag=True)
@click.option("-o", "--output", type=click.Path(dir_okay=False), help="Write the JSON report.")
def campaign(config_path, seed, random_count, workers, as_json, output):
    """Cross-validate every engine claim against the brute-force oracle."""
    cfg = json.loads(json.dumps(DEFAULT_CAMPAIGN))
    if config_path:
        try:
            with open(config_path, encoding="utf-8") as fh:
                cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            _fail(EXIT_INVALID, f"error: {exc}")
    if seed is not None:
        cfg["seed"] = seed
    if random_count is not None:
        cfg["random"] = [r[:3] + [random_count] for r in cfg.get("random", [])]
    if workers is not None:
        cfg["workers"] = workers
    try:
        rep = run_campaign(cfg)
    except BudgetExceeded as exc:
        _fail(EXIT_BUDGET, f"error: {exc}")
    except (ValueError, TypeError, HyloError) as exc:
        _fail(EXIT_INVALID, f"error: {exc}")
    text = rep.to_json()
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    if as_json:
        click.echo(text)
    else:
        click.echo(f"instances: {rep.instances_run}  seed: {rep.seed}")
        for prop, t in rep.tallies.items():
            click.echo(f"  {'PASS' if not t['fail'] else 'FAIL'}  {prop}: "
                       f"{t['pass']} pass, {t['fail']} fail")
        click.echo(f"  bisim-not-in-equiv witnesses: {rep.data['bisim_not_in_equiv']}")
        click.echo(f"  unique solution without either criterion: "
                   f"{rep.data['unique_without_criteria']}")
    if not rep.ok:
        sys.exit(EXIT_FAILED)


@main.command()
@click.argument("file", type=click.Path(dir_okay=False))
@click.option("--target", required=True, help='Closed term, e.g. "f(arith(0,1))".')
@click.option("--depth", default=8, show_default=True, help="Number of stream elements.")
@click.option("--path", "path", default=None,
              help="Comma-separated destructor path instead of a prefix.")
@click.option("--fuel", default=cd.DEFAULT_FUEL, show_default=True,
              help="Rewrite steps per observation.")
@click.option("--probe", is_flag=True, help="Report a productivity certificate and guardedness.")
def unfold(file, target, depth, path, fuel, probe):
    """Observe a codata term by fuel-bounded rewriting."""
    try:
        system = cd.load_codata(file)
        term = system.term(target)
    except OSError as exc:
        _fail(EXIT_INVALID, f"error: {exc}")
    except HyloError as exc:
        _fail(EXIT_INVALID, f"error: {type(exc).__name__}: {exc}")
    try:
        if probe:
            cert = cd.productivity_probe(system, term, depth, fuel)
            guard = cd.check_guardedness(system)
            click.echo(f"guarded: {str(guard.guarded).lower()}"
                       + (f"  ({guard.offending})" if guard.offending else ""))
            click.echo(f"productive to depth {depth}: {str(cert.ok).lower()}  "
                       f"max steps/observation: {cert.max_steps_per_observation}")
            if not cert.ok:
                click.echo(cert.report)
                sys.exit(EXIT_FAILED)
            return
        if path:
            res = cd.unfold(system, term, [p.strip() for p in path.split(",")], fuel)
            click.echo(str(res.value))
            if res.exhausted:
                sys.exit(EXIT_FAILED)
            return
        out = cd.prefix(system, term, depth, fuel)
    except StuckTerm as exc:
        _fail(EXIT_INVALID, f"error: StuckTerm: {exc}")
    except HyloError as exc:
        _fail(EXIT_INVALID, f"error: {type(exc).__name__}: {exc}")
    if isinstance(out, cd.FuelExhausted):
        _fail(EXIT_FAILED, str(out))
    click.echo(" ".join(map(str, out)))


@main.command()
@click.argument("kind", type=click.Choice(["isort", "qsort", "modsucc", "identity"]))
@click.option("--el", "k", type=int, default=2, show_default=True, help="Alphabet size.")
@click.option("--maxlen", "n", type=int, default=3, show_default=True, help="Maximum length.")
@click.option("--modulus", "m", type=int, default=2, show_default=True)
@click.option("--size-a", type=int, default=1, show_default=True)
@click.option("--size-b", type=int, default=2, show_default=True)
@click.option("--element-cap", type=int, default=100_000, show_default=True)
@click.option("-o", "--output", type=click.Path(dir_okay=False), help="Defaults to stdout.")
def gen(kind, k, n, m, size_a, size_b, element_cap, output):
    """Generate one of the example instance families."""
    params = {"isort": {"k": k, "n": n}, "qsort": {"k": k, "n": n}, "modsucc": {"m": m},
              "identity": {"size_a": size_a, "size_b": size_b}}[kind]
    try:
        inst = generate_example(kind, element_cap=element_cap, **params)
    except ParamsTooLarge as exc:
        _fail(EXIT_BUDGET, f"error: {exc}")
    except HyloError as exc:
        _fail(EXIT_INVALID, f"error: {exc}")
    text = emit_instance(inst)
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


if __name__ == "__main__":
    main()
