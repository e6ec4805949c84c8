import click
from flask import Blueprint, current_app

from mindepth.errors.handlers import handle_cli_errors
from mindepth.main.utils import emit, run_config, to_json
from mindepth.verify.corpus import exhaustive_corpus, random_corpus
from mindepth.verify.suites import SUITE_ALIASES, SUITES, resolve_suites, run_suite

verify = Blueprint("verify", __name__, cli_group=None)


@verify.cli.command("verify")
@click.option("--seed", type=int, default=None)
@click.option("--cases", type=int, default=None)
@click.option("--max-n", type=int, default=None)
@click.option("--max-m", type=int, default=None)
@click.option("--suite", "suites", type=click.Choice(sorted({**SUITES, **SUITE_ALIASES})),
              multiple=True,
              help="Run only these suites (repeatable). Default: all.")
@click.option("--exhaustive", is_flag=True,
              help="Every instance set up to --max-n/--max-m instead of a random corpus.")
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default=None)
@click.option("--output", type=click.Path(dir_okay=False), default=None)
@handle_cli_errors
def verify_command(seed, cases, max_n, max_m, suites, exhaustive, fmt, output):
    """Run the bound and identity suites; exit 1 if any check fails."""
    run = run_config(seed=seed, cases=cases, max_n=max_n, max_m=max_m, format=fmt, output=output)
    if exhaustive:
        corpus = list(exhaustive_corpus(run.max_n, run.max_m))
    else:
        corpus = random_corpus(run.seed, run.cases, run.max_n, run.max_m)
    current_app.logger.info("verify: %d instance sets, seed %d", len(corpus), run.seed)

    results = [run_suite(name, corpus, run) for name in resolve_suites(suites)]
    passed = all(result.passed for result in results)
    summary = {
        "seed": run.seed,
        "corpus": "exhaustive" if exhaustive else "random",
        "instances": len(corpus),
        "suites": [result.to_dict() for result in results],
        "pass": passed,
    }
    if run.format == "text":
        lines = []
        for result in results:
            status = "ok  " if result.passed else "FAIL"
            lines.append(f"{status} {result.name:10s} cases={result.cases} "
                         f"checks={result.checks} failed={len(result.failures)}")
            lines.extend(f"     {message}" for message in result.failures[:5])
        lines.append("PASS" if passed else "FAIL")
        emit("\n".join(lines) + "\n", run.output)
    else:
        emit(to_json(summary), run.output)
    if not passed:
        failed = ", ".join(result.name for result in results if not result.passed)
        current_app.logger.error("verification failed: %s", failed)
        raise SystemExit(1)
