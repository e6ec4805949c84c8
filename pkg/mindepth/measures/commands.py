import click
from flask import Blueprint, current_app

from mindepth.errors.handlers import handle_cli_errors
from mindepth.main.utils import emit, load_instance_set, run_config, to_json
from mindepth.measures.report import bounds_report

measures = Blueprint("measures", __name__, cli_group=None)


@measures.cli.command("measure")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default=None)
@click.option("--sample", type=int, default=None,
              help="Sample this many hypotheses when m is over the ETD limit.")
@click.option("--seed", type=int, default=None)
@click.option("--etd-m-limit", type=int, default=None)
@click.option("--den-n-limit", type=int, default=None)
@click.option("--opt-n-limit", type=int, default=None)
@click.option("--output", type=click.Path(dir_okay=False), default=None)
@handle_cli_errors
def measure(path, fmt, sample, seed, etd_m_limit, den_n_limit, opt_n_limit, output):
    """Print every measure of a matrix file and check the bounds between them."""
    run = run_config(format=fmt, sample=sample, seed=seed, etd_exact_m_limit=etd_m_limit,
                     den_exact_n_limit=den_n_limit, opt_exact_n_limit=opt_n_limit,
                     output=output)
    report = bounds_report(load_instance_set(path), run)
    text = report.to_text() if run.format == "text" else to_json(report.to_dict())
    emit(text, run.output)
    if not report.passed:
        failed = ", ".join(flag.name for flag in report.flags if not flag.passed)
        current_app.logger.error("bound check failed for %s: %s", path, failed)
        click.echo(f"bound check failed: {failed}", err=True)
        raise SystemExit(1)
