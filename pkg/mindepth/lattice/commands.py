import click
from flask import Blueprint

from mindepth.errors.handlers import ConfigError, handle_cli_errors
from mindepth.lattice.utils import (hasse_build, hasse_to_dot, induced_matrix, learn_disjunction,
                                    load_class, td_table)
from mindepth.main.utils import emit, run_config, to_json
from mindepth.measures.report import moshkov_bound
from mindepth.measures.utils import etd
from mindepth.models import format_instance_set
from mindepth.solvers.learners import FixedOracle, adversary_oracle

lattice = Blueprint("lattice", __name__, cli_group=None)

ACTIONS = ("hasse", "matrix", "etd", "learn")


@lattice.cli.command("class")
@click.argument("spec")
@click.argument("action", type=click.Choice(ACTIONS))
@click.option("--hidden", default="1",
              help="Element to learn: 1-based index in diagram order, or adversary.")
@click.option("--exact-hs", is_flag=True, default=None,
              help="Exact hitting sets inside specifying sets.")
@click.option("--domain-limit", type=int, default=None)
@click.option("--with-etd", is_flag=True, help="Also compute ETD of the induced matrix exactly.")
@click.option("--output", type=click.Path(dir_okay=False), default=None)
@handle_cli_errors
def class_command(spec, action, hidden, exact_hs, domain_limit, with_etd, output):
    """
    Work with a disjunction class.

    SPEC is "ray n m", "raysum [n]" or a predicate spec file.
    """
    run = run_config(exact_lattice_hs=exact_hs, domain_size_limit=domain_limit, output=output)
    domain, family = load_class(spec, run.domain_size_limit)
    hasse = hasse_build(family, domain)

    if action == "hasse":
        emit(hasse_to_dot(hasse), run.output)
    elif action == "matrix":
        emit(format_instance_set(induced_matrix(hasse)), run.output)
    elif action == "etd":
        rows = td_table(hasse, exact_hs=True)
        doc = {
            "domain": domain.label,
            "elements": len(hasse),
            "degree": hasse.degree,
            "max_total": max(row["total"] for row in rows),
            "table": rows,
        }
        if with_etd:
            doc["ETD"] = etd(induced_matrix(hasse), run.etd_exact_m_limit)
        emit(to_json(doc), run.output)
    else:
        matrix = induced_matrix(hasse)
        if hidden == "adversary":
            oracle = adversary_oracle(matrix, n_limit=run.den_exact_n_limit,
                                      effort=run.den_lower_effort, seed=run.seed)
        elif hidden.isdigit() and 1 <= int(hidden) <= len(hasse):
            oracle = FixedOracle(matrix, int(hidden) - 1)
        else:
            raise ConfigError(f"--hidden must be 1..{len(hasse)} or adversary, got {hidden!r}")
        element, transcript = learn_disjunction(hasse, oracle, run.exact_lattice_hs)
        doc = transcript.to_dict(with_phases=True)
        doc["element"] = element.label
        doc["bound"] = round(moshkov_bound(hasse.degree, len(hasse)), 9)
        emit(to_json(doc), run.output)
