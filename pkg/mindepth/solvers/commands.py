import math

import click
from flask import Blueprint

from mindepth.errors.handlers import ConfigError, ExactLimitExceeded, handle_cli_errors
from mindepth.main.utils import emit, load_instance_set, run_config, to_json
from mindepth.measures.report import fraction_text
from mindepth.measures.utils import den_exact
from mindepth.models import tree_depth, tree_internal_nodes, tree_to_dot
from mindepth.solvers.learners import LEARNERS, FixedOracle, adversary_oracle, play_game
from mindepth.solvers.trees import greedy_tree, opt_exact

solvers = Blueprint("solvers", __name__, cli_group=None)


@solvers.cli.command("solve")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--algorithm", type=click.Choice(["exact", "greedy"]), default="exact")
@click.option("--format", "fmt", type=click.Choice(["dot", "json", "text"]), default="dot")
@click.option("--opt-n-limit", type=int, default=None)
@click.option("--output", type=click.Path(dir_okay=False), default=None)
@handle_cli_errors
def solve(path, algorithm, fmt, opt_n_limit, output):
    """Build a decision tree and print it with its depth and lower bounds."""
    run = run_config(opt_exact_n_limit=opt_n_limit, format=fmt, output=output)
    instances = load_instance_set(path)
    if algorithm == "exact":
        depth, tree = opt_exact(instances, run.opt_exact_n_limit)
    else:
        tree = greedy_tree(instances)
        depth = tree_depth(tree)

    try:
        den, _ = den_exact(instances, run.den_exact_n_limit)
        den_text = fraction_text(den)
    except ExactLimitExceeded:
        den_text = None
    log2n = round(math.log2(instances.n), 9)
    dot = tree_to_dot(tree)

    if run.format == "json":
        text = to_json({"algorithm": algorithm, "depth": depth,
                        "internal_nodes": tree_internal_nodes(tree),
                        "log2n": log2n, "DEN": den_text, "dot": dot})
    elif run.format == "text":
        text = (f"algorithm {algorithm}\ndepth {depth}\n"
                f"internal_nodes {tree_internal_nodes(tree)}\nlog2n {log2n}\nDEN {den_text}\n")
    else:
        text = f"// algorithm={algorithm} depth={depth} log2n={log2n} DEN={den_text}\n" + dot
    emit(text, run.output)


def _make_oracle(instances, spec: str, run):
    if spec == "adversary":
        return adversary_oracle(instances, n_limit=run.den_exact_n_limit,
                                effort=run.den_lower_effort, seed=run.seed)
    if spec.startswith("hidden="):
        value = spec[len("hidden="):]
        if not value.isdigit():
            raise ConfigError(f"hidden row must be a positive integer, got {value!r}")
        return FixedOracle(instances, int(value) - 1)
    raise ConfigError(f"oracle must be hidden=<row> or adversary, got {spec!r}")


@solvers.cli.command("play")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--learner", type=click.Choice(LEARNERS), default="moshkov")
@click.option("--oracle", "oracle_spec", default="hidden=1",
              help="hidden=<row, 1-based> or adversary.")
@click.option("--epsilon", type=float, default=None)
@click.option("--greedy-spec", is_flag=True, help="Use greedy specifying sets.")
@click.option("--phases", is_flag=True, help="Include per-phase sizes in the transcript.")
@click.option("--output", type=click.Path(dir_okay=False), default=None)
@handle_cli_errors
def play(path, learner, oracle_spec, epsilon, greedy_spec, phases, output):
    """Play one exact-learning game and print the query transcript."""
    run = run_config(output=output)
    instances = load_instance_set(path)
    oracle = _make_oracle(instances, oracle_spec, run)
    transcript = play_game(instances, learner, oracle, opt_n_limit=run.opt_exact_n_limit,
                           epsilon=epsilon, greedy_spec=greedy_spec)
    emit(to_json(transcript.to_dict(with_phases=phases)), run.output)
