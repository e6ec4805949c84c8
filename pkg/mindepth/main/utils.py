import json
from typing import Any, Optional

import click
from flask import current_app

from mindepth.config import RunConfig
from mindepth.models import InstanceSet, parse_instance_set


def run_config(**overrides: Any) -> RunConfig:
    """Limits for the running command: app config first, then CLI flags."""
    return RunConfig.from_app(current_app, **overrides)


def load_instance_set(path: str) -> InstanceSet:
    """Read and parse a matrix file."""
    with open(path, encoding="utf-8") as handle:
        instances = parse_instance_set(handle.read())
    current_app.logger.info("loaded %s: n=%d m=%d", path, instances.n, instances.m)
    return instances


def to_json(document: Any) -> str:
    return json.dumps(document, indent=2) + "\n"


def emit(text: str, output: Optional[str] = None):
    """Write command output to a file when one is given, else to stdout."""
    if output:
        with open(output, "w", encoding="utf-8") as handle:
            handle.write(text)
        current_app.logger.info("wrote %s", output)
    else:
        click.echo(text, nl=False)
