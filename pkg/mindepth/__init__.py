from logging.config import dictConfig
from typing import Type

from flask import Flask

from mindepth.config import Config, configure_logging


def create_app(config_class: Type[Config] = Config) -> Flask:
    """Application factory: wires configuration and the command blueprints."""

    dictConfig(configure_logging())

    app = Flask(__name__)
    app.config.from_object(config_class)

    from mindepth.measures.commands import measures
    from mindepth.solvers.commands import solvers
    from mindepth.lattice.commands import lattice
    from mindepth.verify.commands import verify

    app.register_blueprint(measures)
    app.register_blueprint(solvers)
    app.register_blueprint(lattice)
    app.register_blueprint(verify)

    return app
