import pytest
from hypothesis import HealthCheck, settings

from mindepth import create_app
from mindepth.config import TestingConfig

# exact searches are exponential; keep examples small but untimed
settings.register_profile("mindepth", deadline=None, max_examples=50,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("mindepth")


@pytest.fixture
def app():
    """Create application for testing."""
    app = create_app(TestingConfig)
    yield app


@pytest.fixture
def runner(app):
    """CLI runner bound to the test application."""
    return app.test_cli_runner()


@pytest.fixture
def write_file(tmp_path):
    """Write text to a file under tmp_path and return its path as a string."""

    def write(name, text):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)

    return write
