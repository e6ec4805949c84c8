import os
from dataclasses import dataclass, fields, replace
from typing import Any, Dict, Optional, Union

from mindepth.errors.handlers import ConfigError


def _env_bool(name: str, default: Union[str, bool] = "False") -> bool:
    value = os.getenv(name, default)
    if isinstance(value, bool):
        return value
    return str(value).lower() in {"1", "true", "yes", "on"}


def _env_int(name: str, default: int) -> int:
    value = os.getenv(name)
    if value is None or not value.strip():
        return default
    try:
        return int(value)
    except ValueError as exc:
        raise ConfigError(f"{name} must be an integer, got {value!r}") from exc


class Config:
    """Base configuration driven by environment variables."""

    TESTING = False

    # Exact-computation limits
    ETD_EXACT_M_LIMIT = _env_int("MINDEPTH_ETD_EXACT_M_LIMIT", 16)
    DEN_EXACT_N_LIMIT = _env_int("MINDEPTH_DEN_EXACT_N_LIMIT", 20)
    OPT_EXACT_N_LIMIT = _env_int("MINDEPTH_OPT_EXACT_N_LIMIT", 24)
    WITNESS_EXACT_X_LIMIT = _env_int("MINDEPTH_WITNESS_EXACT_X_LIMIT", 64)
    DOMAIN_SIZE_LIMIT = _env_int("MINDEPTH_DOMAIN_SIZE_LIMIT", 4096)

    # Heuristics and sampling
    DEN_LOWER_EFFORT = _env_int("MINDEPTH_DEN_LOWER_EFFORT", 8)
    SAMPLE_HYPOTHESES = _env_int("MINDEPTH_SAMPLE_HYPOTHESES", 0)
    EXACT_LATTICE_HS = _env_bool("MINDEPTH_EXACT_LATTICE_HS", "False")

    # Verification runs
    VERIFY_SEED = _env_int("MINDEPTH_VERIFY_SEED", 1729)
    VERIFY_CASES = _env_int("MINDEPTH_VERIFY_CASES", 200)
    VERIFY_MAX_N = _env_int("MINDEPTH_VERIFY_MAX_N", 8)
    VERIFY_MAX_M = _env_int("MINDEPTH_VERIFY_MAX_M", 6)

    OUTPUT_FORMAT = os.getenv("MINDEPTH_OUTPUT_FORMAT", "json").lower()


class TestingConfig(Config):
    """Small, fast defaults for the test suite."""

    TESTING = True
    VERIFY_CASES = 25
    VERIFY_MAX_N = 6
    VERIFY_MAX_M = 4


@dataclass(frozen=True)
class RunConfig:
    """
    Limits and switches for a single command invocation.

    Built from the application config; command-line flags override it.
    """

    etd_exact_m_limit: int = 16
    den_exact_n_limit: int = 20
    opt_exact_n_limit: int = 24
    witness_exact_x_limit: int = 64
    domain_size_limit: int = 4096
    den_lower_effort: int = 8
    sample: int = 0
    exact_lattice_hs: bool = False
    seed: int = 1729
    cases: int = 200
    max_n: int = 8
    max_m: int = 6
    output: Optional[str] = None
    format: str = "json"

    def __post_init__(self):
        for name in ("etd_exact_m_limit", "den_exact_n_limit", "opt_exact_n_limit",
                     "witness_exact_x_limit", "domain_size_limit", "max_n", "max_m"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")
        if self.cases < 0 or self.sample < 0 or self.den_lower_effort < 0:
            raise ConfigError("cases, sample and effort must be non-negative")
        if self.format not in {"json", "text", "dot"}:
            raise ConfigError(f"unknown output format {self.format!r}")

    @classmethod
    def from_app(cls, app, **overrides: Any) -> "RunConfig":
        """Read limits from a Flask app config, then apply non-None overrides."""
        cfg = app.config
        base = cls(
            etd_exact_m_limit=cfg.get("ETD_EXACT_M_LIMIT", 16),
            den_exact_n_limit=cfg.get("DEN_EXACT_N_LIMIT", 20),
            opt_exact_n_limit=cfg.get("OPT_EXACT_N_LIMIT", 24),
            witness_exact_x_limit=cfg.get("WITNESS_EXACT_X_LIMIT", 64),
            domain_size_limit=cfg.get("DOMAIN_SIZE_LIMIT", 4096),
            den_lower_effort=cfg.get("DEN_LOWER_EFFORT", 8),
            sample=cfg.get("SAMPLE_HYPOTHESES", 0),
            exact_lattice_hs=cfg.get("EXACT_LATTICE_HS", False),
            seed=cfg.get("VERIFY_SEED", 1729),
            cases=cfg.get("VERIFY_CASES", 200),
            max_n=cfg.get("VERIFY_MAX_N", 8),
            max_m=cfg.get("VERIFY_MAX_M", 6),
            format=cfg.get("OUTPUT_FORMAT", "json"),
        )
        known = {f.name for f in fields(cls)}
        changes = {k: v for k, v in overrides.items() if v is not None and k in known}
        return replace(base, **changes)


def configure_logging() -> Dict[str, Any]:
    """Return a dictConfig structure based on environment log-level overrides."""

    level = os.getenv("MINDEPTH_LOG_LEVEL", os.getenv("LOG_LEVEL", "WARNING")).upper()
    return {
        "version": 1,
        "disable_existing_loggers": False,
        "formatters": {
            "default": {
                "format": "[%(asctime)s] %(levelname)s in %(module)s: %(message)s",
            }
        },
        "handlers": {
            "stderr": {
                "class": "logging.StreamHandler",
                "stream": "ext://sys.stderr",
                "formatter": "default",
            }
        },
        "root": {
            "level": level,
            "handlers": ["stderr"],
        },
    }
