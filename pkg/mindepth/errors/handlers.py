"""
Exception hierarchy and CLI error handling.

Every failure the library can raise derives from MindepthError. Each class
carries the process exit code the command line reports for it:
- 2: malformed input (matrix files, predicate specs, unknown names)
- 3: an exact computation refused because it is past a configured limit
- 1: a verification or bound check failed
"""
import functools
import logging

import click


logger = logging.getLogger(__name__)


# ============================================================================
# Exception Classes
# ============================================================================

class MindepthError(Exception):
    """Base class for all library errors."""

    exit_code = 1


class FormatError(MindepthError):
    """Raised when a matrix or predicate file does not follow its format."""

    exit_code = 2


class DuplicateRow(FormatError):
    """Raised when an instance set would contain the same row twice."""


class WidthMismatch(MindepthError):
    """Raised when two bit vectors (or a vector and a set) differ in width."""

    exit_code = 2


class ColumnIndexError(MindepthError, IndexError):
    """Raised when a column index falls outside [0, m)."""

    exit_code = 2


class ConfigError(MindepthError):
    """Raised for invalid run configuration (non-positive limits, bad names)."""

    exit_code = 2


class DomainMismatch(MindepthError):
    """Raised when predicates over different domains are combined."""

    exit_code = 2


class ExactLimitExceeded(MindepthError):
    """Raised when an exponential computation is past its configured limit."""

    exit_code = 3

    def __init__(self, what, size, limit):
        super().__init__(f"{what}: size {size} exceeds exact limit {limit}")
        self.what = what
        self.size = size
        self.limit = limit


class DomainTooLarge(ExactLimitExceeded):
    """Raised when a generated predicate domain has too many points."""


class Overbudget(MindepthError):
    """Raised when a specifying-set search passes its size budget."""

    def __init__(self, budget):
        super().__init__(f"no specifying set of size <= {budget}")
        self.budget = budget


class DegenerateSplit(MindepthError):
    """Raised when no column splits a live set of two or more distinct rows."""


class SpecSetTooLarge(MindepthError):
    """Raised when a specifying-set oracle returns more than E_bound columns."""


class InvalidSpecifyingSet(MindepthError):
    """Raised when a specifying set is exhausted with two or more rows alive."""


class InconsistentOracle(MindepthError):
    """Raised when oracle answers eliminate every row or contradict the result."""


class MultipleMaximal(MindepthError):
    """Raised when a greatest common descendant is not unique."""


class VerificationFailed(MindepthError):
    """Raised when a bound check or an acceptance suite fails."""


# ============================================================================
# CLI Error Handling
# ============================================================================

def handle_cli_errors(command):
    """
    Map library exceptions raised inside a command to exit codes.

    Args:
        command: click command callback

    The error is logged, a one-line diagnostic goes to stderr, and the
    process exits with the exception's exit_code. click's own usage errors
    pass through untouched (click reports those with exit code 2).
    """

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except MindepthError as exc:
            logger.warning("%s failed: %s", command.__name__, exc)
            click.echo(f"error: {exc}", err=True)
            raise SystemExit(exc.exit_code)

    return wrapper
