"""Exception hierarchy shared across the toolkit.

Each error class carries the process exit code the CLI maps it to:
2 for input/parse problems, 3 for numeric/convergence failures and
4 for configuration mistakes.
"""


class MaizecastError(Exception):
    """Base class for all toolkit errors."""

    exit_code = 1


class InputDataError(MaizecastError):
    """Malformed, inconsistent or degenerate input data."""

    exit_code = 2


class NumericError(MaizecastError):
    """A computation could not produce a meaningful numeric result."""

    exit_code = 3


class ConvergenceError(NumericError):
    """An iterative procedure hit its iteration cap without converging."""


class ConfigError(MaizecastError):
    """Invalid run configuration (flags, sizes, model kinds)."""

    exit_code = 4


class InvalidModelError(ConfigError):
    """Model parameters are structurally unusable (wrong shapes or
    failed stochasticity checks where valid parameters are required)."""
