"""Shared exception types."""


class ConfigError(ValueError):
    """Invalid run configuration (maps to exit code 2 in the CLI)."""


class SolverError(RuntimeError):
    """Divergence or breakdown during integration (exit code 3 in the CLI)."""
