"""Exception hierarchy shared by the solvers and the command line."""


class KDickeError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(KDickeError, ValueError):
    """Malformed or invalid sweep configuration."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SolverError(KDickeError):
    """A numerical routine could not produce a trustworthy result."""


class OutOfDomainError(SolverError, ValueError):
    """Coupling outside the region where a closed-form branch is defined."""


class DegenerateProjectionError(SolverError, ValueError):
    """A parity projection annihilates the trial state (zero norm)."""


class ConvergenceError(SolverError):
    """Truncation, eigensolver or minimizer failed its convergence test."""


class NoDipError(SolverError):
    """Fidelity curve is flat at the grid resolution."""
