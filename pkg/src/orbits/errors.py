"""Exception hierarchy.

Each class carries the process exit code the CLI maps it to, so that scripted
sweeps can tell configuration mistakes from physics or numerical failures.
"""


class OrbitsError(Exception):
    exit_code = 1
    code = "error"


class ConfigError(OrbitsError, ValueError):
    """Malformed or inconsistent input."""

    exit_code = 2
    code = "config"


class PhysicsDomainError(OrbitsError, ValueError):
    """Input is well formed but physically inadmissible (forbidden region,
    empty allowed set, circular orbit where an oscillation is required)."""

    exit_code = 3
    code = "domain"


class NumericalError(OrbitsError, ArithmeticError):
    """A numerical procedure failed (step collapse, non-convergence)."""

    exit_code = 4
    code = "numerical"

    def __init__(self, message, time=None):
        super().__init__(message)
        self.time = time
