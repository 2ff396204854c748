"""Exception taxonomy for the benthdrift solver.

Errors are grouped by the stage that raises them: configuration parsing,
model/parameter preconditions, discretization, time stepping, steady-state
continuation, and spectral analysis.  The command-line driver maps these
groups onto distinct process exit codes.
"""

from __future__ import annotations


class BenthdriftError(Exception):
    """Base class for every error raised by this package."""


# --- configuration ---------------------------------------------------------


class ParseError(BenthdriftError):
    """Raised when a config file cannot be parsed at all.

    Carries the one-based line number of the first offending line when the
    underlying parser reports one.
    """

    def __init__(self, message: str, lineno: int | None = None) -> None:
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


class SchemaError(BenthdriftError):
    """Raised for an unknown section/key or a value of the wrong type.

    The offending ``section.key`` is prefixed into the message so the
    command line can surface it without extra plumbing.
    """

    def __init__(self, message: str, key: str | None = None) -> None:
        if key is not None:
            message = f"{key}: {message}"
        super().__init__(message)
        self.key = key


class UnknownPreset(BenthdriftError):
    """Raised when a preset name is not in the registry."""


# --- model-level preconditions --------------------------------------------


class NonconformingGrowth(BenthdriftError):
    """Raised when a growth law violates the shape assumptions it declares."""


class NoRoots(BenthdriftError):
    """Raised when a growth level line misses the hump of the growth curve."""


class DoubleRoot(BenthdriftError):
    """Raised when a level line is tangent to the hump (two equal roots)."""


class RegimeMismatch(BenthdriftError):
    """Raised when an operation's parameter-regime precondition fails."""


class GapConditionFailed(BenthdriftError):
    """Raised when the drift bound guaranteeing two coexistence states fails."""


# --- discretization and linear algebra -------------------------------------


class BadResolution(BenthdriftError):
    """Raised when the grid cannot resolve the advection (cell Peclet too large)."""


class SingularSystem(BenthdriftError):
    """Raised when a linear boundary-value or Newton system is not solvable."""


class LinearSolveFailure(BenthdriftError):
    """Raised when the implicit step's tridiagonal solve breaks down."""


# --- time stepping ----------------------------------------------------------


class StepRejected(BenthdriftError):
    """Raised when a step would clip away more negative mass than allowed."""


class HitHorizon(BenthdriftError):
    """Raised when a march that must settle reaches the time horizon instead."""


class ConvergenceFailure(BenthdriftError):
    """Raised when an iteration stalls or produces a structurally wrong state."""


# --- spectral analysis ------------------------------------------------------


class NonPositiveEigenfunction(BenthdriftError):
    """Raised when the leading eigenvector is not positive after sign fixing.

    The leading eigenvector of the symmetrized linearization is positive for
    every irreducible assembly, so a sign change signals an assembly or
    indexing bug rather than a property of the model.
    """


class BracketFailure(BenthdriftError):
    """Raised when a root bracket does not straddle a sign change."""
