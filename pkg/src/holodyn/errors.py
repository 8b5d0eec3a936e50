"""Exception types shared across the package.

Everything numerical that can fail (solver non-convergence, pole hits,
branch-tracking ambiguity, landing failures) derives from NumericError so
the CLI can map it to a single exit code.
"""


class NumericError(Exception):
    """Base class for numeric failures."""


class RootSolveError(NumericError):
    """Root solver did not converge; carries the best residual reached."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class PoleError(NumericError):
    """Evaluation requested too close to a pole / lattice point."""


class BranchTrackError(NumericError):
    """Continuous branch tracking became ambiguous (orbit too close to 0)."""


class LandingError(NumericError):
    """An external ray failed to land or jumped branches while tracing."""


class DegenerateError(NumericError):
    """Degenerate configuration (e.g. double fixed point at c = 1/4)."""
