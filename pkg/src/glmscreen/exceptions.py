"""Exception types shared across the package.

The CLI maps these onto exit codes: bad data files and unsupported response
values are data errors (exit 2); saturation, boundary, degeneracy and
non-convergence are numerical failures (exit 3); plain ``ValueError`` covers
argument errors (exit 1).
"""


class GlmScreenError(Exception):
    """Base class for errors raised by glmscreen."""


class SaturationError(GlmScreenError):
    """An exponential overflowed (Poisson cumulant past the clamp)."""


class BoundaryError(GlmScreenError):
    """A mean sits on or outside the open range of the mean function."""


class SupportError(GlmScreenError):
    """A response value lies outside the family's support."""


class DegenerateFeatureError(GlmScreenError):
    """A feature column is constant, so its marginal slope is unidentified."""


class ConvergenceError(GlmScreenError):
    """An iterative fit failed to converge where a result is required."""


class DataFileError(GlmScreenError):
    """An input file is missing, malformed, or contains non-numeric cells."""
