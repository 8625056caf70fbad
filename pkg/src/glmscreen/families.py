"""Canonical exponential-family primitives.

A family is described by its cumulant function ``b``: the response density is
``exp{y*theta - b(theta) + c(y)}``, the mean is ``b'(theta)``, the variance is
``b''(theta)``, and the canonical link is the inverse of ``b'``. The constant
``c(y)`` term is dropped from the negative log-likelihood because it cancels
in every likelihood difference this package computes. The dispersion
parameter is fixed at 1 throughout.

Public methods validate their inputs and raise loudly; the ``_*_raw`` methods
skip validation and let overflow saturate to ``inf``, which is what the
line-searched Newton solvers need (an infinite objective simply rejects the
trial step).
"""

from __future__ import annotations

import numpy as np
from scipy.special import expit, logit

from .exceptions import BoundaryError, SaturationError, SupportError

# Above this the Poisson cumulant exp(theta) is treated as divergent.
POISSON_THETA_MAX = 700.0

# np.random.Generator.poisson rejects means near the int64 limit.
_POISSON_SAMPLE_MEAN_MAX = 9.0e18


def _prepare(value):
    """Return (ndarray view, was_scalar) for scalar-or-array arguments."""
    arr = np.asarray(value, dtype=np.float64)
    return arr, arr.ndim == 0


def _emit(arr, scalar):
    return float(arr) if scalar else arr


class Family:
    """One canonical exponential family (cumulant, derivatives, link)."""

    name: str = ""

    # raw kernels used by the fitting loops: no checks, overflow -> inf
    def _cumulant_raw(self, theta):
        raise NotImplementedError

    def _mean_raw(self, theta):
        raise NotImplementedError

    def _var_raw(self, theta):
        raise NotImplementedError

    def _link_raw(self, mu):
        raise NotImplementedError

    def _check_theta(self, theta):
        arr, scalar = _prepare(theta)
        if not np.all(np.isfinite(arr)):
            raise ValueError(f"{self.name}: theta must be finite")
        return arr, scalar

    def cumulant(self, theta):
        """b(theta)."""
        arr, scalar = self._check_theta(theta)
        return _emit(self._cumulant_raw(arr), scalar)

    def mean(self, theta):
        """b'(theta), the mean response at canonical parameter theta."""
        arr, scalar = self._check_theta(theta)
        return _emit(self._mean_raw(arr), scalar)

    def variance(self, theta):
        """b''(theta), the variance function at canonical parameter theta."""
        arr, scalar = self._check_theta(theta)
        return _emit(self._var_raw(arr), scalar)

    def link(self, mu):
        """The canonical link: the theta with b'(theta) = mu.

        Raises :class:`BoundaryError` when ``mu`` sits on or outside the open
        range of ``b'`` (a degenerate response mean).
        """
        arr, scalar = _prepare(mu)
        if not np.all(np.isfinite(arr)):
            raise ValueError(f"{self.name}: mu must be finite")
        self._check_mean_range(arr)
        return _emit(self._link_raw(arr), scalar)

    def neg_loglik(self, theta, y):
        """Per-observation negative log-likelihood b(theta) - y*theta."""
        arr, scalar = self._check_theta(theta)
        yarr, yscalar = _prepare(y)
        self.validate_response(yarr)
        out = self._cumulant_raw(arr) - yarr * arr
        return _emit(out, scalar and yscalar)

    def _check_mean_range(self, mu):
        pass

    def validate_response(self, y):
        """Raise :class:`SupportError` if any y is outside the support."""

    def in_support(self, y) -> bool:
        try:
            self.validate_response(np.asarray(y, dtype=np.float64))
        except SupportError:
            return False
        return True

    def sample(self, theta, rng):
        """Draw responses with canonical parameter theta (dispersion 1)."""
        raise NotImplementedError

    def __repr__(self):
        return f"{type(self).__name__}()"


class Gaussian(Family):
    """b(theta) = theta^2 / 2; identity link; unit-variance normal errors."""

    name = "gaussian"

    def _cumulant_raw(self, theta):
        return 0.5 * theta * theta

    def _mean_raw(self, theta):
        return np.asarray(theta, dtype=np.float64)

    def _var_raw(self, theta):
        return np.ones_like(np.asarray(theta, dtype=np.float64))

    def _link_raw(self, mu):
        return np.asarray(mu, dtype=np.float64)

    def validate_response(self, y):
        arr = np.asarray(y, dtype=np.float64)
        if not np.all(np.isfinite(arr)):
            raise SupportError("gaussian: response must be finite")

    def sample(self, theta, rng):
        theta = np.asarray(theta, dtype=np.float64)
        return theta + rng.standard_normal(theta.shape)


class Bernoulli(Family):
    """b(theta) = log(1 + e^theta), computed as a stable softplus."""

    name = "bernoulli"

    def _cumulant_raw(self, theta):
        # max(theta, 0) + log1p(exp(-|theta|)) never overflows
        return np.maximum(theta, 0.0) + np.log1p(np.exp(-np.abs(theta)))

    def _mean_raw(self, theta):
        return expit(theta)

    def _var_raw(self, theta):
        p = expit(theta)
        return p * (1.0 - p)

    def _link_raw(self, mu):
        return logit(mu)

    def _check_mean_range(self, mu):
        if np.any(mu <= 0.0) or np.any(mu >= 1.0):
            raise BoundaryError(
                "bernoulli: mean must lie strictly inside (0, 1)"
            )

    def validate_response(self, y):
        arr = np.asarray(y, dtype=np.float64)
        if not np.all((arr == 0.0) | (arr == 1.0)):
            raise SupportError("bernoulli: response values must be 0 or 1")

    def sample(self, theta, rng):
        theta = np.asarray(theta, dtype=np.float64)
        return (rng.random(theta.shape) < expit(theta)).astype(np.float64)


class Poisson(Family):
    """b(theta) = e^theta; log link; counts with mean e^theta."""

    name = "poisson"

    def _cumulant_raw(self, theta):
        with np.errstate(over="ignore"):
            return np.exp(theta)

    _mean_raw = _cumulant_raw
    _var_raw = _cumulant_raw

    def _link_raw(self, mu):
        return np.log(mu)

    def _check_theta(self, theta):
        arr, scalar = super()._check_theta(theta)
        if np.any(arr > POISSON_THETA_MAX):
            raise SaturationError(
                f"poisson: exp(theta) overflows for theta > {POISSON_THETA_MAX:g}"
            )
        return arr, scalar

    def _check_mean_range(self, mu):
        if np.any(mu <= 0.0):
            raise BoundaryError("poisson: mean must be strictly positive")

    def validate_response(self, y):
        arr = np.asarray(y, dtype=np.float64)
        ok = np.isfinite(arr) & (arr >= 0.0) & (arr == np.floor(arr))
        if not np.all(ok):
            raise SupportError(
                "poisson: response values must be nonnegative integers"
            )

    def sample(self, theta, rng):
        theta = np.asarray(theta, dtype=np.float64)
        with np.errstate(over="ignore"):
            lam = np.exp(theta)
        if np.any(~np.isfinite(lam)) or np.any(lam > _POISSON_SAMPLE_MEAN_MAX):
            raise SaturationError("poisson: sampling mean exp(theta) overflows")
        return rng.poisson(lam).astype(np.float64)


GAUSSIAN = Gaussian()
BERNOULLI = Bernoulli()
POISSON = Poisson()

_FAMILIES = {f.name: f for f in (GAUSSIAN, BERNOULLI, POISSON)}

FAMILY_NAMES = tuple(_FAMILIES)


def get_family(family) -> Family:
    """Resolve a family token ("gaussian" | "bernoulli" | "poisson")."""
    if isinstance(family, Family):
        return family
    if isinstance(family, str) and family.lower() in _FAMILIES:
        return _FAMILIES[family.lower()]
    raise ValueError(
        f"unknown family {family!r}; expected one of {', '.join(_FAMILIES)}"
    )
