"""Componentwise GLM fits by damped Newton iteration.

For every feature j the screener needs the minimizer of the two-parameter
empirical negative log-likelihood

    Q_j(b0, b) = (1/n) * sum_i [ b(b0 + b*x_ij) - y_i * (b0 + b*x_ij) ].

The p problems are independent, so the solver runs them jointly, one feature
per row of a feature-major matrix, with per-feature convergence masks. Every
reduction over observations is then a contiguous 1-d einsum along a row,
which uses the same accumulation order no matter how many features sit in the
batch; a feature therefore follows bitwise the same trajectory whether fitted
alone, in a block, or under any worker count.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from joblib import Parallel, delayed

from .exceptions import DegenerateFeatureError
from .families import Family, get_family

# Features are fitted in blocks of at most this many rows to bound the size
# of the (width, n) temporaries. Results do not depend on the blocking.
_BLOCK_COLS = 8192

# How far the starting mean is pulled inside the boundary when the sample
# average sits on it (all-zero Bernoulli response, say).
_MEAN_MARGIN = 1e-6


@dataclass(frozen=True)
class FitOptions:
    """Knobs of the damped Newton solver.

    ``param_bound`` is a divergence guard, not a tuning knob: iterates are
    clamped into the square [-B, B]^2 and ``hit_bound`` reports when the clamp
    is active at termination (complete separation drives logistic slopes to
    infinity otherwise).
    """

    grad_tol: float = 1e-8
    max_iter: int = 100
    param_bound: float = 1e4
    step_halvings: int = 30
    force_iterative: bool = False  # skip the Gaussian closed form (validation hook)

    def __post_init__(self):
        if not self.grad_tol > 0:
            raise ValueError("grad_tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if not self.param_bound > 0:
            raise ValueError("param_bound must be positive")
        if self.step_halvings < 0:
            raise ValueError("step_halvings must be nonnegative")


@dataclass(frozen=True)
class MarginalFit:
    """Fitted intercept and slope of one componentwise regression."""

    beta0: float
    beta: float
    neg_loglik: float
    converged: bool
    hit_bound: bool
    iterations: int


@dataclass(frozen=True)
class MarginalFitBatch:
    """Column-aligned arrays of marginal fits (one entry per feature)."""

    beta0: np.ndarray
    beta: np.ndarray
    neg_loglik: np.ndarray
    converged: np.ndarray
    hit_bound: np.ndarray
    iterations: np.ndarray

    def __len__(self):
        return self.beta.shape[0]

    def __getitem__(self, j) -> MarginalFit:
        return MarginalFit(
            beta0=float(self.beta0[j]),
            beta=float(self.beta[j]),
            neg_loglik=float(self.neg_loglik[j]),
            converged=bool(self.converged[j]),
            hit_bound=bool(self.hit_bound[j]),
            iterations=int(self.iterations[j]),
        )

    def __iter__(self):
        return (self[j] for j in range(len(self)))


def _pull_inside(family: Family, ybar: float) -> float:
    """Nudge a sample mean strictly inside the range of b'."""
    if family.name == "bernoulli":
        return min(max(ybar, _MEAN_MARGIN), 1.0 - _MEAN_MARGIN)
    if family.name == "poisson":
        return max(ybar, _MEAN_MARGIN)
    return ybar


def _null_negloglik(family: Family, theta0: float, ybar: float) -> float:
    """Empirical neg-loglik of the constant model theta == theta0."""
    return float(family._cumulant_raw(np.float64(theta0)) - ybar * theta0)


def fit_intercept(y, family) -> float:
    """Exact minimizer of the intercept-only model: the canonical link of ybar.

    Raises :class:`~glmscreen.exceptions.BoundaryError` when the sample mean
    sits on the boundary of the mean range (an all-zero or all-one Bernoulli
    response, an all-zero Poisson response).
    """
    family = get_family(family)
    y = np.asarray(y, dtype=np.float64)
    if y.ndim != 1 or y.size == 0:
        raise ValueError("y must be a non-empty vector")
    family.validate_response(y)
    return float(family.link(float(y.mean())))


def intercept_neg_loglik(y, family) -> float:
    """Empirical neg-loglik of the fitted intercept-only model."""
    family = get_family(family)
    beta0 = fit_intercept(y, family)
    ybar = float(np.asarray(y, dtype=np.float64).mean())
    return _null_negloglik(family, beta0, ybar)


def _row_objective(family, theta, y, n):
    """Per-feature empirical neg-loglik; overflow saturates to +inf.

    ``theta`` is feature-major (one row per feature), so the reduction over
    observations is a contiguous 1-d sum along each row.
    """
    with np.errstate(over="ignore", invalid="ignore"):
        vals = family._cumulant_raw(theta) - y * theta
        return np.einsum("ij->i", vals) / n


def _fit_block_gaussian(XT, y, bound):
    """Closed-form simple least squares, one feature per row of XT."""
    k, n = XT.shape
    ybar = float(y.mean())
    sx = np.einsum("ij->i", XT) / n
    sxx = np.einsum("ij,ij->i", XT, XT) / n
    sxy = np.einsum("ij,j->i", XT, y) / n
    slope = (sxy - sx * ybar) / (sxx - sx * sx)
    inter = ybar - slope * sx
    slope_c = np.clip(slope, -bound, bound)
    inter_c = np.clip(inter, -bound, bound)
    hit = (slope_c != slope) | (inter_c != inter)
    theta = inter_c[:, None] + XT * slope_c[:, None]
    nll = np.einsum("ij->i", 0.5 * theta * theta - y * theta) / n
    return inter_c, slope_c, nll, ~hit, hit, np.zeros(k, dtype=np.int64)


def _fit_block_newton(XT, y, family, opts):
    """Damped Newton on every row (feature) of XT jointly.

    Features are deactivated as soon as the gradient inf-norm drops below
    ``grad_tol``; each step solves the per-feature 2x2 system with the
    observed information and is halved until the objective does not increase,
    with the trial point clamped into the parameter box first.
    """
    k, n = XT.shape
    bound = float(opts.param_bound)
    tol = float(opts.grad_tol)
    ybar = float(y.mean())
    theta0 = min(max(float(family.link(_pull_inside(family, ybar))), -bound), bound)

    beta0 = np.full(k, theta0)
    beta = np.zeros(k)
    nll = np.full(k, _null_negloglik(family, theta0, ybar))
    converged = np.zeros(k, dtype=bool)
    iters = np.zeros(k, dtype=np.int64)
    active = np.arange(k)

    for step in range(opts.max_iter + 1):
        Xa = XT[active]
        theta = beta0[active, None] + Xa * beta[active, None]
        mu = family._mean_raw(theta)
        resid = mu - y
        g0 = np.einsum("ij->i", resid) / n
        g1 = np.einsum("ij,ij->i", resid, Xa) / n
        done = np.maximum(np.abs(g0), np.abs(g1)) <= tol
        if done.any():
            converged[active[done]] = True
            keep = ~done
            active = active[keep]
            if active.size == 0:
                break
            Xa = Xa[keep]
            theta = theta[keep]
            g0 = g0[keep]
            g1 = g1[keep]
        if step == opts.max_iter:
            break  # leftovers keep converged=False

        w = family._var_raw(theta)
        h00 = np.einsum("ij->i", w) / n
        h01 = np.einsum("ij,ij->i", w, Xa) / n
        h11 = np.einsum("ij,ij,ij->i", w, Xa, Xa) / n
        det = h00 * h11 - h01 * h01
        with np.errstate(divide="ignore", invalid="ignore"):
            d0 = (h01 * g1 - h11 * g0) / det
            d1 = (h01 * g0 - h00 * g1) / det
        singular = ~(np.isfinite(d0) & np.isfinite(d1))
        if singular.any():
            d0[singular] = -g0[singular]
            d1[singular] = -g1[singular]

        m = active.size
        cur_obj = nll[active]
        new0 = beta0[active].copy()
        new1 = beta[active].copy()
        new_obj = cur_obj.copy()
        accepted = np.zeros(m, dtype=bool)
        todo = np.arange(m)
        scale = 1.0
        for _ in range(opts.step_halvings + 1):
            t0 = np.clip(new0[todo] + scale * d0[todo], -bound, bound)
            t1 = np.clip(new1[todo] + scale * d1[todo], -bound, bound)
            obj = _row_objective(family, t0[:, None] + Xa[todo] * t1[:, None], y, n)
            ok = obj <= cur_obj[todo]
            if ok.any():
                hit_rows = todo[ok]
                new0[hit_rows] = t0[ok]
                new1[hit_rows] = t1[ok]
                new_obj[hit_rows] = obj[ok]
                accepted[hit_rows] = True
                todo = todo[~ok]
            if todo.size == 0:
                break
            scale *= 0.5
        iters[active] += 1
        beta0[active] = new0
        beta[active] = new1
        nll[active] = new_obj
        if not accepted.all():
            # no non-increasing step exists at float precision: stop, flagged
            active = active[accepted]
            if active.size == 0:
                break

    hit_bound = (np.abs(beta0) >= bound) | (np.abs(beta) >= bound)
    return beta0, beta, nll, converged, hit_bound, iters


def _fit_block(XT, y, family, opts):
    XT = np.ascontiguousarray(XT)
    if family.name == "gaussian" and not opts.force_iterative:
        return _fit_block_gaussian(XT, y, opts.param_bound)
    return _fit_block_newton(XT, y, family, opts)


def _validate_xy(X, y, family):
    X = np.ascontiguousarray(np.asarray(X, dtype=np.float64))
    y = np.asarray(y, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError("X must be a 2-d array")
    if y.ndim != 1:
        raise ValueError("y must be a 1-d array")
    if X.shape[0] != y.shape[0]:
        raise ValueError(
            f"X has {X.shape[0]} rows but y has {y.shape[0]} entries"
        )
    if X.shape[0] < 2:
        raise ValueError("need at least 2 observations")
    if not np.all(np.isfinite(X)):
        raise ValueError("X must be finite")
    family.validate_response(y)
    return X, y


def fit_marginal(x, y, family, options: FitOptions | None = None) -> MarginalFit:
    """Fit the two-parameter componentwise regression of y on one feature.

    The Gaussian family short-circuits to the closed-form least-squares
    solution; the other families run damped Newton from the intercept-only
    optimum ``(link(ybar), 0)``.

    Parameters
    ----------
    x : array_like, shape (n,)
        Feature column. Must not be constant.
    y : array_like, shape (n,)
        Response, inside the family's support.
    family : str or Family
        "gaussian", "bernoulli" or "poisson".
    options : FitOptions, optional

    Returns
    -------
    MarginalFit
        Minimizer with convergence diagnostics. Non-convergence is reported
        through ``converged=False`` rather than raised: with tens of
        thousands of columns the caller decides what a flagged fit means.
    """
    family = get_family(family)
    opts = options or FitOptions()
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError("x must be a 1-d array")
    X, y = _validate_xy(x[:, None], y, family)
    if x.size and np.min(x) == np.max(x):
        raise DegenerateFeatureError("x is constant; the slope is unidentified")
    beta0, beta, nll, conv, hit, iters = _fit_block(X.T, y, family, opts)
    return MarginalFitBatch(beta0, beta, nll, conv, hit, iters)[0]


def _flagged_fit_values(family, y, bound):
    """Intercept-only placeholder used for degenerate (constant) columns."""
    ybar = float(y.mean())
    theta0 = min(max(float(family.link(_pull_inside(family, ybar))), -bound), bound)
    return theta0, _null_negloglik(family, theta0, ybar)


def fit_marginal_all(
    X,
    y,
    family,
    options: FitOptions | None = None,
    n_jobs: int | None = None,
) -> MarginalFitBatch:
    """Fit every column of X marginally against y.

    Entry j is identical (bitwise) to ``fit_marginal(X[:, j], y, ...)``.
    Constant columns do not abort the batch: they come back flagged with
    ``converged=False``, a zero slope and the intercept-only neg-loglik, so
    both screening utilities score them 0.

    ``n_jobs`` distributes column blocks over threads (joblib semantics;
    ``None`` or 1 means sequential, -1 all cores). The result does not depend
    on the worker count.
    """
    family = get_family(family)
    opts = options or FitOptions()
    X, y = _validate_xy(X, y, family)
    n, p = X.shape
    if p < 1:
        raise ValueError("X must have at least one column")

    beta0 = np.empty(p)
    beta = np.zeros(p)
    nll = np.empty(p)
    conv = np.zeros(p, dtype=bool)
    hit = np.zeros(p, dtype=bool)
    iters = np.zeros(p, dtype=np.int64)

    degenerate = X.min(axis=0) == X.max(axis=0)
    if degenerate.any():
        theta0, null_nll = _flagged_fit_values(family, y, opts.param_bound)
        beta0[degenerate] = theta0
        nll[degenerate] = null_nll

    good = np.flatnonzero(~degenerate)
    blocks = [
        good[i : i + _BLOCK_COLS] for i in range(0, good.size, _BLOCK_COLS)
    ]
    XT = np.ascontiguousarray(X.T)

    def run(cols):
        return _fit_block(XT[cols], y, family, opts)

    if n_jobs in (None, 1) or len(blocks) <= 1:
        results = [run(cols) for cols in blocks]
    else:
        results = Parallel(n_jobs=n_jobs, prefer="threads")(
            delayed(run)(cols) for cols in blocks
        )

    for cols, (b0, b1, ll, cv, hb, it) in zip(blocks, results):
        beta0[cols] = b0
        beta[cols] = b1
        nll[cols] = ll
        conv[cols] = cv
        hit[cols] = hb
        iters[cols] = it

    return MarginalFitBatch(beta0, beta, nll, conv, hit, iters)
