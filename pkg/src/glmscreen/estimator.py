"""scikit-learn front end: marginal screening as a feature selector."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.feature_selection import SelectorMixin
from sklearn.utils.validation import check_is_fitted, validate_data

from .marginal import FitOptions
from .screening import (
    METHODS,
    compute_screening,
    default_top_d,
    select_by_threshold,
    select_top_d,
)


class MarginalScreener(SelectorMixin, BaseEstimator):
    """Select features by ranking componentwise GLM fits.

    Every feature is regressed marginally (intercept plus one slope) on the
    response; features are ranked by the chosen utility and the top ``d`` are
    kept, or those at or above ``threshold`` when one is given. With the
    default ``d=None`` the selection size is ``ceil(n / log n)``.

    Parameters
    ----------
    family : str, default="gaussian"
        Response family: "gaussian", "bernoulli" or "poisson".
    method : str, default="mmle"
        "mmle" ranks by |marginal slope|, "mlr" by the likelihood-ratio
        increment over the intercept-only model.
    d : int, optional
        Number of features to keep. Mutually exclusive with ``threshold``.
    threshold : float, optional
        Keep features whose utility is at least this value.
    standardize : bool, default=True
        Standardize columns (mean 0, second moment 1) before fitting.
    grad_tol, max_iter, param_bound : solver options, see
        :class:`~glmscreen.marginal.FitOptions`.
    n_jobs : int, optional
        Worker count for the column fits (joblib semantics).

    Attributes
    ----------
    utilities_ : ndarray of shape (n_features,)
    ranking_ : ndarray of shape (n_features,)
        Feature indices in descending utility, ties by ascending index.
    flagged_ : frozenset of int
        Columns whose marginal fit did not converge.
    support_mask_ : ndarray of bool, shape (n_features,)

    Examples
    --------
    >>> import numpy as np
    >>> rng = np.random.default_rng(0)
    >>> X = rng.standard_normal((100, 20))
    >>> y = X[:, 3] + 0.1 * rng.standard_normal(100)
    >>> sel = MarginalScreener(d=1).fit(X, y)
    >>> int(np.flatnonzero(sel.get_support())[0])
    3
    """

    def __init__(
        self,
        family="gaussian",
        method="mmle",
        d=None,
        threshold=None,
        standardize=True,
        grad_tol=1e-8,
        max_iter=100,
        param_bound=1e4,
        n_jobs=None,
    ):
        self.family = family
        self.method = method
        self.d = d
        self.threshold = threshold
        self.standardize = standardize
        self.grad_tol = grad_tol
        self.max_iter = max_iter
        self.param_bound = param_bound
        self.n_jobs = n_jobs

    def fit(self, X, y):
        """Fit all marginal regressions and freeze the selected support."""
        X, y = validate_data(
            self, X, y, dtype=np.float64, y_numeric=True, ensure_min_samples=2
        )
        if self.method not in METHODS:
            raise ValueError(
                f"method must be one of {METHODS}, got {self.method!r}"
            )
        if self.d is not None and self.threshold is not None:
            raise ValueError("specify either d or threshold, not both")
        options = FitOptions(
            grad_tol=self.grad_tol,
            max_iter=self.max_iter,
            param_bound=self.param_bound,
        )
        result = compute_screening(
            X,
            y,
            self.family,
            methods=(self.method,),
            options=options,
            standardize=self.standardize,
            n_jobs=self.n_jobs,
        )[self.method]

        n, p = X.shape
        if self.threshold is not None:
            selected = select_by_threshold(result, self.threshold)
        else:
            d = self.d if self.d is not None else min(p, default_top_d(n))
            selected = select_top_d(result, d)

        self.utilities_ = result.utilities
        self.ranking_ = result.ranking
        self.flagged_ = result.flagged
        mask = np.zeros(p, dtype=bool)
        mask[sorted(selected)] = True
        self.support_mask_ = mask
        self.n_selected_ = int(mask.sum())
        return self

    def _get_support_mask(self):
        check_is_fitted(self)
        return self.support_mask_
