"""Screening utilities, rankings and selection rules.

Two utilities are supported: the magnitude of the maximum marginal likelihood
estimate (``mmle``) and the marginal likelihood-ratio increment (``mlr``),
the drop in empirical negative log-likelihood from the intercept-only model
to the one-feature marginal model. Both are computed from one shared batch of
marginal fits.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import spearmanr

from .exceptions import DegenerateFeatureError
from .families import get_family
from .marginal import (
    FitOptions,
    MarginalFitBatch,
    fit_marginal_all,
    intercept_neg_loglik,
)

METHODS = ("mmle", "mlr")


@dataclass(frozen=True)
class StandardizationRecord:
    """Per-column location/scale removed by :func:`standardize_columns`."""

    mean: np.ndarray
    scale: np.ndarray

    def inverse(self, X):
        return np.asarray(X, dtype=np.float64) * self.scale + self.mean


def standardize_columns(X):
    """Center columns to mean zero and rescale to empirical second moment one.

    The scale uses divisor n (matching the population convention E X^2 = 1),
    not n-1. Returns the transformed matrix and the record needed to invert
    the transformation.
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError("X must be a 2-d array")
    mean = X.mean(axis=0)
    centered = X - mean
    scale = np.sqrt(np.einsum("ij,ij->j", centered, centered) / X.shape[0])
    degenerate = np.flatnonzero(scale == 0.0)
    if degenerate.size:
        raise DegenerateFeatureError(
            f"column {int(degenerate[0])} is constant and cannot be standardized"
        )
    return centered / scale, StandardizationRecord(mean=mean, scale=scale)


def _standardize_keeping_constants(X):
    """Standardize non-constant columns, pass constant ones through.

    Screening must survive a dead column: the constant columns are flagged
    later by the fitting batch, so they are left untouched here.
    """
    X = np.asarray(X, dtype=np.float64)
    mean = X.mean(axis=0)
    centered = X - mean
    scale = np.sqrt(np.einsum("ij,ij->j", centered, centered) / X.shape[0])
    constant = scale == 0.0
    if not constant.any():
        return centered / scale
    out = np.where(constant, X, centered / np.where(constant, 1.0, scale))
    return out


def _fit_arrays(fits):
    if isinstance(fits, MarginalFitBatch):
        return fits
    fits = list(fits)
    if not fits:
        raise ValueError("fits must be non-empty")
    return MarginalFitBatch(
        beta0=np.array([f.beta0 for f in fits]),
        beta=np.array([f.beta for f in fits]),
        neg_loglik=np.array([f.neg_loglik for f in fits]),
        converged=np.array([f.converged for f in fits], dtype=bool),
        hit_bound=np.array([f.hit_bound for f in fits], dtype=bool),
        iterations=np.array([f.iterations for f in fits], dtype=np.int64),
    )


def mmle_utilities(fits) -> np.ndarray:
    """|slope| per feature. Flagged fits contribute their clamped magnitude."""
    batch = _fit_arrays(fits)
    if len(batch) == 0:
        raise ValueError("fits must be non-empty")
    return np.abs(batch.beta)


def mlr_utilities(fits, intercept_negloglik: float) -> np.ndarray:
    """Likelihood-ratio increment per feature, floored at zero.

    ``intercept_negloglik`` must be the empirical neg-loglik of the fitted
    intercept-only model on the same response (see
    :func:`~glmscreen.marginal.intercept_neg_loglik`). Each increment is
    nonnegative up to round-off because the intercept-only model is feasible
    in the two-parameter family.
    """
    batch = _fit_arrays(fits)
    if len(batch) == 0:
        raise ValueError("fits must be non-empty")
    return np.maximum(intercept_negloglik - batch.neg_loglik, 0.0)


def rank_features(utilities) -> np.ndarray:
    """Feature indices in descending utility; ties broken by ascending index."""
    u = np.asarray(utilities, dtype=np.float64)
    return np.argsort(-u, kind="stable")


@dataclass(frozen=True)
class ScreeningResult:
    """Per-feature utilities with their deterministic descending ranking."""

    utilities: np.ndarray
    ranking: np.ndarray
    method: str
    flagged: frozenset = field(default_factory=frozenset)

    @classmethod
    def from_utilities(cls, utilities, method, flagged=frozenset()):
        u = np.asarray(utilities, dtype=np.float64)
        return cls(
            utilities=u,
            ranking=rank_features(u),
            method=method,
            flagged=frozenset(int(j) for j in flagged),
        )

    @property
    def n_features(self) -> int:
        return int(self.utilities.shape[0])

    def rows(self, feature_names=None):
        """(feature_id, name, utility, rank, flagged) tuples in rank order."""
        names = feature_names
        for rank, j in enumerate(self.ranking, start=1):
            j = int(j)
            name = names[j] if names is not None else f"x{j + 1}"
            yield j, name, float(self.utilities[j]), rank, j in self.flagged

    def to_csv(self, path, feature_names=None):
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["feature_id", "feature", "utility", "rank", "flagged"])
            for row in self.rows(feature_names):
                writer.writerow([row[0], row[1], repr(row[2]), row[3], int(row[4])])

    def to_jsonl(self, path, feature_names=None):
        with open(path, "w") as fh:
            for j, name, utility, rank, flag in self.rows(feature_names):
                fh.write(
                    json.dumps(
                        {
                            "feature_id": j,
                            "feature": name,
                            "utility": utility,
                            "rank": rank,
                            "flagged": flag,
                        }
                    )
                    + "\n"
                )


def select_by_threshold(result: ScreeningResult, gamma: float) -> set:
    """Features whose utility reaches the threshold gamma."""
    if gamma < 0:
        raise ValueError("gamma must be nonnegative")
    return set(int(j) for j in np.flatnonzero(result.utilities >= gamma))


def select_top_d(result: ScreeningResult, d: int) -> set:
    """The d best-ranked features."""
    p = result.n_features
    if not 1 <= d <= p:
        raise ValueError(f"d must be in [1, {p}], got {d}")
    return set(int(j) for j in result.ranking[:d])


def default_top_d(n: int) -> int:
    """Default selection size ceil(n / log n)."""
    if n < 2:
        raise ValueError("need at least 2 observations")
    return int(math.ceil(n / math.log(n)))


def rank_agreement(utilities_a, utilities_b) -> float:
    """Spearman rank correlation between two utility vectors.

    Reported as a finite-sample diagnostic of how closely the two screening
    methods agree; their theoretical equivalence is only asymptotic, so this
    is never asserted against a constant.
    """
    rho = spearmanr(np.asarray(utilities_a), np.asarray(utilities_b)).statistic
    return float(rho)


def compute_screening(
    X,
    y,
    family,
    methods=METHODS,
    options: FitOptions | None = None,
    standardize: bool = True,
    n_jobs: int | None = None,
):
    """Run the shared fit pass and build one ScreeningResult per method.

    Returns ``{method: ScreeningResult}``. Columns are standardized first by
    default (comparability of slope magnitudes across features presumes
    unit-variance covariates); constant columns survive as flagged entries
    with utility zero.
    """
    family = get_family(family)
    methods = tuple(methods)
    for m in methods:
        if m not in METHODS:
            raise ValueError(f"unknown method {m!r}; expected one of {METHODS}")
    X = np.asarray(X, dtype=np.float64)
    if standardize:
        X = _standardize_keeping_constants(X)
    fits = fit_marginal_all(X, y, family, options=options, n_jobs=n_jobs)
    flagged = frozenset(int(j) for j in np.flatnonzero(~fits.converged))
    out = {}
    for m in methods:
        if m == "mmle":
            u = mmle_utilities(fits)
        else:
            u = mlr_utilities(fits, intercept_neg_loglik(y, family))
        out[m] = ScreeningResult.from_utilities(u, m, flagged)
    return out
