"""Replicated simulation studies: minimum model size, eigenvalues, oracle t.

The minimum model size (MMS) of a replication is the size of the smallest
utility-threshold superset containing the whole true support; the study
summary reports its median (MMMS) and a robust spread, the interquartile
range divided by 1.34 (RSD). Quartiles are linearly interpolated at positions
0.25*(m-1) and 0.75*(m-1) of the sorted sample.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np
from joblib import Parallel, delayed

from .datagen import SimSetting, derive_seed, generate_covariates, gen_response
from .exceptions import ConvergenceError, GlmScreenError
from .families import get_family
from .marginal import FitOptions, _null_negloglik, _pull_inside
from .screening import compute_screening

ORACLE_MAX_SUPPORT = 24


@dataclass(frozen=True)
class StudyRecord:
    """One replication of one screening method."""

    replication: int
    method: str
    mms: int
    runtime_ms: int


@dataclass(frozen=True)
class StudySummary:
    """Aggregated study outcome for one method."""

    method: str
    mmms: float
    rsd: float
    n_reps: int
    n_skipped: int
    setting: SimSetting


def minimum_model_size(utilities, true_set) -> int:
    """Smallest threshold-selected superset of the true support.

    Equals the rank of the worst true feature when utilities are distinct;
    exact ties are counted conservatively (every tied feature is included).
    """
    u = np.asarray(utilities, dtype=np.float64)
    idx = np.fromiter((int(j) for j in true_set), dtype=np.int64)
    if idx.size == 0:
        raise ValueError("true_set must be non-empty")
    if idx.min() < 0 or idx.max() >= u.shape[0]:
        raise ValueError("true_set contains out-of-range indices")
    return int(np.count_nonzero(u >= u[idx].min()))


def median_and_rsd(values):
    """Median and IQR/1.34 under the pinned interpolation convention."""
    v = np.asarray(values, dtype=np.float64)
    if v.size == 0:
        raise ValueError("values must be non-empty")
    q25, q75 = np.percentile(v, [25.0, 75.0])  # linear interpolation
    return float(np.median(v)), float((q75 - q25) / 1.34)


def max_eigen_sample_cov(X) -> float:
    """Largest eigenvalue of the sample covariance (divisor n-1).

    When p > n the spectrum is taken from the n x n Gram matrix of centered
    rows, whose nonzero eigenvalues coincide with those of the p x p
    covariance; either way a dense symmetric eigensolver does the extraction.
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 2:
        raise ValueError("X must be 2-d with at least 2 rows")
    n, p = X.shape
    Z = X - X.mean(axis=0)
    M = Z @ Z.T if p > n else Z.T @ Z
    M = (M + M.T) / (2.0 * (n - 1))
    return float(np.linalg.eigvalsh(M)[-1])


def _fit_glm(D, y, family, opts: FitOptions):
    """Damped Newton for the full (intercept + slopes) GLM.

    Same stepping policy as the marginal solver: Newton direction from the
    observed information, step halved until the objective does not increase,
    iterates clamped into the parameter box coordinatewise.
    """
    n, m = D.shape
    bound = float(opts.param_bound)
    ybar = float(y.mean())
    beta = np.zeros(m)
    beta[0] = min(max(float(family.link(_pull_inside(family, ybar))), -bound), bound)
    nll = _null_negloglik(family, beta[0], ybar)

    for step in range(opts.max_iter + 1):
        theta = D @ beta
        mu = family._mean_raw(theta)
        grad = D.T @ (mu - y) / n
        if np.max(np.abs(grad)) <= opts.grad_tol:
            return beta, nll, True, step
        if step == opts.max_iter:
            break
        w = family._var_raw(theta)
        H = D.T @ (D * w[:, None]) / n
        try:
            direction = np.linalg.solve(H, -grad)
        except np.linalg.LinAlgError:
            direction = -grad
        if not np.all(np.isfinite(direction)):
            direction = -grad
        scale = 1.0
        accepted = False
        for _ in range(opts.step_halvings + 1):
            cand = np.clip(beta + scale * direction, -bound, bound)
            theta_c = cand[0] + D[:, 1:] @ cand[1:]
            with np.errstate(over="ignore", invalid="ignore"):
                obj = float(np.mean(family._cumulant_raw(theta_c) - y * theta_c))
            if obj <= nll:
                beta, nll, accepted = cand, obj, True
                break
            scale *= 0.5
        if not accepted:
            return beta, nll, False, step + 1
    return beta, nll, False, opts.max_iter


def oracle_min_tstat(X_true, y, family, options: FitOptions | None = None) -> float:
    """Minimum |t| over the slopes of the GLM fitted on the true support.

    Standard errors come from the inverse observed information at the
    optimum (dispersion fixed at 1). Raises
    :class:`~glmscreen.exceptions.ConvergenceError` when the fit does not
    converge or the information matrix is singular, so a study can count and
    exclude the replication.
    """
    family = get_family(family)
    opts = options or FitOptions()
    X_true = np.asarray(X_true, dtype=np.float64)
    if X_true.ndim != 2 or X_true.shape[1] < 1:
        raise ValueError("X_true must be 2-d with at least one column")
    if X_true.shape[1] > ORACLE_MAX_SUPPORT:
        raise ValueError(f"oracle fit supports at most {ORACLE_MAX_SUPPORT} slopes")
    y = np.asarray(y, dtype=np.float64)
    family.validate_response(y)
    D = np.column_stack([np.ones(X_true.shape[0]), X_true])
    beta, _, converged, _ = _fit_glm(D, y, family, opts)
    if not converged:
        raise ConvergenceError("oracle GLM fit did not converge")
    w = family._var_raw(D @ beta)
    info = D.T @ (D * w[:, None])
    try:
        cov = np.linalg.inv(info)
    except np.linalg.LinAlgError:
        raise ConvergenceError("oracle information matrix is singular") from None
    se = np.sqrt(np.diag(cov))[1:]
    with np.errstate(divide="ignore", invalid="ignore"):
        tstats = np.abs(beta[1:] / se)
    if not np.all(np.isfinite(tstats)):
        raise ConvergenceError("oracle t-statistics are not finite")
    return float(tstats.min())


def _run_replications(n_reps, n_jobs, worker, sink=None):
    """Run worker(r) for each replication, optionally streaming results."""
    if n_reps < 1:
        raise ValueError("n_reps must be at least 1")
    if n_jobs in (None, 0, 1):
        results = map(worker, range(n_reps))
    else:
        results = Parallel(n_jobs=n_jobs, return_as="generator")(
            delayed(worker)(r) for r in range(n_reps)
        )
    collected = []
    for res in results:
        if sink is not None:
            sink(res)
        collected.append(res)
    return collected


def run_study(
    setting: SimSetting,
    n_reps: int,
    methods=("mmle", "mlr"),
    base_seed: int | None = None,
    n_jobs: int | None = None,
    options: FitOptions | None = None,
    standardize: bool = True,
    sink=None,
):
    """Replicate the screening study and summarize MMS per method.

    Every replication generates fresh data from its derived seed,
    standardizes, fits all marginals once, and scores both utilities from the
    same fit vector. Failed replications (degenerate responses, say) are
    counted and excluded, never silently dropped or retried.

    Returns ``(records, summaries)`` where records is the canonically ordered
    list of :class:`StudyRecord` and summaries maps method ->
    :class:`StudySummary`. ``sink``, when given, receives each replication's
    record list as it completes.
    """
    methods = tuple(methods)
    seed = setting.seed if base_seed is None else int(base_seed)
    true_set = setting.true_support()
    if not true_set:
        raise ValueError("the setting has an empty true support")

    def one_rep(r):
        rng = np.random.default_rng(derive_seed(seed, r))
        try:
            X = generate_covariates(setting, rng)
            y = gen_response(X, setting.beta_star(), setting.family, rng)
            start = time.perf_counter()
            results = compute_screening(
                X,
                y,
                setting.family,
                methods=methods,
                options=options,
                standardize=standardize,
            )
            elapsed_ms = int(round((time.perf_counter() - start) * 1000))
            return [
                StudyRecord(
                    replication=r,
                    method=m,
                    mms=minimum_model_size(results[m].utilities, true_set),
                    runtime_ms=elapsed_ms,
                )
                for m in methods
            ]
        except GlmScreenError as exc:
            return (r, str(exc))

    outcomes = _run_replications(n_reps, n_jobs, one_rep, sink=sink)
    records = []
    skipped = []
    for out in outcomes:
        if isinstance(out, tuple):
            skipped.append(out)
        else:
            records.extend(out)
    records.sort(key=lambda rec: (rec.replication, rec.method))

    summaries = {}
    for m in methods:
        mms = [rec.mms for rec in records if rec.method == m]
        if not mms:
            raise ConvergenceError("every replication failed")
        mmms, rsd = median_and_rsd(mms)
        summaries[m] = StudySummary(
            method=m,
            mmms=mmms,
            rsd=rsd,
            n_reps=len(mms),
            n_skipped=len(skipped),
            setting=setting,
        )
    return records, summaries


def run_eigen_study(
    setting: SimSetting,
    n_reps: int,
    base_seed: int | None = None,
    n_jobs: int | None = None,
    sink=None,
):
    """Largest sample-covariance eigenvalue per replication, plus median/RSD."""
    seed = setting.seed if base_seed is None else int(base_seed)

    def one_rep(r):
        rng = np.random.default_rng(derive_seed(seed, r))
        return (r, max_eigen_sample_cov(generate_covariates(setting, rng)))

    records = _run_replications(n_reps, n_jobs, one_rep, sink=sink)
    records.sort(key=lambda rec: rec[0])
    median, rsd = median_and_rsd([lam for _, lam in records])
    return records, (median, rsd)


def run_tstat_study(
    setting: SimSetting,
    n_reps: int,
    base_seed: int | None = None,
    n_jobs: int | None = None,
    options: FitOptions | None = None,
    sink=None,
):
    """Oracle minimum |t| per replication.

    Returns ``(records, (median, rsd), n_failed)``; replications whose oracle
    fit fails are excluded from the records and counted.
    """
    seed = setting.seed if base_seed is None else int(base_seed)
    if setting.s < 1:
        raise ValueError("the setting has an empty true support")

    def one_rep(r):
        rng = np.random.default_rng(derive_seed(seed, r))
        X = generate_covariates(setting, rng)
        y = gen_response(X, setting.beta_star(), setting.family, rng)
        try:
            return (r, oracle_min_tstat(X[:, : setting.s], y, setting.family, options))
        except GlmScreenError as exc:
            return (r, str(exc))

    outcomes = _run_replications(n_reps, n_jobs, one_rep, sink=sink)
    records = [out for out in outcomes if isinstance(out[1], float)]
    records.sort(key=lambda rec: rec[0])
    n_failed = len(outcomes) - len(records)
    if not records:
        raise ConvergenceError("every oracle fit failed")
    median, rsd = median_and_rsd([t for _, t in records])
    return records, (median, rsd), n_failed
