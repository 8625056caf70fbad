"""Marginal screening for generalized linear models at extreme dimension.

Rank features by maximum marginal likelihood estimates or by marginal
likelihood-ratio increments, select the leading set, and reproduce the
accompanying simulation benchmarks (MMMS/RSD tables, covariance eigenvalue
study, oracle t-statistics).
"""

from .benchmark import (
    StudyRecord,
    StudySummary,
    max_eigen_sample_cov,
    median_and_rsd,
    minimum_model_size,
    oracle_min_tstat,
    run_eigen_study,
    run_study,
    run_tstat_study,
)
from .datagen import (
    SimSetting,
    beta_pattern,
    derive_seed,
    gen_response,
    gen_s1,
    gen_s2,
    gen_s3,
    generate_covariates,
    generate_dataset,
)
from .estimator import MarginalScreener
from .exceptions import (
    BoundaryError,
    ConvergenceError,
    DataFileError,
    DegenerateFeatureError,
    GlmScreenError,
    SaturationError,
    SupportError,
)
from .families import BERNOULLI, GAUSSIAN, POISSON, Family, get_family
from .marginal import (
    FitOptions,
    MarginalFit,
    MarginalFitBatch,
    fit_intercept,
    fit_marginal,
    fit_marginal_all,
    intercept_neg_loglik,
)
from .scenarios import REGISTRY, Scenario, get_scenario, scenario_names
from .screening import (
    ScreeningResult,
    StandardizationRecord,
    compute_screening,
    default_top_d,
    mlr_utilities,
    mmle_utilities,
    rank_agreement,
    rank_features,
    select_by_threshold,
    select_top_d,
    standardize_columns,
)

__version__ = "0.1.0"

__all__ = [
    "BERNOULLI",
    "BoundaryError",
    "ConvergenceError",
    "DataFileError",
    "DegenerateFeatureError",
    "Family",
    "FitOptions",
    "GAUSSIAN",
    "GlmScreenError",
    "MarginalFit",
    "MarginalFitBatch",
    "MarginalScreener",
    "POISSON",
    "REGISTRY",
    "SaturationError",
    "Scenario",
    "ScreeningResult",
    "SimSetting",
    "StandardizationRecord",
    "StudyRecord",
    "StudySummary",
    "SupportError",
    "beta_pattern",
    "compute_screening",
    "default_top_d",
    "derive_seed",
    "fit_intercept",
    "fit_marginal",
    "fit_marginal_all",
    "gen_response",
    "gen_s1",
    "gen_s2",
    "gen_s3",
    "generate_covariates",
    "generate_dataset",
    "get_family",
    "get_scenario",
    "intercept_neg_loglik",
    "max_eigen_sample_cov",
    "median_and_rsd",
    "minimum_model_size",
    "mlr_utilities",
    "mmle_utilities",
    "oracle_min_tstat",
    "rank_agreement",
    "rank_features",
    "run_eigen_study",
    "run_study",
    "run_tstat_study",
    "scenario_names",
    "select_by_threshold",
    "select_top_d",
    "standardize_columns",
]
