"""Bayes and minimax point estimation for multinomial parameters under
Bhattacharyya losses (1 - B and 1 - B^2)."""

from .errors import (
    DimensionMismatch,
    EigenConvergenceError,
    EstimationError,
    NumericError,
    OptimizationError,
    UndefinedRatioError,
    ValidationError,
)
from .simplex import LossKind, ProbVector, bhattacharyya, loss
from .posterior import (
    DirichletPosterior,
    MomentMatrix,
    ParticlePosterior,
    Posterior,
    moment_matrix,
    posterior_mean,
    posterior_update,
    sqrt_moment_vector,
)
from .eigen import jacobi_eigensystem, top_eigenpair
from .estimators import EstimatorKind, EstimatorTable, bayes_b1, bayes_b2, estimator_table, mle
from .risk import (
    DiscretePrior,
    RiskReport,
    bayes_risk,
    max_risk,
    max_risk_report,
    multinomial_pointwise_risk,
    pointwise_risk,
    posterior_risk,
    relative_suboptimality,
)
from .minimax import (
    KempthorneConfig,
    KempthorneResult,
    bayes_estimator_for_discrete_prior,
    beta_scan,
    default_initial_prior,
    kempthorne,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "LossKind",
    "ProbVector",
    "bhattacharyya",
    "loss",
    "DirichletPosterior",
    "ParticlePosterior",
    "Posterior",
    "MomentMatrix",
    "sqrt_moment_vector",
    "moment_matrix",
    "posterior_mean",
    "posterior_update",
    "jacobi_eigensystem",
    "top_eigenpair",
    "EstimatorKind",
    "EstimatorTable",
    "bayes_b1",
    "bayes_b2",
    "mle",
    "estimator_table",
    "DiscretePrior",
    "RiskReport",
    "pointwise_risk",
    "posterior_risk",
    "bayes_risk",
    "max_risk",
    "max_risk_report",
    "relative_suboptimality",
    "multinomial_pointwise_risk",
    "KempthorneConfig",
    "KempthorneResult",
    "beta_scan",
    "bayes_estimator_for_discrete_prior",
    "default_initial_prior",
    "kempthorne",
    "EstimationError",
    "ValidationError",
    "DimensionMismatch",
    "NumericError",
    "EigenConvergenceError",
    "OptimizationError",
    "UndefinedRatioError",
]
