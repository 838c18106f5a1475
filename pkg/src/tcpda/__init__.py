"""Target contrastive pessimistic discriminant analysis.

Adapts an LDA/QDA classifier trained on a labelled source domain to a set of
unlabelled target samples, never doing worse than the source model in
regularized empirical target risk.
"""

from .da import DAParams, estimate, posterior, predict, regularized_risk, risk
from .exceptions import (
    ConfigurationError,
    DivergedOptimizationError,
    EstimationError,
    IngestionError,
    InvalidInputError,
    TCPError,
    UndefinedMetricError,
)
from .gaussian import ClassParams, log_density, regularize_covariance
from .simplex import project, project_rows
from .tcp import TCPConfig, TCPResult, fit, grad_q, tcp_risk, worst_case_risk

__version__ = "0.1.0"
