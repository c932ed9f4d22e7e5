"""Monte Carlo study of response-category count under the ogive graded response model."""

from .dependency import DependencyProfile, named_profile, sigma_for
from .engine import (
    CellSummary,
    ConditionCell,
    PredictorSpec,
    ReplicationResult,
    expand_grid,
    run_grid,
    run_replication,
)
from .errors import (
    ConfigError,
    DegenerateInputError,
    DuplicateCellError,
    GrmSimError,
    InvalidArgumentError,
    OutOfDomainError,
)
from .grm import (
    Item,
    ResponseMatrix,
    category_prob,
    categorize,
    icc_above,
    make_thresholds,
    sample_response_matrix,
)
from .stats import RegressionResult, delta_series, ols_simple, spearman, standardize

__version__ = "0.1.0"
