"""Hard k-means clustering as a constrained matrix factorization.

The library keeps three interchangeable views of the clustering objective
(pointwise distances, factored residual, centroid-free projection), verifies
their agreement mechanically, and solves the problem by alternating exact
minimization over assignments and centroids.
"""

__version__ = "0.1.0"

from .matrix import (
    ShapeError,
    dense,
    frobenius_norm_sq,
    matmul,
    relative_difference,
    sub,
    trace,
    transpose,
)
from .indicator import (
    EmptyClusterSingularity,
    IndicatorMatrix,
    cluster_sizes,
    gram,
    gram_inverse_apply,
    materialize,
    random_surjective_assignment,
)
from .objective import (
    ObjectiveTerms,
    expand_terms,
    finite_difference_gradient,
    objective_factored,
    objective_gradient_wrt_m,
    objective_pointwise,
    objective_projected,
    optimal_centroids,
    projection_matrix,
)
from .solver import (
    ClusteringResult,
    SolverConfig,
    assign_step,
    fit,
    init_centroids,
    update_step,
)
from .oracle import (
    CrossCheckReport,
    EnumerationBudgetExceeded,
    OracleReport,
    cross_check_forms,
    enumerate_global_min,
)
from .data import CsvParseError, Dataset, RunRecord, fingerprint, load_csv

__all__ = [
    "__version__",
    "ShapeError",
    "dense",
    "frobenius_norm_sq",
    "matmul",
    "relative_difference",
    "sub",
    "trace",
    "transpose",
    "EmptyClusterSingularity",
    "IndicatorMatrix",
    "cluster_sizes",
    "gram",
    "gram_inverse_apply",
    "materialize",
    "random_surjective_assignment",
    "ObjectiveTerms",
    "expand_terms",
    "finite_difference_gradient",
    "objective_factored",
    "objective_gradient_wrt_m",
    "objective_pointwise",
    "objective_projected",
    "optimal_centroids",
    "projection_matrix",
    "ClusteringResult",
    "SolverConfig",
    "assign_step",
    "fit",
    "init_centroids",
    "update_step",
    "CrossCheckReport",
    "EnumerationBudgetExceeded",
    "OracleReport",
    "cross_check_forms",
    "enumerate_global_min",
    "CsvParseError",
    "Dataset",
    "RunRecord",
    "fingerprint",
    "load_csv",
]
