"""The clustering objective in its three equivalent forms, plus diagnostics.

The sum of squared distances from each point to its assigned centroid can be
written three ways:

  pointwise   sum_j ||x_j - mu_{a(j)}||^2          (per-point distances)
  factored    ||X - M Z||^2                        (Frobenius norm of a residual)
  projected   ||X - X Z^T (Z Z^T)^-1 Z||^2         (centroids eliminated)

This module computes each form by its own route so that their agreement is a
mechanical check, not a tautology.  It also exposes the term-by-term
expansions of the first two forms, the matrix gradient with respect to the
centroids, and the closed-form optimal centroids (per-cluster means).
"""

from dataclasses import dataclass

import numpy as np

from .indicator import IndicatorMatrix, cluster_sizes, gram, gram_inverse_apply, materialize
from .matrix import ShapeError, _freeze, frobenius_norm_sq, matmul, sub, trace, transpose

__all__ = [
    "ObjectiveTerms",
    "objective_pointwise",
    "objective_factored",
    "objective_projected",
    "expand_terms",
    "objective_gradient_wrt_m",
    "finite_difference_gradient",
    "optimal_centroids",
    "projection_matrix",
    "DENSE_PROJECTION_LIMIT",
]

# Above this point count the projected form falls back to the factored form
# with optimal centroids instead of building the n-by-n projector.
DENSE_PROJECTION_LIMIT = 4096


@dataclass(frozen=True)
class ObjectiveTerms:
    """The six expansion terms: t1..t3 from the pointwise form, t4..t6 from
    the factored form.  Corresponding pairs (t1,t4), (t2,t5), (t3,t6) are
    equal in exact arithmetic."""

    t1: float
    t2: float
    t3: float
    t4: float
    t5: float
    t6: float


def _check_shapes(data: np.ndarray, centroids: np.ndarray | None, z: IndicatorMatrix) -> None:
    if data.ndim != 2:
        raise ShapeError(f"data must be 2-D, got {data.ndim}-D")
    if data.shape[1] != z.n:
        raise ShapeError(
            f"data has {data.shape[1]} points but the assignment covers {z.n}"
        )
    if centroids is not None:
        if centroids.ndim != 2:
            raise ShapeError(f"centroids must be 2-D, got {centroids.ndim}-D")
        if centroids.shape[0] != data.shape[0]:
            raise ShapeError(
                f"centroids have {centroids.shape[0]} features, data has {data.shape[0]}"
            )
        if centroids.shape[1] != z.k:
            raise ShapeError(
                f"centroids cover {centroids.shape[1]} clusters, assignment uses {z.k}"
            )


def objective_pointwise(
    data: np.ndarray, centroids: np.ndarray, z: IndicatorMatrix
) -> float:
    """Sum over points of the squared distance to the assigned centroid."""
    _check_shapes(data, centroids, z)
    diff = data - centroids[:, z.assignment]
    return float(np.sum(diff * diff))


def objective_factored(
    data: np.ndarray, centroids: np.ndarray, z: IndicatorMatrix
) -> float:
    """Squared Frobenius norm of the residual X - M Z."""
    _check_shapes(data, centroids, z)
    return frobenius_norm_sq(sub(data, matmul(centroids, materialize(z))))


def projection_matrix(z: IndicatorMatrix) -> np.ndarray:
    """The n-by-n projector Z^T (Z Z^T)^-1 Z onto the cluster-membership space.

    Symmetric and idempotent; multiplying data by it replaces every point with
    its cluster centroid.  Requires all clusters nonempty.
    """
    zm = materialize(z)
    scaled = gram_inverse_apply(z, transpose(zm))
    return matmul(scaled, zm)


def objective_projected(
    data: np.ndarray,
    z: IndicatorMatrix,
    dense_projection_limit: int = DENSE_PROJECTION_LIMIT,
) -> float:
    """Centroid-free objective ||X - X P|| ^2 with P the cluster projector.

    Builds P explicitly up to ``dense_projection_limit`` points; beyond that
    it evaluates the factored form at the optimal centroids, which is equal.
    Raises EmptyClusterSingularity when any cluster is empty.
    """
    _check_shapes(data, None, z)
    if z.n > dense_projection_limit:
        return objective_factored(data, optimal_centroids(data, z), z)
    proj = projection_matrix(z)
    return frobenius_norm_sq(sub(data, matmul(data, proj)))


def expand_terms(
    data: np.ndarray, centroids: np.ndarray, z: IndicatorMatrix
) -> ObjectiveTerms:
    """Evaluate the six expansion terms, each by its defining formula.

    t1 = sum_j ||x_j||^2                  t4 = tr(X^T X)
    t2 = sum_j x_j . mu_{a(j)}            t5 = tr(X^T M Z)
    t3 = sum_i n_i ||mu_i||^2             t6 = tr(Z^T M^T M Z)

    The pointwise objective equals t1 - 2 t2 + t3 and the factored objective
    equals t4 - 2 t5 + t6.
    """
    _check_shapes(data, centroids, z)
    sizes = cluster_sizes(z)

    t1 = float(np.sum(data * data))
    t2 = float(np.sum(data * centroids[:, z.assignment]))
    t3 = float(np.sum(sizes * np.sum(centroids * centroids, axis=0)))

    zm = materialize(z)
    t4 = trace(matmul(transpose(data), data))
    t5 = trace(matmul(transpose(data), matmul(centroids, zm)))
    t6 = trace(matmul(transpose(zm), matmul(transpose(centroids), matmul(centroids, zm))))

    return ObjectiveTerms(t1=t1, t2=t2, t3=t3, t4=t4, t5=t5, t6=t6)


def objective_gradient_wrt_m(
    data: np.ndarray, centroids: np.ndarray, z: IndicatorMatrix
) -> np.ndarray:
    """Gradient of the factored objective with respect to the centroid matrix:
    2 (M Z Z^T - X Z^T)."""
    _check_shapes(data, centroids, z)
    return _freeze(
        2.0 * (matmul(centroids, gram(z)) - matmul(data, transpose(materialize(z))))
    )


def finite_difference_gradient(
    data: np.ndarray,
    centroids: np.ndarray,
    z: IndicatorMatrix,
    rel_step: float = 1e-5,
) -> np.ndarray:
    """Central-difference gradient of the factored objective, entry by entry.

    Step size is ``rel_step`` scaled by 1 + |entry|.  Independent of the
    analytic formula; used to cross-check it.
    """
    _check_shapes(data, centroids, z)
    grad = np.zeros_like(centroids)
    for l in range(centroids.shape[0]):
        for i in range(centroids.shape[1]):
            h = rel_step * (1.0 + abs(centroids[l, i]))
            plus = np.array(centroids)
            plus[l, i] += h
            minus = np.array(centroids)
            minus[l, i] -= h
            grad[l, i] = (
                objective_factored(data, plus, z) - objective_factored(data, minus, z)
            ) / (2.0 * h)
    return _freeze(grad)


def optimal_centroids(data: np.ndarray, z: IndicatorMatrix) -> np.ndarray:
    """Centroids minimizing the factored objective: X Z^T (Z Z^T)^-1.

    Column i is the mean of the points assigned to cluster i.  Raises
    EmptyClusterSingularity when any cluster is empty.
    """
    _check_shapes(data, None, z)
    return gram_inverse_apply(z, matmul(data, transpose(materialize(z))))
