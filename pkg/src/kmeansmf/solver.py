"""Alternating minimization over hard assignments: Lloyd's algorithm.

The solver descends the clustering objective by alternating two exact
minimizations: pick the nearest centroid for every point (assignment step),
then replace every centroid with its cluster mean (update step).  Both steps
are deterministic, so a run is fully reproducible from its seed.
"""

from dataclasses import dataclass, field

import numpy as np

from .indicator import (
    EmptyClusterSingularity,
    IndicatorMatrix,
    cluster_sizes,
)
from .matrix import dense
from .objective import (
    objective_factored,
    objective_pointwise,
    objective_projected,
    optimal_centroids,
)

__all__ = [
    "INIT_STRATEGIES",
    "EMPTY_CLUSTER_POLICIES",
    "SolverConfig",
    "ClusteringResult",
    "assign_step",
    "update_step",
    "init_centroids",
    "fit",
]

INIT_STRATEGIES = (
    "random-points",
    "kmeans-plus-plus",
    "provided-centroids",
    "provided-assignment",
)
EMPTY_CLUSTER_POLICIES = ("repair-farthest-point", "error")


@dataclass(frozen=True, eq=False)
class SolverConfig:
    """Parameters of one solver run.

    Attributes:
        k: Number of clusters.
        init: Initialization strategy, one of INIT_STRATEGIES.
        seed: Seed for the initialization RNG.
        max_iters: Cap on assignment/update rounds.
        tol: Relative objective-decrease threshold for convergence.
        empty_cluster_policy: What to do when a cluster empties out.
        centroids: Starting centroids for "provided-centroids".
        assignment: Starting assignment for "provided-assignment".
    """

    k: int
    init: str = "kmeans-plus-plus"
    seed: int = 0
    max_iters: int = 100
    tol: float = 1e-9
    empty_cluster_policy: str = "repair-farthest-point"
    centroids: np.ndarray | None = None
    assignment: np.ndarray | None = None

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"cluster count must be positive, got {self.k}")
        if self.init not in INIT_STRATEGIES:
            raise ValueError(f"unknown init strategy {self.init!r}")
        if self.empty_cluster_policy not in EMPTY_CLUSTER_POLICIES:
            raise ValueError(f"unknown empty-cluster policy {self.empty_cluster_policy!r}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be positive, got {self.max_iters}")
        if self.tol < 0:
            raise ValueError(f"tol must be nonnegative, got {self.tol}")


@dataclass(eq=False)
class ClusteringResult:
    """Outcome of one solver run.

    The three objective fields hold the same quantity computed through the
    pointwise, factored, and projected routes; they agree to within float
    rounding.  ``objective_trace`` records the objective after every update
    step and never increases.  ``converged`` is True when the assignment
    reached a fixed point or the objective decrease fell below tol.
    """

    assignment: IndicatorMatrix
    centroids: np.ndarray
    objective_pointwise: float
    objective_factored: float
    objective_projected: float
    objective_trace: list[float] = field(default_factory=list)
    iterations: int = 0
    converged: bool = False


def assign_step(data: np.ndarray, centroids: np.ndarray) -> IndicatorMatrix:
    """Assign every point to its nearest centroid (ties: lowest index).

    This is the exact minimizer of the pointwise objective over one-hot
    assignments for the given centroids.
    """
    if centroids.ndim != 2 or centroids.shape[0] != data.shape[0]:
        raise ValueError(
            f"centroids of shape {centroids.shape} do not match data with "
            f"{data.shape[0]} features"
        )
    # (k, n) squared distances via direct differences; argmin picks the
    # lowest cluster index on exact ties.
    k = centroids.shape[1]
    dist_sq = np.empty((k, data.shape[1]))
    for i in range(k):
        diff = data - centroids[:, [i]]
        dist_sq[i] = np.sum(diff * diff, axis=0)
    return IndicatorMatrix(k, np.argmin(dist_sq, axis=0))


def _means_of_nonempty(data: np.ndarray, assignment: np.ndarray, k: int) -> np.ndarray:
    """Per-cluster means with empty clusters left at zero (callers mask them)."""
    sums = np.zeros((data.shape[0], k))
    np.add.at(sums.T, assignment, data.T)
    sizes = np.bincount(assignment, minlength=k).astype(np.float64)
    return sums / np.maximum(sizes, 1.0)


def update_step(
    data: np.ndarray, z: IndicatorMatrix, policy: str = "repair-farthest-point"
) -> tuple[np.ndarray, IndicatorMatrix]:
    """Recompute optimal centroids, repairing or rejecting empty clusters.

    With all clusters nonempty this returns (cluster means, z unchanged).
    Under "repair-farthest-point", each empty cluster (in ascending index
    order) receives the point currently farthest from its own centroid (ties:
    lowest point index); donors are restricted to clusters with at least two
    members so a repair never empties another cluster.  Under "error" an
    empty cluster raises EmptyClusterSingularity.
    """
    if policy not in EMPTY_CLUSTER_POLICIES:
        raise ValueError(f"unknown empty-cluster policy {policy!r}")
    sizes = cluster_sizes(z)
    if np.all(sizes > 0):
        return optimal_centroids(data, z), z
    if policy == "error":
        raise EmptyClusterSingularity(int(np.argmin(sizes > 0)))

    assignment = z.assignment.copy()
    for target in np.flatnonzero(sizes == 0):
        counts = np.bincount(assignment, minlength=z.k)
        means = _means_of_nonempty(data, assignment, z.k)
        resid = data - means[:, assignment]
        dist_sq = np.sum(resid * resid, axis=0)
        movable = counts[assignment] >= 2
        if not np.any(movable):
            raise EmptyClusterSingularity(int(target))
        dist_sq = np.where(movable, dist_sq, -1.0)
        assignment[int(np.argmax(dist_sq))] = target

    repaired = IndicatorMatrix(z.k, assignment)
    return optimal_centroids(data, repaired), repaired


def init_centroids(data: np.ndarray, cfg: SolverConfig) -> np.ndarray:
    """Produce starting centroids for the configured strategy.

    "random-points" samples k distinct data columns; "kmeans-plus-plus" uses
    distance-squared-weighted sampling; the "provided-*" strategies validate
    and echo the user's input (for a provided assignment, its cluster means,
    with empties handled per the configured policy).
    """
    n = data.shape[1]
    if cfg.k > n:
        raise ValueError(f"k exceeds number of points (k={cfg.k}, n={n})")

    if cfg.init == "provided-centroids":
        if cfg.centroids is None:
            raise ValueError("init 'provided-centroids' requires centroids")
        provided = dense(cfg.centroids)
        if provided.shape != (data.shape[0], cfg.k):
            raise ValueError(
                f"provided centroids have shape {provided.shape}, "
                f"expected {(data.shape[0], cfg.k)}"
            )
        return provided

    if cfg.init == "provided-assignment":
        z = _provided_assignment(cfg, n)
        centroids, _ = update_step(data, z, cfg.empty_cluster_policy)
        return centroids

    rng = np.random.default_rng(cfg.seed)
    if cfg.init == "random-points":
        picked = rng.choice(n, size=cfg.k, replace=False)
        return dense(data[:, picked])

    # kmeans-plus-plus: first centroid uniform, then sample proportional to
    # the squared distance to the nearest centroid chosen so far.
    chosen = [int(rng.integers(n))]
    diff = data - data[:, [chosen[0]]]
    dist_sq = np.sum(diff * diff, axis=0)
    for _ in range(1, cfg.k):
        total = float(dist_sq.sum())
        if total > 0.0:
            idx = int(rng.choice(n, p=dist_sq / total))
        else:
            # all remaining points coincide with a centroid; fall back to
            # uniform choice among fresh indices
            remaining = np.setdiff1d(np.arange(n), np.asarray(chosen))
            idx = int(rng.choice(remaining))
        chosen.append(idx)
        diff = data - data[:, [idx]]
        dist_sq = np.minimum(dist_sq, np.sum(diff * diff, axis=0))
    return dense(data[:, chosen])


def _provided_assignment(cfg: SolverConfig, n: int) -> IndicatorMatrix:
    if cfg.assignment is None:
        raise ValueError("init 'provided-assignment' requires an assignment")
    z = IndicatorMatrix(cfg.k, np.asarray(cfg.assignment))
    if z.n != n:
        raise ValueError(f"provided assignment covers {z.n} points, data has {n}")
    return z


def fit(data, cfg: SolverConfig) -> ClusteringResult:
    """Run the alternating minimization to a fixed point or iteration cap.

    Args:
        data: Matrix with one data point per column (any array-like; entries
            must be finite).
        cfg: Solver configuration; cfg.k must not exceed the point count.

    Returns:
        ClusteringResult with the final assignment, its optimal centroids,
        the objective computed through all three routes, and the
        per-iteration objective trace.
    """
    data = dense(data)
    n = data.shape[1]
    if cfg.k > n:
        raise ValueError(f"k exceeds number of points (k={cfg.k}, n={n})")

    if cfg.init == "provided-assignment":
        z = _provided_assignment(cfg, n)
    else:
        z = assign_step(data, init_centroids(data, cfg))

    centroids, z = update_step(data, z, cfg.empty_cluster_policy)
    trace = [objective_pointwise(data, centroids, z)]
    converged = False

    while len(trace) < cfg.max_iters:
        z_next = assign_step(data, centroids)
        if z_next == z:
            converged = True
            break
        centroids, z = update_step(data, z_next, cfg.empty_cluster_policy)
        trace.append(objective_pointwise(data, centroids, z))
        if trace[-2] - trace[-1] < cfg.tol * (1.0 + abs(trace[-2])):
            converged = True
            break

    if not converged and assign_step(data, centroids) == z:
        converged = True

    return ClusteringResult(
        assignment=z,
        centroids=centroids,
        objective_pointwise=trace[-1],
        objective_factored=objective_factored(data, centroids, z),
        objective_projected=objective_projected(data, z),
        objective_trace=trace,
        iterations=len(trace),
        converged=converged,
    )
