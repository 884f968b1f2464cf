"""Brute-force ground truth for tiny instances.

Enumerates every assignment of n points to k clusters, scores each one with
a plain scalar-arithmetic objective that shares no code with the matrix
routes, and reports the exact global minimum.  Also provides a randomized
cross-check that the three objective formulations agree.
"""

import itertools
from dataclasses import dataclass

import numpy as np

from .indicator import IndicatorMatrix, random_surjective_assignment
from .objective import (
    objective_factored,
    objective_pointwise,
    objective_projected,
    optimal_centroids,
)
from .matrix import relative_difference

__all__ = [
    "DEFAULT_ENUMERATION_LIMIT",
    "FORM_AGREEMENT_RTOL",
    "EnumerationBudgetExceeded",
    "OracleReport",
    "CrossCheckReport",
    "enumerate_global_min",
    "cross_check_forms",
]

DEFAULT_ENUMERATION_LIMIT = 10_000_000

# Relative tolerance at which the three objective routes must agree.
FORM_AGREEMENT_RTOL = 1e-10


class EnumerationBudgetExceeded(ValueError):
    """Raised when k^n exceeds the enumeration limit."""

    def __init__(self, required: int, limit: int):
        self.required = required
        self.limit = limit
        super().__init__(
            f"enumeration needs {required} candidate assignments, "
            f"which exceeds the limit of {limit}"
        )


@dataclass
class OracleReport:
    """Exact global minimum over all surjective assignments.

    ``argmin_assignments`` lists every minimizing assignment once, with
    cluster labels canonicalized by order of first appearance.
    ``enumerated_count`` is the number of assignments actually scored, i.e.
    k^n minus those skipped for having an empty cluster.
    """

    global_min_objective: float
    argmin_assignments: list[IndicatorMatrix]
    enumerated_count: int


@dataclass
class CrossCheckReport:
    """Result of sampling random assignments and comparing the three
    objective routes pairwise."""

    passed: bool
    samples: int
    max_rel_discrepancy: float


def _canonical(assignment: tuple[int, ...]) -> tuple[int, ...]:
    """Relabel clusters in order of first appearance."""
    relabel: dict[int, int] = {}
    out = []
    for c in assignment:
        if c not in relabel:
            relabel[c] = len(relabel)
        out.append(relabel[c])
    return tuple(out)


def _scored_objective(
    columns: list[list[float]], assignment: tuple[int, ...], k: int, m: int
) -> float:
    """Pointwise objective at the per-cluster means, by scalar loops only."""
    sums = [[0.0] * m for _ in range(k)]
    counts = [0] * k
    for j, c in enumerate(assignment):
        counts[c] += 1
        col = columns[j]
        acc = sums[c]
        for l in range(m):
            acc[l] += col[l]
    means = [[s / counts[i] for s in sums[i]] for i in range(k)]
    total = 0.0
    for j, c in enumerate(assignment):
        col = columns[j]
        mean = means[c]
        for l in range(m):
            d = col[l] - mean[l]
            total += d * d
    return total


def enumerate_global_min(
    data: np.ndarray, k: int, limit: int = DEFAULT_ENUMERATION_LIMIT
) -> OracleReport:
    """Exhaustively minimize the clustering objective over all assignments.

    Assignments with an empty cluster are skipped: the projected form is
    undefined there, and splitting any cluster never increases the objective,
    so some surjective assignment always does at least as well.
    """
    data = np.asarray(data, dtype=np.float64)
    m, n = data.shape
    if k < 1 or k > n:
        raise ValueError(f"cluster count must be in [1, {n}], got {k}")
    required = k**n
    if required > limit:
        raise EnumerationBudgetExceeded(required, limit)

    columns = [[float(data[l, j]) for l in range(m)] for j in range(n)]
    best = float("inf")
    minimizers: set[tuple[int, ...]] = set()
    scored = 0
    for assignment in itertools.product(range(k), repeat=n):
        if len(set(assignment)) != k:
            continue
        scored += 1
        value = _scored_objective(columns, assignment, k, m)
        if value < best:
            best = value
            minimizers = {_canonical(assignment)}
        elif value == best:
            minimizers.add(_canonical(assignment))

    return OracleReport(
        global_min_objective=best,
        argmin_assignments=[
            IndicatorMatrix(k, np.array(a)) for a in sorted(minimizers)
        ],
        enumerated_count=scored,
    )


def cross_check_forms(
    data: np.ndarray, k: int, samples: int, seed: int = 0
) -> CrossCheckReport:
    """Sample random surjective assignments and compare the three objective
    routes pairwise at the optimal centroids.

    Passes when the worst relative discrepancy stays below
    FORM_AGREEMENT_RTOL (vacuously for samples == 0).
    """
    n = data.shape[1]
    if k < 1 or k > n:
        raise ValueError(f"cluster count must be in [1, {n}], got {k}")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        z = random_surjective_assignment(k, n, rng)
        centroids = optimal_centroids(data, z)
        pointwise = objective_pointwise(data, centroids, z)
        factored = objective_factored(data, centroids, z)
        projected = objective_projected(data, z)
        worst = max(
            worst,
            relative_difference(pointwise, factored),
            relative_difference(pointwise, projected),
            relative_difference(factored, projected),
        )
    return CrossCheckReport(
        passed=worst < FORM_AGREEMENT_RTOL,
        samples=samples,
        max_rel_discrepancy=worst,
    )
