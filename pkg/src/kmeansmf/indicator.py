"""Binary one-hot assignment matrices and their diagonal gram algebra.

An assignment of n points to k clusters is stored as a length-n vector of
cluster indices, which makes the one-hot column structure impossible to
violate.  The full k-by-n 0/1 matrix is materialized on demand.
"""

import numpy as np

from .matrix import ShapeError, _freeze

__all__ = [
    "EmptyClusterSingularity",
    "IndicatorMatrix",
    "materialize",
    "cluster_sizes",
    "gram",
    "gram_inverse_apply",
    "random_surjective_assignment",
]


class EmptyClusterSingularity(ValueError):
    """Raised when an operation needs (Z Z^T)^-1 but some cluster is empty."""

    def __init__(self, cluster: int):
        self.cluster = int(cluster)
        super().__init__(
            f"cluster {self.cluster} is empty: the gram matrix Z Z^T is singular"
        )


class IndicatorMatrix:
    """Hard assignment of n points to k clusters (one-hot columns).

    Immutable after construction; the assignment array is read-only.
    Empty clusters are representable, but operations that invert the gram
    matrix reject them.
    """

    __slots__ = ("k", "assignment")

    def __init__(self, k: int, assignment):
        k = int(k)
        if k < 1:
            raise ValueError(f"cluster count must be positive, got {k}")
        a = np.asarray(assignment)
        if a.ndim != 1 or a.shape[0] < 1:
            raise ValueError("assignment must be a non-empty 1-D sequence")
        if not np.issubdtype(a.dtype, np.integer):
            raise ValueError(f"assignment entries must be integers, got dtype {a.dtype}")
        a = np.ascontiguousarray(a, dtype=np.int64).copy()
        if a.min() < 0 or a.max() >= k:
            bad = int(np.argmax((a < 0) | (a >= k)))
            raise ValueError(
                f"assignment[{bad}] = {a[bad]} is outside the cluster range [0, {k})"
            )
        a.flags.writeable = False
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "assignment", a)

    def __setattr__(self, name, value):
        raise AttributeError("IndicatorMatrix is immutable")

    @property
    def n(self) -> int:
        return int(self.assignment.shape[0])

    def __eq__(self, other) -> bool:
        if not isinstance(other, IndicatorMatrix):
            return NotImplemented
        return self.k == other.k and bool(np.array_equal(self.assignment, other.assignment))

    def __repr__(self) -> str:
        return f"IndicatorMatrix(k={self.k}, assignment={self.assignment.tolist()})"


def materialize(z: IndicatorMatrix) -> np.ndarray:
    """Dense k-by-n 0/1 matrix with a single 1 per column."""
    out = np.zeros((z.k, z.n))
    out[z.assignment, np.arange(z.n)] = 1.0
    return _freeze(out)


def cluster_sizes(z: IndicatorMatrix) -> np.ndarray:
    """Per-cluster point counts (the row sums of the materialized matrix)."""
    sizes = np.bincount(z.assignment, minlength=z.k)
    sizes.flags.writeable = False
    return sizes


def gram(z: IndicatorMatrix) -> np.ndarray:
    """The k-by-k matrix Z Z^T: diagonal, with cluster sizes on the diagonal.

    Off-diagonal entries are exactly zero because distinct rows of a one-hot
    column matrix never share a nonzero position.
    """
    return _freeze(np.diag(cluster_sizes(z).astype(np.float64)))


def gram_inverse_apply(z: IndicatorMatrix, a: np.ndarray) -> np.ndarray:
    """Right-multiply *a* by (Z Z^T)^-1, i.e. divide column i by cluster size i.

    Raises EmptyClusterSingularity (naming the lowest offending index) when
    any cluster is empty, since the inverse does not exist.
    """
    if a.ndim != 2 or a.shape[1] != z.k:
        raise ShapeError(
            f"operand must have {z.k} columns to match the gram matrix, got {a.shape}"
        )
    sizes = cluster_sizes(z)
    if np.any(sizes == 0):
        raise EmptyClusterSingularity(int(np.argmin(sizes > 0)))
    return _freeze(a / sizes)


def random_surjective_assignment(
    k: int, n: int, rng: np.random.Generator
) -> IndicatorMatrix:
    """Draw a random assignment in which every cluster gets at least one point.

    Starts from a uniform assignment, then pins k distinct points to the k
    clusters so the result is always surjective.
    """
    if k > n:
        raise ValueError(f"cannot fill {k} clusters with only {n} points")
    a = rng.integers(0, k, size=n)
    pinned = rng.choice(n, size=k, replace=False)
    a[pinned] = np.arange(k)
    return IndicatorMatrix(k, a)
