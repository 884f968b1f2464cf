"""Dense float64 matrix values and the handful of operations the library needs.

Matrices are plain 2-D numpy arrays, validated and frozen (read-only) by
``dense``.  All operations are pure and return frozen arrays.
"""

import numpy as np

__all__ = [
    "ShapeError",
    "dense",
    "matmul",
    "transpose",
    "trace",
    "frobenius_norm_sq",
    "sub",
    "relative_difference",
]


class ShapeError(ValueError):
    """Raised when matrix dimensions do not conform."""


def _freeze(arr: np.ndarray) -> np.ndarray:
    """Return a C-contiguous float64 view of *arr* with writes disabled."""
    out = np.ascontiguousarray(arr, dtype=np.float64)
    if out is arr:
        out = out.copy()
    out.flags.writeable = False
    return out


def dense(values) -> np.ndarray:
    """Build a validated matrix from nested sequences or an array.

    Rejects empty shapes and any non-finite entry (NaN or infinity).
    The result is row-major float64 and read-only.
    """
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 2:
        raise ShapeError(f"expected a 2-D matrix, got {arr.ndim}-D data")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ShapeError(f"matrix dimensions must be positive, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        bad = np.argwhere(~np.isfinite(arr))[0]
        raise ValueError(
            f"non-finite entry at row {bad[0]}, column {bad[1]}"
        )
    return _freeze(arr)


def _require_2d(a: np.ndarray, name: str) -> None:
    if a.ndim != 2:
        raise ShapeError(f"{name} must be 2-D, got {a.ndim}-D")


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product a @ b."""
    _require_2d(a, "left operand")
    _require_2d(b, "right operand")
    if a.shape[1] != b.shape[0]:
        raise ShapeError(f"cannot multiply {a.shape} by {b.shape}")
    return _freeze(a @ b)


def transpose(a: np.ndarray) -> np.ndarray:
    """Matrix transpose."""
    _require_2d(a, "operand")
    return _freeze(a.T)


def trace(a: np.ndarray) -> float:
    """Sum of diagonal entries; requires a square matrix."""
    _require_2d(a, "operand")
    if a.shape[0] != a.shape[1]:
        raise ShapeError(f"trace requires a square matrix, got {a.shape}")
    return float(np.trace(a))


def frobenius_norm_sq(a: np.ndarray) -> float:
    """Sum of squared entries (squared Frobenius norm)."""
    _require_2d(a, "operand")
    return float(np.sum(a * a))


def sub(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Entrywise difference a - b."""
    _require_2d(a, "left operand")
    _require_2d(b, "right operand")
    if a.shape != b.shape:
        raise ShapeError(f"cannot subtract {b.shape} from {a.shape}")
    return _freeze(a - b)


def relative_difference(a: float, b: float) -> float:
    """|a - b| scaled by 1 + max(|a|, |b|), the library's equality measure."""
    return abs(a - b) / (1.0 + max(abs(a), abs(b)))
