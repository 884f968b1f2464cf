"""CSV ingestion and the serialized record of a solver run.

External files hold one observation per row; internally columns are points,
so the matrix is transposed exactly once, at load.  Run records serialize to
JSON whose floats use shortest round-trip decimal form, so parsing a record
reproduces every numeric field bit for bit.
"""

import csv
import hashlib
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .matrix import dense

__all__ = ["CsvParseError", "Dataset", "RunRecord", "load_csv", "fingerprint"]


class CsvParseError(ValueError):
    """CSV rejection with a 1-based file location when one applies."""

    def __init__(self, message: str, row: int | None = None, column: int | None = None):
        self.row = row
        self.column = column
        where = ""
        if row is not None:
            where = f" (row {row}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + where)


@dataclass(eq=False)
class Dataset:
    """Loaded data: ``matrix`` has one point per column (features x points)."""

    point_count: int
    feature_count: int
    matrix: np.ndarray
    labels: list[str] | None = None


def _looks_like_header(cells: list[str]) -> bool:
    for cell in cells:
        try:
            float(cell)
        except ValueError:
            return True
    return False


def load_csv(path, delimiter: str = ",", has_header: bool | None = None) -> Dataset:
    """Read a rectangular numeric CSV into a Dataset.

    Rows are observations and columns are features.  ``has_header=None``
    auto-detects a header (first row with any non-numeric cell).  Ragged
    rows, non-numeric cells, non-finite literals, and empty files are
    rejected with the offending location.
    """
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh, delimiter=delimiter))
    while rows and rows[-1] == []:
        rows.pop()
    if not rows:
        raise CsvParseError(f"empty file: {path}")

    if has_header is None:
        has_header = _looks_like_header(rows[0])
    labels = [cell.strip() for cell in rows[0]] if has_header else None
    offset = 1 if has_header else 0
    data_rows = rows[offset:]
    if not data_rows:
        raise CsvParseError(f"no data rows in {path}")

    width = len(data_rows[0])
    parsed = np.empty((len(data_rows), width))
    for i, row in enumerate(data_rows):
        file_row = offset + i + 1
        if len(row) != width:
            raise CsvParseError(
                f"ragged row: expected {width} cells, found {len(row)}", row=file_row
            )
        for j, cell in enumerate(row):
            try:
                value = float(cell)
            except ValueError:
                raise CsvParseError(
                    f"non-numeric cell {cell!r}", row=file_row, column=j + 1
                ) from None
            if not math.isfinite(value):
                raise CsvParseError(
                    f"non-finite cell {cell!r}", row=file_row, column=j + 1
                )
            parsed[i, j] = value
    if labels is not None and len(labels) != width:
        raise CsvParseError(
            f"header has {len(labels)} cells but rows have {width}", row=1
        )

    matrix = dense(parsed.T)
    return Dataset(
        point_count=matrix.shape[1],
        feature_count=matrix.shape[0],
        matrix=matrix,
        labels=labels,
    )


def fingerprint(matrix: np.ndarray) -> str:
    """Content hash of a loaded matrix (shape plus raw float64 bytes)."""
    digest = hashlib.sha256()
    digest.update(f"{matrix.shape[0]}x{matrix.shape[1]}:".encode())
    digest.update(np.ascontiguousarray(matrix).tobytes())
    return digest.hexdigest()


@dataclass(eq=False)
class RunRecord:
    """Everything needed to audit one CLI clustering run."""

    tool_version: str
    config: dict
    dataset_fingerprint: str
    point_count: int
    feature_count: int
    assignment: list[int]
    centroids: list[list[float]]
    objective_pointwise: float
    objective_factored: float
    objective_projected: float
    objective_trace: list[float] = field(default_factory=list)
    iterations: int = 0
    converged: bool = False
    duration_seconds: float = 0.0

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "RunRecord":
        raw = json.loads(text)
        return cls(**raw)
