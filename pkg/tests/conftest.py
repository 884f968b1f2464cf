import pathlib

import numpy as np
import pytest

from kmeansmf import optimal_centroids, random_surjective_assignment

DATA_DIR = pathlib.Path(__file__).parent / "data"

_criterion_lines: list[tuple[int, str]] = []


def random_instance(rng, max_features=6, max_points=60, max_clusters=6):
    """One (data, surjective assignment) pair: m in [1,6], n in [2,60],
    k in [1, min(6, n)], entries uniform in [-10, 10]."""
    m = int(rng.integers(1, max_features + 1))
    n = int(rng.integers(2, max_points + 1))
    k = int(rng.integers(1, min(max_clusters, n) + 1))
    data = rng.uniform(-10.0, 10.0, size=(m, n))
    return data, random_surjective_assignment(k, n, rng)


@pytest.fixture(scope="session")
def identity_corpus():
    """Shared corpus for the objective-identity checks: 120 instances with
    optimal centroids precomputed."""
    rng = np.random.default_rng(20250411)
    corpus = []
    for _ in range(120):
        data, z = random_instance(rng)
        corpus.append((data, z, optimal_centroids(data, z)))
    return corpus


@pytest.fixture
def line4_path():
    return DATA_DIR / "line4.csv"


@pytest.fixture
def pair_path():
    return DATA_DIR / "pair.csv"


@pytest.fixture
def criterion():
    """Record one acceptance-criterion outcome and assert it passed."""

    def _record(num: int, name: str, passed: bool, detail: str = ""):
        status = "PASS" if passed else "FAIL"
        suffix = f": {detail}" if detail else ""
        _criterion_lines.append((num, f"criterion {num} ({name}): {status}{suffix}"))
        assert passed, f"criterion {num} ({name}) failed{suffix}"

    return _record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _criterion_lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(_criterion_lines):
            terminalreporter.write_line(line)
