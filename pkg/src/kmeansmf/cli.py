"""Command-line interface: ``cluster``, ``verify``, and ``oracle`` subcommands.

Exit codes partition outcomes: 0 success, 1 data or domain error, 2 usage
error, 3 solver ran out of iterations without converging.
"""

import argparse
import sys
import time
from dataclasses import replace

import numpy as np

from . import __version__
from .data import CsvParseError, Dataset, RunRecord, fingerprint, load_csv
from .indicator import (
    EmptyClusterSingularity,
    cluster_sizes,
    random_surjective_assignment,
)
from .matrix import frobenius_norm_sq, relative_difference
from .objective import (
    expand_terms,
    finite_difference_gradient,
    objective_gradient_wrt_m,
    objective_pointwise,
    optimal_centroids,
    projection_matrix,
)
from .oracle import (
    DEFAULT_ENUMERATION_LIMIT,
    FORM_AGREEMENT_RTOL,
    EnumerationBudgetExceeded,
    cross_check_forms,
    enumerate_global_min,
)
from .solver import ClusteringResult, SolverConfig, fit

EXIT_OK = 0
EXIT_DATA_ERROR = 1
EXIT_USAGE = 2
EXIT_NO_CONVERGENCE = 3


class UsageError(Exception):
    """Flag combinations argparse cannot express declaratively."""

_INIT_FLAGS = {
    "random": "random-points",
    "kmeanspp": "kmeans-plus-plus",
    "centroids-file": "provided-centroids",
    "assignment-file": "provided-assignment",
}
_POLICY_FLAGS = {"repair": "repair-farthest-point", "error": "error"}


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _nonnegative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text}")
    return value


def _nonnegative_float(text: str) -> float:
    value = float(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative number, got {text}")
    return value


def _add_common_flags(sub: argparse.ArgumentParser, input_required: bool = True) -> None:
    sub.add_argument(
        "--input", required=input_required, help="CSV file, one observation per row"
    )
    sub.add_argument("--delimiter", default=",", help="CSV delimiter (default ',')")
    sub.add_argument(
        "--header",
        choices=("auto", "true", "false"),
        default="auto",
        help="whether the first CSV row is a header (default: auto-detect)",
    )
    sub.add_argument("--seed", type=_nonnegative_int, default=0, help="RNG seed")
    sub.add_argument(
        "--format",
        choices=("table", "record"),
        default="table",
        help="stdout rendering: human table or machine record",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kmeansmf",
        description="Hard k-means clustering solved as a constrained matrix factorization.",
    )
    parser.add_argument("--version", action="version", version=f"kmeansmf {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    cluster = commands.add_parser("cluster", help="fit a clustering and report it")
    _add_common_flags(cluster)
    cluster.add_argument("--k", type=_positive_int, required=True, help="cluster count")
    cluster.add_argument(
        "--init", choices=sorted(_INIT_FLAGS), default="kmeanspp", help="initialization"
    )
    cluster.add_argument("--centroids-file", help="CSV of starting centroids (one per row)")
    cluster.add_argument("--assignment-file", help="starting assignment, one index per line")
    cluster.add_argument("--max-iters", type=_positive_int, default=100)
    cluster.add_argument("--tol", type=_nonnegative_float, default=1e-9)
    cluster.add_argument(
        "--restarts",
        type=_positive_int,
        default=1,
        help="independent runs with seeds seed, seed+1, ...; best objective wins",
    )
    cluster.add_argument(
        "--empty-cluster", choices=sorted(_POLICY_FLAGS), default="repair"
    )
    cluster.add_argument("--output", help="write the run record (JSON) to this path")
    cluster.add_argument(
        "--emit-plot-data",
        help="write first-two-feature coordinates plus labels for external plotting",
    )
    cluster.set_defaults(func=run_cluster)

    verify = commands.add_parser(
        "verify", help="check the objective-form identities on data"
    )
    _add_common_flags(verify, input_required=False)
    verify.add_argument("--k", type=_positive_int, required=True)
    verify.add_argument("--samples", type=_nonnegative_int, default=100)
    verify.add_argument(
        "--random", action="store_true", help="verify on generated data instead of --input"
    )
    verify.add_argument("--m", type=_positive_int, help="feature count for --random")
    verify.add_argument("--n", type=_positive_int, help="point count for --random")
    verify.set_defaults(func=run_verify)

    oracle = commands.add_parser(
        "oracle", help="exhaustive global minimum on a tiny dataset"
    )
    _add_common_flags(oracle)
    oracle.add_argument("--k", type=_positive_int, required=True)
    oracle.add_argument("--limit", type=_positive_int, default=DEFAULT_ENUMERATION_LIMIT)
    oracle.add_argument(
        "--compare", action="store_true", help="also fit and report the gap to the minimum"
    )
    oracle.add_argument("--restarts", type=_positive_int, default=1)
    oracle.set_defaults(func=run_oracle)

    return parser


def _load_dataset(args) -> Dataset:
    if not args.input:
        raise UsageError("one of --input or --random is required")
    has_header = {"auto": None, "true": True, "false": False}[args.header]
    return load_csv(args.input, delimiter=args.delimiter, has_header=has_header)


def _load_assignment_file(path: str) -> np.ndarray:
    with open(path) as fh:
        lines = [line.strip() for line in fh if line.strip()]
    try:
        return np.array([int(line) for line in lines])
    except ValueError as exc:
        raise ValueError(f"assignment file {path}: {exc}") from None


def _solver_config(args, dataset: Dataset) -> SolverConfig:
    strategy = _INIT_FLAGS[args.init]
    centroids = None
    assignment = None
    if strategy == "provided-centroids":
        if not args.centroids_file:
            raise UsageError("--init centroids-file requires --centroids-file")
        centroids = load_csv(args.centroids_file, delimiter=args.delimiter).matrix
    if strategy == "provided-assignment":
        if not args.assignment_file:
            raise UsageError("--init assignment-file requires --assignment-file")
        assignment = _load_assignment_file(args.assignment_file)
    return SolverConfig(
        k=args.k,
        init=strategy,
        seed=args.seed,
        max_iters=args.max_iters,
        tol=args.tol,
        empty_cluster_policy=_POLICY_FLAGS[args.empty_cluster],
        centroids=centroids,
        assignment=assignment,
    )


def _best_of_restarts(
    data: np.ndarray, cfg: SolverConfig, restarts: int
) -> tuple[ClusteringResult, int]:
    best: ClusteringResult | None = None
    best_index = 0
    for r in range(restarts):
        result = fit(data, replace(cfg, seed=cfg.seed + r))
        if best is None or result.objective_pointwise < best.objective_pointwise:
            best = result
            best_index = r
    return best, best_index


def _run_record(
    args, cfg: SolverConfig, dataset: Dataset, result: ClusteringResult, seconds: float
) -> RunRecord:
    config_echo = {
        "k": cfg.k,
        "init": cfg.init,
        "seed": cfg.seed,
        "max_iters": cfg.max_iters,
        "tol": cfg.tol,
        "empty_cluster_policy": cfg.empty_cluster_policy,
        "restarts": args.restarts,
    }
    return RunRecord(
        tool_version=__version__,
        config=config_echo,
        dataset_fingerprint=fingerprint(dataset.matrix),
        point_count=dataset.point_count,
        feature_count=dataset.feature_count,
        assignment=result.assignment.assignment.tolist(),
        centroids=result.centroids.tolist(),
        objective_pointwise=result.objective_pointwise,
        objective_factored=result.objective_factored,
        objective_projected=result.objective_projected,
        objective_trace=list(result.objective_trace),
        iterations=result.iterations,
        converged=result.converged,
        duration_seconds=seconds,
    )


def _render_table(record: RunRecord, sizes: list[int], best_index: int) -> str:
    rows = [
        ("k", record.config["k"]),
        ("init", record.config["init"]),
        ("seed", record.config["seed"]),
        ("restarts", f"{record.config['restarts']} (best index {best_index})"),
        ("points", record.point_count),
        ("features", record.feature_count),
        ("iterations", record.iterations),
        ("converged", str(record.converged).lower()),
        ("objective pointwise", repr(record.objective_pointwise)),
        ("objective factored", repr(record.objective_factored)),
        ("objective projected", repr(record.objective_projected)),
        ("cluster sizes", sizes),
        ("dataset fingerprint", record.dataset_fingerprint[:16]),
    ]
    width = max(len(name) for name, _ in rows)
    return "\n".join(f"{name:<{width}}  {value}" for name, value in rows)


def _emit_plot_data(path: str, dataset: Dataset, result: ClusteringResult) -> None:
    coords = dataset.matrix[: min(2, dataset.feature_count), :]
    header = ",".join(f"x{i + 1}" for i in range(coords.shape[0])) + ",label"
    lines = [header]
    for j in range(dataset.point_count):
        point = ",".join(repr(float(v)) for v in coords[:, j])
        lines.append(f"{point},{int(result.assignment.assignment[j])}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def run_cluster(args) -> int:
    dataset = _load_dataset(args)
    cfg = _solver_config(args, dataset)
    start = time.perf_counter()
    result, best_index = _best_of_restarts(dataset.matrix, cfg, args.restarts)
    seconds = time.perf_counter() - start

    record = _run_record(args, cfg, dataset, result, seconds)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(record.to_json())
    if args.emit_plot_data:
        _emit_plot_data(args.emit_plot_data, dataset, result)

    if args.format == "record":
        sys.stdout.write(record.to_json())
    else:
        sizes = cluster_sizes(result.assignment).tolist()
        print(_render_table(record, sizes, best_index))
    return EXIT_OK if result.converged else EXIT_NO_CONVERGENCE


def _verify_data(args) -> np.ndarray:
    if args.random:
        if args.input:
            raise UsageError("--random and --input are mutually exclusive")
        if not args.m or not args.n:
            raise UsageError("--random requires --m and --n")
        rng = np.random.default_rng(args.seed)
        return rng.uniform(-10.0, 10.0, size=(args.m, args.n))
    return _load_dataset(args).matrix


def run_verify(args) -> int:
    data = np.asarray(_verify_data(args))
    n = data.shape[1]
    if args.k > n:
        raise ValueError(f"k exceeds number of points (k={args.k}, n={n})")

    forms = cross_check_forms(data, args.k, args.samples, seed=args.seed)

    rng = np.random.default_rng(args.seed)
    worst_terms = 0.0
    worst_idempotence = 0.0
    worst_symmetry = 0.0
    worst_gradient = 0.0
    worst_stationarity = 0.0
    norm_scale = 1.0 + np.sqrt(frobenius_norm_sq(data))
    for _ in range(args.samples):
        z = random_surjective_assignment(args.k, n, rng)
        centroids = optimal_centroids(data, z)

        terms = expand_terms(data, centroids, z)
        pointwise = objective_pointwise(data, centroids, z)
        worst_terms = max(
            worst_terms,
            relative_difference(terms.t1, terms.t4),
            relative_difference(terms.t2, terms.t5),
            relative_difference(terms.t3, terms.t6),
            relative_difference(terms.t1 - 2.0 * terms.t2 + terms.t3, pointwise),
        )

        proj = projection_matrix(z)
        worst_idempotence = max(worst_idempotence, frobenius_norm_sq(proj @ proj - proj))
        worst_symmetry = max(worst_symmetry, float(np.max(np.abs(proj - proj.T))))

        probe = rng.uniform(-10.0, 10.0, size=centroids.shape)
        analytic = objective_gradient_wrt_m(data, probe, z)
        numeric = finite_difference_gradient(data, probe, z)
        worst_gradient = max(
            worst_gradient,
            max(
                relative_difference(float(a), float(b))
                for a, b in zip(analytic.ravel(), numeric.ravel())
            ),
        )
        stationary = objective_gradient_wrt_m(data, centroids, z)
        worst_stationarity = max(
            worst_stationarity, float(np.max(np.abs(stationary))) / norm_scale
        )

    checks = [
        ("three-form agreement", forms.max_rel_discrepancy, FORM_AGREEMENT_RTOL),
        ("term identities", worst_terms, FORM_AGREEMENT_RTOL),
        ("projector idempotence", worst_idempotence, 1e-20 * n),
        ("projector symmetry", worst_symmetry, 1e-12),
        ("gradient vs finite differences", worst_gradient, 1e-6),
        ("gradient at optimal centroids", worst_stationarity, 1e-10),
    ]
    all_passed = True
    for name, worst, limit in checks:
        passed = worst < limit
        all_passed &= passed
        print(
            f"{name:<32} worst {worst:.3e}  limit {limit:.1e}  "
            f"{'PASS' if passed else 'FAIL'}"
        )
    print(f"samples: {args.samples}")
    return EXIT_OK if all_passed else EXIT_DATA_ERROR


def _partition_text(assignment: np.ndarray, k: int) -> str:
    groups = [
        "{" + ", ".join(str(j) for j in np.flatnonzero(assignment == i)) + "}"
        for i in range(k)
    ]
    return " | ".join(groups)


def run_oracle(args) -> int:
    dataset = _load_dataset(args)
    report = enumerate_global_min(dataset.matrix, args.k, limit=args.limit)

    print(f"global minimum      {report.global_min_objective!r}")
    print(f"assignments scored  {report.enumerated_count}")
    print(f"minimizing partitions ({len(report.argmin_assignments)}):")
    for z in report.argmin_assignments:
        print(f"  {z.assignment.tolist()}    {_partition_text(z.assignment, z.k)}")

    if args.compare:
        cfg = SolverConfig(k=args.k, seed=args.seed)
        result, best_index = _best_of_restarts(dataset.matrix, cfg, args.restarts)
        gap = result.objective_pointwise - report.global_min_objective
        print(
            f"solver best         {result.objective_pointwise!r} "
            f"(restarts {args.restarts}, best index {best_index})"
        )
        print(f"gap                 {gap!r}")
        print(
            "relative gap        "
            f"{relative_difference(result.objective_pointwise, report.global_min_objective):.3e}"
        )
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (
        CsvParseError,
        EmptyClusterSingularity,
        EnumerationBudgetExceeded,
        OSError,
        ValueError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA_ERROR


if __name__ == "__main__":
    sys.exit(main())
