"""Repeated-run benchmark harness.

Two initialization conditions are supported. Under 'shared' every algorithm
in a repetition starts from the same D^2-seeded prototypes, so differences
reflect the update rules alone. Under 'independent' each algorithm uses its
own default seeding. Seeding is resolved and timed outside the fit call, so
elapsed_ms is fit-only wall clock in both conditions.
"""

import time
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .clustering import (
    ClusterConfig,
    fcm_fit,
    hard_assign,
    kmeans_fit,
    kmeanspp_seed,
    pocs_fit,
    random_seed,
)
from .errors import ValidationError
from .metrics import accuracy, prototype_errors

ALGORITHMS = ("kmeans", "kmeanspp", "fcm", "pocs")

CONDITION_SHARED = "shared"
CONDITION_INDEPENDENT = "independent"

# metric key -> printable table title
TABLE_METRICS = (
    ("error_sse", "clustering error"),
    ("elapsed_ms", "execution time (ms)"),
    ("accuracy_pct", "classification accuracy"),
)

CSV_METRICS = (
    "error_sse",
    "error_sum_dist",
    "own_objective",
    "elapsed_ms",
    "init_ms",
    "accuracy_pct",
    "iterations",
)


@dataclass
class RunResult:
    """Outcome of one fit: errors against the final prototypes, the fit's
    own objective value, optional matched accuracy, and wall-clock split
    into seeding (init_ms) and fitting (elapsed_ms)."""

    algorithm: str
    seed: Optional[int]
    error_sse: float
    error_sum_dist: float
    own_objective: float
    accuracy_pct: Optional[float]
    elapsed_ms: float
    init_ms: float
    iterations: int
    converged: bool


def _default_seeding(algorithm: str) -> str:
    if algorithm in ("kmeanspp", "pocs"):
        return "kmeans++"
    return "random"


def _seed_prototypes(algorithm: str, data, k: int, seed) -> np.ndarray:
    if _default_seeding(algorithm) == "kmeans++":
        return kmeanspp_seed(data, k, seed)
    return random_seed(data, k, seed)


def _fit(algorithm: str, data, config: ClusterConfig, fuzzifier: float):
    if algorithm == "pocs":
        return pocs_fit(data, config)
    if algorithm in ("kmeans", "kmeanspp"):
        return kmeans_fit(data, config)
    if algorithm == "fcm":
        return fcm_fit(data, config, m=fuzzifier)
    raise ValidationError(f"unknown algorithm {algorithm!r} (expected one of {ALGORITHMS})")


def run_once(
    algorithm,
    data,
    config: ClusterConfig,
    true_labels=None,
    fuzzifier: float = 2.0,
    return_model: bool = False,
):
    """Fit once and measure. config.init may be a prototype array (used as
    given, init_ms = 0), a seeding name, or None (the algorithm's default
    seeding is drawn with config.rng_seed). Seeding is timed separately from
    the fit. With return_model the fitted model is returned alongside."""
    if isinstance(config.init, str):
        t0 = time.perf_counter()
        if config.init == "kmeans++":
            init_arr = kmeanspp_seed(data, config.k, config.rng_seed)
        else:
            init_arr = random_seed(data, config.k, config.rng_seed)
        init_ms = 1000.0 * (time.perf_counter() - t0)
    elif config.init is None:
        t0 = time.perf_counter()
        init_arr = _seed_prototypes(algorithm, data, config.k, config.rng_seed)
        init_ms = 1000.0 * (time.perf_counter() - t0)
    else:
        init_arr = np.asarray(config.init, dtype=np.float64)
        init_ms = 0.0
    cfg = replace(config, init=init_arr)
    t0 = time.perf_counter()
    model = _fit(algorithm, data, cfg, fuzzifier)
    elapsed_ms = 1000.0 * (time.perf_counter() - t0)
    if algorithm == "fcm":
        labels = hard_assign(model.memberships)
        own = model.objective
    else:
        labels = model.assignments
        own = model.own_objective
    sse, sum_dist = prototype_errors(data, labels, model.prototypes)
    acc = None
    if true_labels is not None:
        acc = accuracy(labels, true_labels)
    result = RunResult(
        algorithm=algorithm,
        seed=config.rng_seed,
        error_sse=sse,
        error_sum_dist=sum_dist,
        own_objective=own,
        accuracy_pct=acc,
        elapsed_ms=elapsed_ms,
        init_ms=init_ms,
        iterations=model.iterations,
        converged=model.converged,
    )
    if return_model:
        return result, model
    return result


def benchmark(
    data,
    base_config: ClusterConfig,
    algorithms=ALGORITHMS,
    repetitions: int = 20,
    condition: str = CONDITION_INDEPENDENT,
    true_labels=None,
    fuzzifier: float = 2.0,
    reuse_first_init: bool = False,
    log=None,
):
    """Run each algorithm `repetitions` times and collect RunResults.

    Repetition r uses seed base+r (base = base_config.rng_seed or 0). Under
    the shared condition one D^2 seeding per repetition is handed to every
    algorithm; reuse_first_init freezes the repetition-0 seeding for all
    repetitions instead. Returns {algorithm: [RunResult, ...]}.
    """
    if repetitions < 1:
        raise ValidationError(f"repetitions must be >= 1, got {repetitions}")
    if condition not in (CONDITION_SHARED, CONDITION_INDEPENDENT):
        raise ValidationError(
            f"condition must be {CONDITION_SHARED!r} or {CONDITION_INDEPENDENT!r}, got {condition!r}"
        )
    for algorithm in algorithms:
        if algorithm not in ALGORITHMS:
            raise ValidationError(f"unknown algorithm {algorithm!r} (expected one of {ALGORITHMS})")
    base = base_config.rng_seed if base_config.rng_seed is not None else 0
    results = {algorithm: [] for algorithm in algorithms}
    frozen_init = None
    for r in range(repetitions):
        seed = base + r
        if condition == CONDITION_SHARED:
            if frozen_init is None or not reuse_first_init:
                t0 = time.perf_counter()
                frozen_init = kmeanspp_seed(data, base_config.k, seed)
                shared_init_ms = 1000.0 * (time.perf_counter() - t0)
            if log is not None:
                log(
                    f"rep {r}: shared init seed={seed} "
                    f"checksum={float(frozen_init.sum()):.6f}"
                )
            cfg = replace(base_config, rng_seed=seed, init=frozen_init)
        else:
            cfg = replace(base_config, rng_seed=seed, init=None)
        for algorithm in algorithms:
            res = run_once(algorithm, data, cfg, true_labels=true_labels, fuzzifier=fuzzifier)
            if condition == CONDITION_SHARED:
                res.init_ms = shared_init_ms
            results[algorithm].append(res)
    return results


def aggregate(values) -> tuple:
    """(mean, sample std, count). One value has std 0 by convention."""
    arr = np.asarray(list(values), dtype=np.float64)
    if arr.size == 0:
        raise ValidationError("nothing to aggregate")
    mean = float(arr.mean())
    std = float(arr.std(ddof=1)) if arr.size > 1 else 0.0
    return mean, std, int(arr.size)


def build_records(dataset_name, condition, per_algo_results):
    """Flatten benchmark output into report records, one per
    (algorithm, metric), aggregated over repetitions."""
    records = []
    for algorithm, runs in per_algo_results.items():
        for metric in CSV_METRICS:
            vals = [getattr(res, metric) for res in runs]
            if any(v is None for v in vals):
                continue
            mean, std, count = aggregate(vals)
            records.append(
                {
                    "dataset": dataset_name,
                    "condition": condition,
                    "algorithm": algorithm,
                    "metric": metric,
                    "mean": mean,
                    "std": std,
                    "R": count,
                }
            )
    return records


class BenchmarkReport:
    """Accumulates aggregated records across datasets and renders them as
    mean-and-std text tables or machine-readable CSV."""

    def __init__(self):
        self.records = []

    def extend(self, records):
        self.records.extend(records)

    def _pivot(self, metric):
        datasets, algorithms, cells = [], [], {}
        for rec in self.records:
            if rec["metric"] != metric:
                continue
            if rec["dataset"] not in datasets:
                datasets.append(rec["dataset"])
            if rec["algorithm"] not in algorithms:
                algorithms.append(rec["algorithm"])
            cells[(rec["dataset"], rec["algorithm"])] = (rec["mean"], rec["std"])
        return datasets, algorithms, cells

    def to_table(self, include_time: bool = True) -> str:
        blocks = []
        for metric, title in TABLE_METRICS:
            if metric == "elapsed_ms" and not include_time:
                continue
            datasets, algorithms, cells = self._pivot(metric)
            if not datasets:
                continue
            header = ["dataset"] + list(algorithms)
            rows = [header]
            for ds in datasets:
                row = [ds]
                for algorithm in algorithms:
                    if (ds, algorithm) in cells:
                        mean, std = cells[(ds, algorithm)]
                        row.append(f"{mean:.1f}±{std:.1f}")
                    else:
                        row.append("-")
                rows.append(row)
            widths = [max(len(r[c]) for r in rows) for c in range(len(header))]
            lines = [title]
            for r in rows:
                lines.append("  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip())
            blocks.append("\n".join(lines))
        return "\n\n".join(blocks) + "\n"

    def to_csv(self, include_time: bool = True) -> str:
        lines = ["dataset,condition,algorithm,metric,mean,std,R"]
        for rec in self.records:
            if rec["metric"] in ("elapsed_ms", "init_ms") and not include_time:
                continue
            lines.append(
                f"{rec['dataset']},{rec['condition']},{rec['algorithm']},{rec['metric']},"
                f"{rec['mean']:.17g},{rec['std']:.17g},{rec['R']}"
            )
        return "\n".join(lines) + "\n"
