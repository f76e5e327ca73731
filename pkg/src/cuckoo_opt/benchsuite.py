"""Benchmark functions and the multi-seed experiment harness."""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .core import Bounds, ContractError, ObjectiveProblem
from .cuckoo import CsParams, cs_run
from .multiobjective import MultiObjectiveProblem, dominates, hypervolume_2d, mo_cs_run
from .variants import BinaryProblem, binary_cs_run


class UnknownBenchmarkError(LookupError):
    """Raised when a benchmark name is not in the registry."""


# -- benchmark objectives ----------------------------------------------------


def sphere(x: np.ndarray) -> float:
    return float(np.dot(x, x))


def rosenbrock(x: np.ndarray) -> float:
    return float(np.sum(100.0 * (x[1:] - x[:-1] ** 2) ** 2 + (1.0 - x[:-1]) ** 2))


def rastrigin(x: np.ndarray) -> float:
    return 10.0 * x.size + float(np.sum(x * x - 10.0 * np.cos(2.0 * np.pi * x)))


def ackley(x: np.ndarray) -> float:
    d = x.size
    return (
        -20.0 * math.exp(-0.2 * math.sqrt(float(np.dot(x, x)) / d))
        - math.exp(float(np.sum(np.cos(2.0 * np.pi * x))) / d)
        + 20.0
        + math.e
    )


def schaffer(x: np.ndarray) -> np.ndarray:
    """Two conflicting parabolas; the Pareto set is x in [0, 2]."""
    v = float(x[0])
    return np.array([v * v, (v - 2.0) ** 2])


def onemax(bits: np.ndarray) -> float:
    """Count of zero bits, so the all-ones vector scores 0."""
    return float(bits.size - np.count_nonzero(bits))


def _zeros(dimension: int) -> np.ndarray:
    return np.zeros(dimension)


def _ones(dimension: int) -> np.ndarray:
    return np.ones(dimension)


@dataclass(frozen=True)
class _BenchmarkInfo:
    name: str
    kind: str  # "scalar" | "mo" | "binary"
    objective: Callable
    lower: float = 0.0
    upper: float = 0.0
    known_optimum: float = math.nan
    optimum_at: Callable[[int], np.ndarray] | None = None
    min_dimension: int = 1
    fixed_dimension: int | None = None
    n_objectives: int = 1
    ref_point: tuple[float, ...] | None = None


_REGISTRY: dict[str, _BenchmarkInfo] = {}


def _register(info: _BenchmarkInfo) -> None:
    _REGISTRY[info.name] = info


_register(_BenchmarkInfo("sphere", "scalar", sphere, -5.12, 5.12, 0.0, _zeros))
_register(_BenchmarkInfo("rastrigin", "scalar", rastrigin, -5.12, 5.12, 0.0, _zeros))
_register(_BenchmarkInfo("rosenbrock", "scalar", rosenbrock, -5.0, 10.0, 0.0, _ones, min_dimension=2))
_register(_BenchmarkInfo("ackley", "scalar", ackley, -32.768, 32.768, 0.0, _zeros))
_register(
    _BenchmarkInfo(
        "schaffer", "mo", schaffer, -10.0, 10.0,
        fixed_dimension=1, n_objectives=2, ref_point=(4.0, 4.0),
    )
)
_register(_BenchmarkInfo("onemax", "binary", onemax, known_optimum=0.0, optimum_at=_ones))


def register_benchmark(
    name: str,
    objective: Callable[[np.ndarray], float],
    lower: float,
    upper: float,
    known_optimum: float = math.nan,
    optimum_at: Callable[[int], np.ndarray] | None = None,
    min_dimension: int = 1,
) -> None:
    """Add a custom scalar benchmark (process-local; mainly a test hook)."""
    if name in _REGISTRY:
        raise ContractError(f"benchmark {name!r} is already registered")
    _register(
        _BenchmarkInfo(name, "scalar", objective, lower, upper, known_optimum, optimum_at,
                       min_dimension=min_dimension)
    )


def _lookup(name: str) -> _BenchmarkInfo:
    try:
        return _REGISTRY[name]
    except KeyError:
        known = ", ".join(sorted(_REGISTRY))
        raise UnknownBenchmarkError(f"unknown benchmark {name!r}; available: {known}") from None


def list_benchmarks() -> list[tuple[str, str]]:
    """Sorted (name, kind) pairs for everything in the registry."""
    return sorted((info.name, info.kind) for info in _REGISTRY.values())


def eval_benchmark(name: str, x: np.ndarray) -> float:
    """Evaluate a scalar benchmark by name (no bounds handling)."""
    info = _lookup(name)
    if info.kind != "scalar":
        raise UnknownBenchmarkError(f"benchmark {name!r} is {info.kind}, not scalar")
    return float(info.objective(np.asarray(x, dtype=float)))


def _check_dimension(info: _BenchmarkInfo, dimension: int) -> None:
    if info.fixed_dimension is not None and dimension != info.fixed_dimension:
        raise ContractError(
            f"benchmark {info.name!r} is defined for dimension {info.fixed_dimension}, "
            f"got {dimension}"
        )
    if dimension < info.min_dimension:
        raise ContractError(
            f"benchmark {info.name!r} needs dimension >= {info.min_dimension}, got {dimension}"
        )


@dataclass(frozen=True)
class BenchmarkFunction:
    """Registry metadata for one benchmark at a concrete dimension."""

    name: str
    kind: str
    dimension: int
    bounds: Bounds | None
    known_optimum: float
    optimum_position: np.ndarray | None


def make_benchmark(name: str, dimension: int) -> BenchmarkFunction:
    info = _lookup(name)
    _check_dimension(info, dimension)
    bounds = None if info.kind == "binary" else Bounds.cube(info.lower, info.upper, dimension)
    optimum = info.optimum_at(dimension) if info.optimum_at is not None else None
    return BenchmarkFunction(info.name, info.kind, dimension, bounds, info.known_optimum, optimum)


def make_problem(name: str, dimension: int):
    """Build the runnable problem object for a benchmark.

    Returns an ObjectiveProblem, MultiObjectiveProblem, or BinaryProblem
    depending on the benchmark's kind.
    """
    info = _lookup(name)
    _check_dimension(info, dimension)
    if info.kind == "scalar":
        return ObjectiveProblem(
            dimension, Bounds.cube(info.lower, info.upper, dimension), info.objective
        )
    if info.kind == "mo":
        return MultiObjectiveProblem(
            dimension,
            Bounds.cube(info.lower, info.upper, dimension),
            info.objective,
            info.n_objectives,
        )
    return BinaryProblem(dimension, info.objective)


# -- experiment harness ------------------------------------------------------


@dataclass(frozen=True)
class ExperimentSpec:
    """One benchmark, one parameter set, many seeds."""

    benchmark: str
    dimension: int
    params: CsParams
    seeds: tuple[int, ...]
    capacity: int = 50
    output_dir: str | None = None

    def __post_init__(self):
        info = _lookup(self.benchmark)
        _check_dimension(info, self.dimension)
        seeds = tuple(int(s) for s in self.seeds)
        if len(seeds) == 0:
            raise ContractError("seeds must be a non-empty sequence")
        if len(set(seeds)) != len(seeds):
            raise ContractError("seeds must be distinct")
        if any(s < 0 for s in seeds):
            raise ContractError("seeds must be non-negative")
        object.__setattr__(self, "seeds", seeds)
        if info.kind == "binary" and self.params.variant.kind != "binary":
            raise ContractError(
                f"benchmark {self.benchmark!r} needs the binary variant, "
                f"got {self.params.variant.kind!r}"
            )
        if info.kind != "binary" and self.params.variant.kind == "binary":
            raise ContractError(
                f"the binary variant does not apply to benchmark {self.benchmark!r}"
            )


@dataclass(frozen=True)
class TrialRecord:
    """Outcome of a single seeded run inside an experiment."""

    seed: int
    benchmark: str
    variant: str
    status: str  # "ok" | "error"
    final_best: float
    evaluations: int
    iterations: int
    wall_time: float
    trace: tuple[tuple[int, float], ...] = ()
    error: str | None = None
    archive_positions: np.ndarray | None = None
    archive_objectives: np.ndarray | None = None


def _run_trial(benchmark: str, dimension: int, params: CsParams, capacity: int, seed: int) -> TrialRecord:
    info = _lookup(benchmark)
    p = replace(params, seed=seed)
    start = time.perf_counter()
    try:
        if info.kind == "scalar":
            result = cs_run(make_problem(benchmark, dimension), p)
            return TrialRecord(
                seed, benchmark, p.variant.kind, "ok",
                result.best.fitness, result.evaluations, p.max_iterations,
                time.perf_counter() - start, result.trace,
            )
        if info.kind == "binary":
            result = binary_cs_run(make_problem(benchmark, dimension), p)
            return TrialRecord(
                seed, benchmark, p.variant.kind, "ok",
                result.best.fitness, result.evaluations, p.max_iterations,
                time.perf_counter() - start, result.trace,
            )
        # Multiobjective: report the archive's hypervolume against the
        # benchmark's reference point (points beyond the reference are
        # outside the measured region and contribute nothing).
        tally = [0]
        base = info.objective

        def counted(x: np.ndarray) -> np.ndarray:
            tally[0] += 1
            return base(x)

        problem = MultiObjectiveProblem(
            dimension,
            Bounds.cube(info.lower, info.upper, dimension),
            counted,
            info.n_objectives,
        )
        archive = mo_cs_run(problem, p, capacity)
        ref = np.asarray(info.ref_point, dtype=float)
        front = [f for _, f in archive.entries if dominates(f, ref)]
        hv = hypervolume_2d(front, ref)
        return TrialRecord(
            seed, benchmark, p.variant.kind, "ok",
            hv, tally[0], p.max_iterations,
            time.perf_counter() - start,
            archive_positions=archive.positions_array(),
            archive_objectives=archive.objectives_array(),
        )
    except Exception as err:  # noqa: BLE001 - per-trial isolation is the point
        return TrialRecord(
            seed, benchmark, p.variant.kind, "error",
            math.nan, 0, p.max_iterations,
            time.perf_counter() - start,
            error=f"{type(err).__name__}: {err}",
        )


def _trial_worker(args: tuple) -> TrialRecord:
    return _run_trial(*args)


def run_experiment(spec: ExperimentSpec, jobs: int = 1) -> list[TrialRecord]:
    """Run every seed of an experiment, optionally across processes.

    Each trial is fully determined by (benchmark, dimension, params, seed),
    so the per-seed records are identical whatever ``jobs`` is; parallel
    runs only change wall time.  Trial failures are captured in the record
    (status "error") and never abort the remaining seeds.
    """
    if jobs < 1:
        raise ContractError(f"jobs must be >= 1, got {jobs}")
    tasks = [
        (spec.benchmark, spec.dimension, spec.params, spec.capacity, seed)
        for seed in spec.seeds
    ]
    if jobs == 1 or len(tasks) == 1:
        return [_run_trial(*task) for task in tasks]
    with ProcessPoolExecutor(max_workers=min(jobs, len(tasks))) as pool:
        return list(pool.map(_trial_worker, tasks))


@dataclass(frozen=True)
class SummaryStats:
    """Distributional summary of final_best over the successful trials."""

    count: int
    minimum: float
    median: float
    mean: float
    maximum: float
    iqr: float


def summarize(records: list[TrialRecord]) -> SummaryStats:
    """Summarize final_best across trials with status "ok".

    The median is the lower-middle order statistic (index (m-1)//2 of the
    sorted values) and the IQR uses lower-interpolation quartiles, so every
    reported number is a value that actually occurred.
    """
    values = np.sort(np.array([r.final_best for r in records if r.status == "ok"]))
    if values.size == 0:
        raise ContractError("no successful trials to summarize")
    q1, q3 = np.percentile(values, [25, 75], method="lower")
    return SummaryStats(
        count=int(values.size),
        minimum=float(values[0]),
        median=float(values[(values.size - 1) // 2]),
        mean=float(values.mean()),
        maximum=float(values[-1]),
        iqr=float(q3 - q1),
    )
