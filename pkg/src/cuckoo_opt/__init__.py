"""Deterministic, seedable cuckoo-search optimization.

The package provides the classic cuckoo-search loop (Lévy-flight exploration
plus probabilistic nest discovery), a handful of variants (binary search
spaces, chaotic randomization, self-adaptive schedules, a Pareto-archive
multiobjective mode), a small benchmark suite, and a CLI for reproducible
multi-seed experiments.

All randomness flows through :class:`cuckoo_opt.core.RngStream`, a
counter-based generator that supports stable splitting, so every run is
exactly reproducible from its integer seed.
"""

from .core import (
    Bounds,
    ContractError,
    EvaluationError,
    Nest,
    ObjectiveProblem,
    Population,
    RngStream,
    best_of,
    clamp,
    init_population,
    pick_distinct_pair,
)
from .levy import LevyParams, mantegna_sigma, sample_levy_vector, tail_exponent_estimate
from .cuckoo import (
    CsParams,
    RunResult,
    SearchState,
    cs_run,
    cs_step,
    discovery_move,
    greedy_select,
    levy_flight_move,
)
from .variants import (
    AdaptiveSchedule,
    BinaryProblem,
    VariantConfig,
    adaptive_params,
    binarize,
    binary_cs_run,
    chaotic_next,
    chaotic_uniform,
    transfer_sigmoid,
)
from .multiobjective import (
    MultiObjectiveProblem,
    ParetoArchive,
    archive_insert,
    dominates,
    hypervolume_2d,
    mo_cs_run,
    nondominated_filter,
)
from .benchsuite import (
    BenchmarkFunction,
    ExperimentSpec,
    SummaryStats,
    TrialRecord,
    UnknownBenchmarkError,
    eval_benchmark,
    list_benchmarks,
    make_benchmark,
    make_problem,
    register_benchmark,
    run_experiment,
    summarize,
)

__version__ = "0.1.0"

__all__ = [
    "AdaptiveSchedule",
    "BenchmarkFunction",
    "BinaryProblem",
    "Bounds",
    "ContractError",
    "CsParams",
    "EvaluationError",
    "ExperimentSpec",
    "LevyParams",
    "MultiObjectiveProblem",
    "Nest",
    "ObjectiveProblem",
    "ParetoArchive",
    "Population",
    "RngStream",
    "RunResult",
    "SearchState",
    "SummaryStats",
    "TrialRecord",
    "UnknownBenchmarkError",
    "VariantConfig",
    "adaptive_params",
    "archive_insert",
    "best_of",
    "binarize",
    "binary_cs_run",
    "chaotic_next",
    "chaotic_uniform",
    "clamp",
    "cs_run",
    "cs_step",
    "discovery_move",
    "dominates",
    "eval_benchmark",
    "greedy_select",
    "hypervolume_2d",
    "init_population",
    "levy_flight_move",
    "list_benchmarks",
    "make_benchmark",
    "make_problem",
    "mantegna_sigma",
    "mo_cs_run",
    "nondominated_filter",
    "pick_distinct_pair",
    "register_benchmark",
    "run_experiment",
    "sample_levy_vector",
    "summarize",
    "tail_exponent_estimate",
    "transfer_sigmoid",
    "__version__",
]
