"""The cuckoo-search loop.

One iteration has two phases, each generating one candidate per nest from a
snapshot of the phase-start population and accepting strictly-better
candidates in place (live fitness comparisons, so later nests in the same
phase see earlier replacements):

* Lévy phase: every nest proposes ``x_i + alpha * span * L_i`` with L_i a
  heavy-tailed step vector, and the candidate is compared against a
  uniformly chosen nest m_i (not necessarily i).
* Discovery phase: with probability ``pa`` per coordinate, nest i takes a
  biased step ``beta * s * (x_j - x_k)`` along the difference of two other
  nests, and the candidate is compared against nest i itself.

Draw discipline (what makes runs bit-reproducible): per iteration the main
stream yields, in order, the Lévy numerator block (n, d), the Lévy
denominator block (n, d), the n comparison targets, then -- via the gate
source -- the discovery gate block (n, d) and scale block (n, d), then one
permutation per nest for the (j, k) pairs.  Nothing else consumes draws, so
an iteration's randomness is a pure function of the seed and iteration index.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

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
)
from .levy import LAM_MAX, LAM_MIN, LevyParams, sample_levy_matrix, sample_levy_vector
from .variants import GateSource, UniformGate, VariantConfig, adaptive_params, make_gate_source


@dataclass(frozen=True)
class CsParams:
    """Run parameters: population size, rates, tail exponent, budget, seed."""

    n: int = 25
    pa: float = 0.25
    alpha: float = 0.01
    beta: float = 1.0
    lam: float = 1.5
    max_iterations: int = 1000
    seed: int = 0
    variant: VariantConfig = field(default_factory=VariantConfig)

    def __post_init__(self):
        if self.n < 2:
            raise ContractError(f"population size n must be >= 2, got {self.n}")
        if not (0.0 <= self.pa <= 1.0):
            raise ContractError(f"discovery probability pa must be within [0, 1], got {self.pa}")
        if not (self.alpha > 0.0 and np.isfinite(self.alpha)):
            raise ContractError(f"step scale alpha must be positive and finite, got {self.alpha}")
        if not (self.beta > 0.0 and np.isfinite(self.beta)):
            raise ContractError(f"walk scale beta must be positive and finite, got {self.beta}")
        if not (LAM_MIN <= self.lam <= LAM_MAX):
            raise ContractError(
                f"tail exponent lam must be within [{LAM_MIN}, {LAM_MAX}], got {self.lam}"
            )
        if self.max_iterations < 0:
            raise ContractError(f"max_iterations must be >= 0, got {self.max_iterations}")
        if not isinstance(self.variant, VariantConfig):
            raise ContractError(f"variant must be a VariantConfig, got {type(self.variant)!r}")

    @property
    def levy(self) -> LevyParams:
        return LevyParams(self.lam)


@dataclass
class SearchState:
    """Everything the loop carries between iterations.

    The rng and gate objects are advanced in place by :func:`cs_step`; the
    population is replaced, never mutated, so callers may keep references
    to earlier states.
    """

    population: Population
    iteration: int
    best_trace: list[tuple[int, float]]
    rng: RngStream
    gate: GateSource | None = None


@dataclass(frozen=True)
class RunResult:
    """Outcome of one run: the best nest, cost accounting, and trace."""

    best: Nest
    evaluations: int
    trace: tuple[tuple[int, float], ...]
    params: CsParams
    best_bits: np.ndarray | None = None


# -- single-nest operations (the step applies these in bulk) ---------------


def levy_flight_move(
    x: np.ndarray, alpha: float, levy: LevyParams, bounds: Bounds, rng: RngStream
) -> np.ndarray:
    """One Lévy move from ``x``: x + alpha * span * L, clamped to the box."""
    x = np.asarray(x, dtype=float)
    if not bounds.contains(x):
        raise ContractError("levy_flight_move requires an in-bounds start point")
    step = sample_levy_vector(rng, levy, x.size)
    return clamp(bounds, x + alpha * bounds.span * step)


def discovery_move(
    population: Population,
    i: int,
    pa: float,
    beta: float,
    bounds: Bounds,
    rng: RngStream,
    gate: GateSource | None = None,
) -> np.ndarray:
    """One discovery walk for nest i, gated per coordinate by pa.

    Consumes one gate epsilon vector, one scale vector, then permutations
    until a pair (j, k) avoiding i is found (with fewer than three nests no
    such pair exists, so the first permutation is accepted as-is).
    """
    n = population.size
    if not (0 <= i < n):
        raise ContractError(f"nest index {i} out of range for population of {n}")
    src = gate if gate is not None else UniformGate(rng)
    eps = src.block((population.positions.shape[1],))
    scale = src.block((population.positions.shape[1],))
    j, k = _pair_avoiding(n, i, rng)
    x = population.positions
    step = beta * scale * (eps < pa) * (x[j] - x[k])
    return clamp(bounds, x[i] + step)


def greedy_select(current: Nest, candidate: np.ndarray, problem: ObjectiveProblem) -> Nest:
    """Keep the strictly better of the current nest and the candidate.

    Ties keep the incumbent, which is what makes best-so-far traces
    non-increasing and prevents drift across plateaus.
    """
    value = problem.evaluate(candidate)
    if value < current.fitness:
        return Nest(np.asarray(candidate, dtype=float).copy(), value)
    return current


def _pair_avoiding(n: int, i: int, rng: RngStream) -> tuple[int, int]:
    """Ordered pair of distinct indices, both different from i when n >= 3."""
    while True:
        perm = rng.permutation(n)
        j, k = int(perm[0]), int(perm[1])
        if n < 3 or (j != i and k != i):
            return j, k


# -- the iteration ----------------------------------------------------------


def cs_step(
    state: SearchState,
    problem: ObjectiveProblem,
    params: CsParams,
    *,
    pa: float | None = None,
    alpha: float | None = None,
) -> SearchState:
    """Advance the search by one iteration (exactly 2n evaluations).

    ``pa`` and ``alpha`` override the corresponding params fields for this
    step only; the self-adaptive run loop feeds its scheduled values
    through them.
    """
    pa_t = params.pa if pa is None else pa
    alpha_t = params.alpha if alpha is None else alpha
    rng = state.rng
    gate = state.gate if state.gate is not None else UniformGate(rng)
    bounds = problem.bounds
    n = state.population.size
    d = problem.dimension
    positions = state.population.positions.copy()
    fitness = state.population.fitness.copy()
    alpha_vec = alpha_t * bounds.span

    # Lévy phase: candidates from the phase-start snapshot, compared against
    # uniformly drawn nests (live fitness, so replacements take effect
    # immediately for later comparisons).
    steps = sample_levy_matrix(rng, params.levy, (n, d))
    levy_cand = np.clip(positions + alpha_vec * steps, bounds.lower, bounds.upper)
    targets = rng.integers(0, n, size=n)
    for i in range(n):
        value = _evaluate(problem, levy_cand[i], state.iteration)
        m = int(targets[i])
        if value < fitness[m]:
            positions[m] = levy_cand[i]
            fitness[m] = value

    # Discovery phase: per-coordinate gated difference walks from the
    # post-Lévy snapshot, each candidate competing against its own nest.
    eps = gate.block((n, d))
    scale = gate.block((n, d))
    snapshot = positions.copy()
    js = np.empty(n, dtype=int)
    ks = np.empty(n, dtype=int)
    for i in range(n):
        js[i], ks[i] = _pair_avoiding(n, i, rng)
    walk_cand = np.clip(
        snapshot + params.beta * scale * (eps < pa_t) * (snapshot[js] - snapshot[ks]),
        bounds.lower,
        bounds.upper,
    )
    for i in range(n):
        value = _evaluate(problem, walk_cand[i], state.iteration)
        if value < fitness[i]:
            positions[i] = walk_cand[i]
            fitness[i] = value

    population = Population(positions, fitness)
    iteration = state.iteration + 1
    state.best_trace.append((iteration, float(population.fitness[population.best])))
    return SearchState(population, iteration, state.best_trace, rng, gate)


def _evaluate(problem: ObjectiveProblem, x: np.ndarray, iteration: int) -> float:
    try:
        return problem.evaluate(x)
    except EvaluationError as err:
        if err.iteration is None:
            raise EvaluationError(err.vector, err.value, iteration) from None
        raise


def cs_run(problem: ObjectiveProblem, params: CsParams) -> RunResult:
    """Run the full loop from a fresh seeded population.

    Total objective evaluations are exactly ``n + 2 * n * max_iterations``:
    n for initialization plus 2n per iteration.  The returned trace holds
    the best fitness after initialization (iteration 0) and after each
    iteration, and is non-increasing.
    """
    if params.variant.kind == "binary":
        raise ContractError(
            "binary variant runs operate on bit-vector problems; use binary_cs_run"
        )
    counted = _CountingProblem(problem)
    rng = RngStream(params.seed)
    population = init_population(counted, params.n, rng)
    gate = make_gate_source(params.variant, rng)
    trace = [(0, float(population.fitness[population.best]))]
    state = SearchState(population, 0, trace, rng, gate)

    schedule = params.variant.schedule if params.variant.kind == "self_adaptive" else None
    total = params.max_iterations
    for t in range(total):
        if schedule is not None:
            pa_t, alpha_t = adaptive_params(t, total, schedule)
            state = cs_step(state, counted, params, pa=pa_t, alpha=alpha_t)
        else:
            state = cs_step(state, counted, params)

    return RunResult(
        best=best_of(state.population),
        evaluations=counted.count,
        trace=tuple(state.best_trace),
        params=params,
    )


class _CountingProblem:
    """Wraps a problem so every evaluate() call is tallied."""

    __slots__ = ("_problem", "count")

    def __init__(self, problem: ObjectiveProblem):
        self._problem = problem
        self.count = 0

    @property
    def dimension(self) -> int:
        return self._problem.dimension

    @property
    def bounds(self):
        return self._problem.bounds

    def evaluate(self, x: np.ndarray) -> float:
        self.count += 1
        return self._problem.evaluate(x)
