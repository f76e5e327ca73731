"""Core building blocks: RNG streams, bounds, problems, populations.

Determinism contract
--------------------
Every stochastic component in the package draws from an :class:`RngStream`,
a thin wrapper around numpy's counter-based Philox generator.  Streams are
split with :meth:`RngStream.derive`, which hashes a string label into a
spawn key, so independently derived streams never overlap and the draw
sequence of one component cannot be perturbed by adding draws to another.
There is no global RNG state anywhere in the package.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np


class ContractError(ValueError):
    """Raised when arguments violate a documented precondition."""


class EvaluationError(RuntimeError):
    """Raised when an objective returns a non-finite value.

    Carries the offending input vector, the bad value, and (when raised
    from inside a search loop) the iteration index at which it happened.
    """

    def __init__(self, vector, value, iteration: int | None = None):
        self.vector = np.asarray(vector, dtype=float).copy()
        self.value = value
        self.iteration = iteration
        where = "" if iteration is None else f" at iteration {iteration}"
        super().__init__(
            f"objective returned non-finite value {value!r}{where} "
            f"for input {np.array2string(self.vector, precision=6)}"
        )


def _label_to_spawn_key(label: str) -> tuple[int, ...]:
    """Hash a string label into a stable 4-word spawn key."""
    digest = hashlib.sha256(label.encode("utf-8")).digest()
    return tuple(int.from_bytes(digest[i : i + 8], "little") for i in (0, 8, 16, 24))


class RngStream:
    """Deterministic random stream with stable, label-based splitting.

    Two streams created with the same seed produce identical draw
    sequences; ``derive(label)`` produces a child stream that is
    statistically independent of the parent and of children derived
    under any other label.
    """

    __slots__ = ("seed", "_path", "_gen")

    def __init__(self, seed: int, _path: tuple[tuple[int, ...], ...] = ()):
        if not isinstance(seed, (int, np.integer)) or isinstance(seed, bool):
            raise ContractError(f"seed must be an integer, got {seed!r}")
        if seed < 0:
            raise ContractError(f"seed must be non-negative, got {seed}")
        self.seed = int(seed)
        self._path = _path
        keys: tuple[int, ...] = tuple(w for part in _path for w in part)
        seq = np.random.SeedSequence(self.seed, spawn_key=keys)
        self._gen = np.random.Generator(np.random.Philox(seq))

    def derive(self, label: str) -> "RngStream":
        """Return an independent child stream keyed by ``label``.

        Deriving the same label from equal streams always yields equal
        streams, regardless of how many draws the parent has made.
        """
        if not label:
            raise ContractError("derive label must be a non-empty string")
        return RngStream(self.seed, self._path + (_label_to_spawn_key(label),))

    def clone(self) -> "RngStream":
        """Return a stream that will replay this stream's future draws."""
        other = RngStream(self.seed, self._path)
        other._gen.bit_generator.state = self._gen.bit_generator.state
        return other

    # -- draw primitives ---------------------------------------------------

    def uniform(self, low: float = 0.0, high: float = 1.0, size=None):
        return self._gen.uniform(low, high, size)

    def normal(self, loc: float = 0.0, scale: float = 1.0, size=None):
        return self._gen.normal(loc, scale, size)

    def integers(self, low: int, high: int, size=None):
        return self._gen.integers(low, high, size=size)

    def permutation(self, n: int) -> np.ndarray:
        return self._gen.permutation(n)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"RngStream(seed={self.seed}, splits={len(self._path)})"


@dataclass(frozen=True)
class Bounds:
    """Axis-aligned box constraints, one (lower, upper) pair per coordinate."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lo = np.atleast_1d(np.asarray(self.lower, dtype=float))
        hi = np.atleast_1d(np.asarray(self.upper, dtype=float))
        if lo.ndim != 1 or hi.ndim != 1 or lo.shape != hi.shape:
            raise ContractError("bounds arrays must be 1-D and of equal length")
        if lo.size == 0:
            raise ContractError("bounds must have at least one coordinate")
        if not np.all(np.isfinite(lo)) or not np.all(np.isfinite(hi)):
            raise ContractError("bounds must be finite")
        if not np.all(lo < hi):
            bad = int(np.argmin(hi - lo))
            raise ContractError(
                f"lower bound must be strictly below upper bound "
                f"(coordinate {bad}: {lo[bad]} >= {hi[bad]})"
            )
        lo.flags.writeable = False
        hi.flags.writeable = False
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @classmethod
    def cube(cls, low: float, high: float, dimension: int) -> "Bounds":
        """Same (low, high) interval replicated over ``dimension`` axes."""
        if dimension < 1:
            raise ContractError(f"dimension must be >= 1, got {dimension}")
        return cls(np.full(dimension, low), np.full(dimension, high))

    @property
    def dimension(self) -> int:
        return self.lower.size

    @property
    def span(self) -> np.ndarray:
        return self.upper - self.lower

    def contains(self, x: np.ndarray) -> bool:
        x = np.asarray(x, dtype=float)
        if x.shape != self.lower.shape:
            return False
        return bool(np.all(x >= self.lower) and np.all(x <= self.upper))


def clamp(bounds: Bounds, x: np.ndarray) -> np.ndarray:
    """Project ``x`` onto the box, coordinate by coordinate.

    Values inside the box pass through unchanged; out-of-range values are
    snapped to the nearest face.  The result is always a fresh array.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != bounds.lower.shape:
        raise ContractError(
            f"vector has dimension {x.shape}, bounds expect {bounds.lower.shape}"
        )
    return np.clip(x, bounds.lower, bounds.upper)


@dataclass(frozen=True)
class ObjectiveProblem:
    """A scalar minimization problem over a bounded box."""

    dimension: int
    bounds: Bounds
    objective: Callable[[np.ndarray], float]

    def __post_init__(self):
        if self.dimension < 1:
            raise ContractError(f"dimension must be >= 1, got {self.dimension}")
        if self.bounds.dimension != self.dimension:
            raise ContractError(
                f"bounds dimension {self.bounds.dimension} does not match "
                f"problem dimension {self.dimension}"
            )

    def evaluate(self, x: np.ndarray) -> float:
        """Evaluate the objective; non-finite results raise EvaluationError."""
        value = float(self.objective(x))
        if not math.isfinite(value):
            raise EvaluationError(x, value)
        return value


@dataclass
class Nest:
    """One candidate solution: a position and its cached fitness."""

    position: np.ndarray
    fitness: float

    def copy(self) -> "Nest":
        return Nest(self.position.copy(), self.fitness)


class Population:
    """A fixed-size set of nests stored as contiguous arrays.

    ``positions`` has shape (n, dimension) and ``fitness`` shape (n,);
    row i of each belongs to nest i.  ``best`` is the index of the
    current minimum-fitness nest (lowest index on ties).
    """

    __slots__ = ("positions", "fitness", "best")

    def __init__(self, positions: np.ndarray, fitness: np.ndarray, best: int | None = None):
        positions = np.asarray(positions, dtype=float)
        fitness = np.asarray(fitness, dtype=float)
        if positions.ndim != 2 or fitness.ndim != 1 or positions.shape[0] != fitness.shape[0]:
            raise ContractError("positions must be (n, d) and fitness (n,) with matching n")
        if positions.shape[0] < 2:
            raise ContractError("population needs at least two nests")
        self.positions = positions
        self.fitness = fitness
        self.best = int(np.argmin(fitness)) if best is None else int(best)

    @property
    def size(self) -> int:
        return self.positions.shape[0]

    def __len__(self) -> int:
        return self.size

    def nest(self, i: int) -> Nest:
        return Nest(self.positions[i].copy(), float(self.fitness[i]))

    def __iter__(self) -> Iterator[Nest]:
        return (self.nest(i) for i in range(self.size))

    def copy(self) -> "Population":
        return Population(self.positions.copy(), self.fitness.copy(), self.best)


def init_population(problem: ObjectiveProblem, n: int, rng: RngStream) -> Population:
    """Draw n positions uniformly inside the problem box and evaluate them.

    Consumes exactly one (n, dimension) uniform block from ``rng`` and
    performs exactly n objective evaluations.
    """
    if n < 2:
        raise ContractError(f"population size must be >= 2, got {n}")
    u = rng.uniform(size=(n, problem.dimension))
    positions = problem.bounds.lower + u * problem.bounds.span
    fitness = np.array([problem.evaluate(positions[i]) for i in range(n)])
    return Population(positions, fitness)


def best_of(population: Population) -> Nest:
    """Return (a copy of) the minimum-fitness nest, lowest index on ties."""
    if population.size == 0:
        raise ContractError("population is empty")
    return population.nest(population.best)


def pick_distinct_pair(n: int, rng: RngStream) -> tuple[int, int]:
    """Pick an ordered pair of distinct indices uniformly from {0..n-1}.

    Implemented as the first two entries of a random permutation, so all
    n*(n-1) ordered pairs are equally likely.
    """
    if n < 2:
        raise ContractError(f"need at least 2 indices to pick a pair, got n={n}")
    perm = rng.permutation(n)
    return int(perm[0]), int(perm[1])
