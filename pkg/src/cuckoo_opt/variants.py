"""Variant hooks for the core search loop.

Four variant kinds are supported:

* ``standard``      -- the plain loop, nothing substituted.
* ``chaotic``       -- the uniform draws that gate and scale discovery walks
                       are replaced by iterates of a chaotic map.
* ``self_adaptive`` -- discovery probability and step scale follow
                       deterministic schedules over the run.
* ``binary``        -- search runs in a continuous latent box and solutions
                       are decoded to bit vectors through a sigmoid transfer.

The chaotic substitution is deliberately narrow: population initialization,
Lévy step noise, and index draws stay on the seeded stream, so chaotic runs
remain reproducible and only the discovery-walk randomness changes character.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .core import Bounds, ContractError, Nest, ObjectiveProblem, RngStream

CHAOTIC_MAPS = ("logistic", "tent")

# States that are fixed points or collapse to one within a step or two.
_CHAOTIC_BAD_STATES = (0.0, 0.25, 0.5, 0.75, 1.0)

# Keep long chaotic orbits away from the absorbing edges: in float
# arithmetic the tent map drifts onto dyadic rationals and hits exactly
# zero after ~50 iterations, after which it would emit zeros forever.
_CHAOTIC_GUARD = 1e-3


def chaotic_next(map_kind: str, x: float) -> float:
    """One iterate of the named chaotic map on [0, 1]."""
    if not (0.0 <= x <= 1.0):
        raise ContractError(f"chaotic state must lie in [0, 1], got {x}")
    if map_kind == "logistic":
        return 4.0 * x * (1.0 - x)
    if map_kind == "tent":
        return 2.0 * x if x < 0.5 else 2.0 * (1.0 - x)
    raise ContractError(f"unknown chaotic map {map_kind!r}, expected one of {CHAOTIC_MAPS}")


def _check_chaotic_state(map_kind: str, state: float) -> None:
    if not (0.0 < state < 1.0) or any(state == bad for bad in _CHAOTIC_BAD_STATES):
        raise ContractError(
            f"chaotic state must lie strictly inside (0, 1) and away from "
            f"fixed points {_CHAOTIC_BAD_STATES}, got {state}"
        )
    if chaotic_next(map_kind, state) == state:
        raise ContractError(f"state {state} is a fixed point of the {map_kind} map")


def chaotic_uniform(state: float, map_kind: str) -> tuple[float, float]:
    """Return ``(draw, next_state)`` where the draw is the current state.

    The caller threads the state through successive calls; the sequence of
    draws is fully determined by the initial state.
    """
    _check_chaotic_state(map_kind, state)
    return state, chaotic_next(map_kind, state)


@dataclass(frozen=True)
class AdaptiveSchedule:
    """Endpoint pairs for the self-adaptive parameter schedules."""

    pa_max: float = 0.5
    pa_min: float = 0.05
    alpha_max: float = 0.1
    alpha_min: float = 0.001

    def __post_init__(self):
        if not (0.0 <= self.pa_min <= self.pa_max <= 1.0):
            raise ContractError(
                f"need 0 <= pa_min <= pa_max <= 1, got pa_min={self.pa_min}, pa_max={self.pa_max}"
            )
        if not (0.0 < self.alpha_min <= self.alpha_max):
            raise ContractError(
                f"need 0 < alpha_min <= alpha_max, got alpha_min={self.alpha_min}, "
                f"alpha_max={self.alpha_max}"
            )


def adaptive_params(t: int, t_max: int, schedule: AdaptiveSchedule) -> tuple[float, float]:
    """Scheduled (pa, alpha) at iteration t of t_max.

    pa decays linearly from pa_max to pa_min; alpha decays geometrically
    from alpha_max to alpha_min.  The endpoints are returned exactly at
    t=0 and t=t_max so long runs start and finish on the configured values.
    """
    if t_max < 1:
        raise ContractError(f"t_max must be >= 1, got {t_max}")
    if not (0 <= t <= t_max):
        raise ContractError(f"t must lie in [0, {t_max}], got {t}")
    if t == 0:
        return schedule.pa_max, schedule.alpha_max
    if t == t_max:
        return schedule.pa_min, schedule.alpha_min
    frac = t / t_max
    pa = schedule.pa_max - frac * (schedule.pa_max - schedule.pa_min)
    alpha = schedule.alpha_max * (schedule.alpha_min / schedule.alpha_max) ** frac
    return pa, alpha


@dataclass(frozen=True)
class VariantConfig:
    """Which variant the run uses, plus that variant's settings.

    Only the fields relevant to ``kind`` may be set; the constructor
    rejects mixed configurations so a config either is the standard loop
    or states exactly one deviation from it.
    """

    kind: str = "standard"
    chaotic_map: str | None = None
    chaotic_state: float | None = None
    schedule: AdaptiveSchedule | None = None
    transfer: str | None = None

    def __post_init__(self):
        kinds = ("standard", "chaotic", "self_adaptive", "binary")
        if self.kind not in kinds:
            raise ContractError(f"variant kind must be one of {kinds}, got {self.kind!r}")
        active = {
            "chaotic_map": self.chaotic_map,
            "chaotic_state": self.chaotic_state,
            "schedule": self.schedule,
            "transfer": self.transfer,
        }
        allowed = {
            "standard": (),
            "chaotic": ("chaotic_map", "chaotic_state"),
            "self_adaptive": ("schedule",),
            "binary": ("transfer",),
        }[self.kind]
        stray = [name for name, value in active.items() if value is not None and name not in allowed]
        if stray:
            raise ContractError(
                f"fields {stray} do not apply to variant kind {self.kind!r}"
            )
        if self.kind == "chaotic":
            object.__setattr__(self, "chaotic_map", self.chaotic_map or "logistic")
            object.__setattr__(
                self, "chaotic_state", 0.7 if self.chaotic_state is None else float(self.chaotic_state)
            )
            if self.chaotic_map not in CHAOTIC_MAPS:
                raise ContractError(
                    f"chaotic_map must be one of {CHAOTIC_MAPS}, got {self.chaotic_map!r}"
                )
            _check_chaotic_state(self.chaotic_map, self.chaotic_state)
        elif self.kind == "self_adaptive":
            if self.schedule is None:
                raise ContractError("self_adaptive variant requires a schedule")
        elif self.kind == "binary":
            object.__setattr__(self, "transfer", self.transfer or "sigmoid")
            if self.transfer != "sigmoid":
                raise ContractError(f"unknown transfer {self.transfer!r}, only 'sigmoid' is available")

    @classmethod
    def standard(cls) -> "VariantConfig":
        return cls()

    @classmethod
    def chaotic(cls, map_kind: str = "logistic", state: float = 0.7) -> "VariantConfig":
        return cls(kind="chaotic", chaotic_map=map_kind, chaotic_state=state)

    @classmethod
    def self_adaptive(cls, schedule: AdaptiveSchedule | None = None) -> "VariantConfig":
        return cls(kind="self_adaptive", schedule=schedule or AdaptiveSchedule())

    @classmethod
    def binary(cls) -> "VariantConfig":
        return cls(kind="binary", transfer="sigmoid")


# -- gate sources ----------------------------------------------------------
#
# The discovery walk consumes two uniform blocks per iteration (the gate
# epsilons and the walk scales).  A "gate source" abstracts where those
# blocks come from, which is the single seam the chaotic variant replaces.


class UniformGate:
    """Gate/scale blocks drawn from the run's seeded stream."""

    __slots__ = ("rng", "draws")

    def __init__(self, rng: RngStream):
        self.rng = rng
        self.draws = 0

    def block(self, shape: tuple[int, ...]) -> np.ndarray:
        self.draws += int(np.prod(shape))
        return self.rng.uniform(size=shape)


class ChaoticGate:
    """Gate/scale blocks produced by iterating a chaotic map.

    The orbit is clamped away from [0, 1] edges (guard band 1e-3): in
    floating point both maps can fall onto an absorbing point (exact 0),
    and a stuck orbit would silently disable discovery for the rest of
    the run.
    """

    __slots__ = ("map_kind", "state", "draws")

    def __init__(self, map_kind: str, state: float):
        _check_chaotic_state(map_kind, state)
        self.map_kind = map_kind
        self.state = state
        self.draws = 0

    def block(self, shape: tuple[int, ...]) -> np.ndarray:
        count = int(np.prod(shape))
        out = np.empty(count)
        s = self.state
        if self.map_kind == "logistic":
            for i in range(count):
                out[i] = s
                s = 4.0 * s * (1.0 - s)
                if not (_CHAOTIC_GUARD < s < 1.0 - _CHAOTIC_GUARD):
                    s = min(max(s, _CHAOTIC_GUARD), 1.0 - _CHAOTIC_GUARD)
        else:
            for i in range(count):
                out[i] = s
                s = 2.0 * s if s < 0.5 else 2.0 * (1.0 - s)
                if not (_CHAOTIC_GUARD < s < 1.0 - _CHAOTIC_GUARD):
                    s = min(max(s, _CHAOTIC_GUARD), 1.0 - _CHAOTIC_GUARD)
        self.state = s
        self.draws += count
        return out.reshape(shape)


GateSource = UniformGate | ChaoticGate


def make_gate_source(variant: VariantConfig, rng: RngStream) -> GateSource:
    """Build the discovery-walk randomness source for a run."""
    if variant.kind == "chaotic":
        return ChaoticGate(variant.chaotic_map, variant.chaotic_state)
    return UniformGate(rng)


# -- binary decoding -------------------------------------------------------


def transfer_sigmoid(v):
    """Logistic transfer mapping a latent coordinate to a bit probability."""
    return 1.0 / (1.0 + np.exp(-np.asarray(v, dtype=float)))


def binarize(x: np.ndarray, rng: RngStream) -> np.ndarray:
    """Sample a bit vector: bit d is 1 with probability sigmoid(x[d])."""
    x = np.asarray(x, dtype=float)
    return rng.uniform(size=x.shape) < transfer_sigmoid(x)


@dataclass(frozen=True)
class BinaryProblem:
    """A minimization problem over fixed-length bit vectors."""

    dimension: int
    objective: Callable[[np.ndarray], float]

    def __post_init__(self):
        if self.dimension < 1:
            raise ContractError(f"dimension must be >= 1, got {self.dimension}")


# Latent box for binary search: sigmoid(+/-6) is within 2.5e-3 of saturation,
# so the box covers effectively the whole bit-probability range.
_BINARY_LATENT_LIMIT = 6.0


def binary_cs_run(problem: BinaryProblem, params) -> "RunResult":  # noqa: F821
    """Run the search in a continuous latent box over bit-vector decodings.

    Each latent evaluation decodes to a bit vector with its own derived
    stream (so decode noise cannot shift the main loop's draws) and scores
    that vector.  The reported best is the bit vector that first achieved
    the minimum fitness seen anywhere during the run, together with the
    latent point that produced it.
    """
    from .cuckoo import cs_run  # local import to avoid a module cycle

    if params.variant.kind != "binary":
        raise ContractError(
            f"binary_cs_run requires a binary variant config, got kind={params.variant.kind!r}"
        )

    decode_rng = RngStream(params.seed).derive("binary-decode")
    tracker: dict = {"fitness": math.inf, "latent": None, "bits": None}

    def latent_objective(x: np.ndarray) -> float:
        bits = binarize(x, decode_rng)
        value = float(problem.objective(bits))
        if math.isfinite(value) and value < tracker["fitness"]:
            tracker["fitness"] = value
            tracker["latent"] = x.copy()
            tracker["bits"] = bits.copy()
        return value

    latent_problem = ObjectiveProblem(
        problem.dimension,
        Bounds.cube(-_BINARY_LATENT_LIMIT, _BINARY_LATENT_LIMIT, problem.dimension),
        latent_objective,
    )
    # The latent-space loop itself is the standard one; "binary" only says
    # how evaluations are decoded, which the closure above handles.
    result = cs_run(latent_problem, replace(params, variant=VariantConfig()))
    # Strict greedy selection never lets the population minimum regress, so
    # the tracker's minimum always equals the loop's reported best fitness.
    best = Nest(tracker["latent"], tracker["fitness"])
    return replace(result, best=best, best_bits=tracker["bits"], params=params)
