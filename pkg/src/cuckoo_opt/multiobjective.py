"""Pareto-based multiobjective search.

The loop reuses the two-phase move structure of the scalar search, but
selection works on objective vectors: a candidate replaces a nest when it
dominates it, is discarded when dominated, and wins a fair coin flip when
the two are incomparable.  Every evaluated point is offered to a bounded
:class:`ParetoArchive`, which keeps a mutually non-dominated set and, when
over capacity, evicts from the most crowded region of objective space.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .core import Bounds, ContractError, EvaluationError, RngStream
from .levy import sample_levy_matrix
from .variants import adaptive_params, make_gate_source


def dominates(a: np.ndarray, b: np.ndarray) -> bool:
    """Pareto dominance for minimization: a <= b everywhere, < somewhere."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.ndim != 1 or a.shape != b.shape:
        raise ContractError(
            f"objective vectors must be 1-D and of equal length, got {a.shape} and {b.shape}"
        )
    return bool(np.all(a <= b) and np.any(a < b))


def nondominated_filter(points: Sequence[np.ndarray]) -> list[np.ndarray]:
    """Return exactly the points of the input no other point dominates.

    Input order is preserved; duplicates of a non-dominated vector are all
    kept (equal vectors never dominate each other).
    """
    pts = [np.asarray(p, dtype=float) for p in points]
    if not pts:
        return []
    if any(p.ndim != 1 or p.shape != pts[0].shape for p in pts):
        raise ContractError("all objective vectors must be 1-D and of equal length")
    stacked = np.stack(pts)
    le = np.all(stacked[:, None, :] <= stacked[None, :, :], axis=-1)
    lt = np.any(stacked[:, None, :] < stacked[None, :, :], axis=-1)
    dominated = np.any(le & lt, axis=0)
    return [pts[i].copy() for i in range(len(pts)) if not dominated[i]]


class ParetoArchive:
    """Bounded store of mutually non-dominated (position, objectives) pairs.

    Inserting a dominated candidate is a no-op; an accepted candidate
    expels every member it dominates.  If the archive then exceeds its
    capacity, the member with the smallest nearest-neighbour distance in
    min-max-normalized objective space is evicted, which trims the densest
    part of the front first.

    Internally the archive keeps preallocated (capacity+1)-row buffers and
    a size counter; the search loop offers one point per objective
    evaluation, so insert cost dominates multiobjective run time.
    """

    __slots__ = ("capacity", "_size", "_pos_buf", "_obj_buf")

    def __init__(self, capacity: int):
        if capacity < 1:
            raise ContractError(f"archive capacity must be >= 1, got {capacity}")
        self.capacity = int(capacity)
        self._size = 0
        self._pos_buf: np.ndarray | None = None
        self._obj_buf: np.ndarray | None = None

    def __len__(self) -> int:
        return self._size

    @property
    def entries(self) -> list[tuple[np.ndarray, np.ndarray]]:
        """Snapshot of the archive contents as (position, objectives) pairs."""
        return [
            (self._pos_buf[i].copy(), self._obj_buf[i].copy()) for i in range(self._size)
        ]

    def positions_array(self) -> np.ndarray:
        if self._size == 0:
            return np.empty((0, 0))
        return self._pos_buf[: self._size].copy()

    def objectives_array(self) -> np.ndarray:
        if self._size == 0:
            return np.empty((0, 0))
        return self._obj_buf[: self._size].copy()

    def insert(self, position: np.ndarray, objectives: np.ndarray) -> bool:
        """Offer one point; returns True if it was accepted."""
        f = np.asarray(objectives, dtype=float)
        if f.ndim != 1 or f.size < 2:
            raise ContractError(
                f"objective vector must be 1-D with at least two entries, got shape {f.shape}"
            )
        if not np.all(np.isfinite(f)):
            raise ContractError(f"objective vector must be finite, got {f}")
        if self._obj_buf is not None and f.size != self._obj_buf.shape[1]:
            raise ContractError(
                f"objective vector length {f.size} does not match archive "
                f"width {self._obj_buf.shape[1]}"
            )
        return self._insert_fast(np.asarray(position, dtype=float), f)

    def _insert_fast(self, position: np.ndarray, f: np.ndarray) -> bool:
        # Hot path: `f` is trusted to be a finite float vector of the right
        # width.  Both arguments are copied into the buffers, never aliased.
        if self._obj_buf is None:
            self._pos_buf = np.empty((self.capacity + 1, position.size))
            self._obj_buf = np.empty((self.capacity + 1, f.size))
        size = self._size
        if size:
            members = self._obj_buf[:size]
            k = f.size
            le_count = (members <= f).sum(axis=1)
            eq_count = (members == f).sum(axis=1)
            # A member dominates f iff it is <= everywhere and < somewhere.
            if bool(((le_count == k) & (eq_count < k)).any()):
                return False
            # f dominates a member iff the member is >= everywhere (no
            # strictly-smaller coordinate) and > somewhere.
            beaten = (le_count == eq_count) & (le_count < k)
            if bool(beaten.any()):
                keep = ~beaten
                kept = int(keep.sum())
                self._obj_buf[:kept] = members[keep]
                self._pos_buf[:kept] = self._pos_buf[:size][keep]
                size = kept
        self._obj_buf[size] = f
        self._pos_buf[size] = position
        self._size = size + 1
        if self._size > self.capacity:
            self._evict_most_crowded()
        return True

    def _evict_most_crowded(self) -> None:
        members = self._obj_buf[: self._size]
        if members.shape[1] == 2:
            # Mutual non-dominance makes the 2-D front a monotone staircase:
            # sorted by f0, both coordinate gaps grow with sort distance, so
            # each point's nearest neighbour is adjacent in the sort.
            order = np.argsort(members[:, 0], kind="stable")
            a = members[order, 0]
            b = members[order, 1]
            w0 = float(a[-1] - a[0]) or 1.0
            w1 = float(b[0] - b[-1]) or 1.0
            da = np.diff(a) / w0
            db = np.diff(b) / w1
            gap2 = da * da + db * db
            nn = np.empty(self._size)
            nn[0] = gap2[0]
            nn[-1] = gap2[-1]
            if self._size > 2:
                np.minimum(gap2[:-1], gap2[1:], out=nn[1:-1])
            victim = int(order[int(np.argmin(nn))])
        else:
            lo = members.min(axis=0)
            width = members.max(axis=0) - lo
            width[width == 0.0] = 1.0
            z = (members - lo) / width
            diff = z[:, None, :] - z[None, :, :]
            d2 = np.einsum("ijk,ijk->ij", diff, diff)
            np.fill_diagonal(d2, np.inf)
            victim = int(np.argmin(d2.min(axis=1)))
        # Close the gap by moving the last row into the vacated slot.
        last = self._size - 1
        if victim != last:
            self._obj_buf[victim] = self._obj_buf[last]
            self._pos_buf[victim] = self._pos_buf[last]
        self._size = last


def archive_insert(
    archive: ParetoArchive, position: np.ndarray, objectives: np.ndarray
) -> ParetoArchive:
    """Functional-style wrapper around :meth:`ParetoArchive.insert`."""
    archive.insert(position, objectives)
    return archive


def hypervolume_2d(front: Sequence[np.ndarray], ref: np.ndarray) -> float:
    """Area dominated by a 2-D front, measured against a reference point.

    Every front point must dominate ``ref``.  Computed as a sum of
    rectangular strips after sorting the non-dominated subset by the first
    objective, which is exact for two objectives.
    """
    ref = np.asarray(ref, dtype=float)
    if ref.shape != (2,):
        raise ContractError(f"reference point must have exactly 2 entries, got shape {ref.shape}")
    pts = [np.asarray(p, dtype=float) for p in front]
    if not pts:
        return 0.0
    for p in pts:
        if p.shape != (2,):
            raise ContractError(f"front points must be 2-D objective vectors, got shape {p.shape}")
        if not dominates(p, ref):
            raise ContractError(f"front point {p} does not dominate the reference {ref}")
    nd = np.unique(np.stack(nondominated_filter(pts)), axis=0)
    # Sorted by f1 ascending; non-domination makes f2 strictly descending.
    xs = np.append(nd[:, 0], ref[0])
    return float(np.sum(np.diff(xs) * (ref[1] - nd[:, 1])))


@dataclass(frozen=True)
class MultiObjectiveProblem:
    """Simultaneous minimization of several objectives over a bounded box."""

    dimension: int
    bounds: Bounds
    objectives: Callable[[np.ndarray], np.ndarray]
    n_objectives: int

    def __post_init__(self):
        if self.dimension < 1:
            raise ContractError(f"dimension must be >= 1, got {self.dimension}")
        if self.n_objectives < 2:
            raise ContractError(f"need at least 2 objectives, got {self.n_objectives}")
        if self.bounds.dimension != self.dimension:
            raise ContractError(
                f"bounds dimension {self.bounds.dimension} does not match "
                f"problem dimension {self.dimension}"
            )

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        values = np.asarray(self.objectives(x), dtype=float)
        if values.shape != (self.n_objectives,):
            raise ContractError(
                f"objectives returned shape {values.shape}, expected ({self.n_objectives},)"
            )
        if not np.all(np.isfinite(values)):
            raise EvaluationError(x, values)
        return values


def mo_cs_run(problem: MultiObjectiveProblem, params, capacity: int) -> ParetoArchive:
    """Run the multiobjective loop and return the final archive.

    Move generation and draw order match the scalar loop exactly (Lévy
    blocks, comparison targets, gate blocks, pair permutations); the only
    extra randomness is one uniform draw per incomparable comparison, used
    for the fair-coin replacement rule.  Evaluation count is the scalar
    loop's n + 2*n*max_iterations.
    """
    from .cuckoo import CsParams, _pair_avoiding  # late import avoids a cycle

    if not isinstance(problem, MultiObjectiveProblem):
        raise ContractError(f"problem must be a MultiObjectiveProblem, got {type(problem)!r}")
    if not isinstance(params, CsParams):
        raise ContractError(f"params must be CsParams, got {type(params)!r}")
    if params.variant.kind == "binary":
        raise ContractError("the binary variant does not apply to multiobjective runs")
    if capacity < 10:
        raise ContractError(f"archive capacity must be >= 10, got {capacity}")

    rng = RngStream(params.seed)
    bounds = problem.bounds
    n, d = params.n, problem.dimension
    u = rng.uniform(size=(n, d))
    positions = bounds.lower + u * bounds.span
    values = np.stack([problem.evaluate(positions[i]) for i in range(n)])

    archive = ParetoArchive(capacity)
    for i in range(n):
        archive._insert_fast(positions[i], values[i])

    gate = make_gate_source(params.variant, rng)
    schedule = params.variant.schedule if params.variant.kind == "self_adaptive" else None
    total = params.max_iterations

    for t in range(total):
        if schedule is not None:
            pa_t, alpha_t = adaptive_params(t, total, schedule)
        else:
            pa_t, alpha_t = params.pa, params.alpha
        alpha_vec = alpha_t * bounds.span

        steps = sample_levy_matrix(rng, params.levy, (n, d))
        levy_cand = np.clip(positions + alpha_vec * steps, bounds.lower, bounds.upper)
        targets = rng.integers(0, n, size=n)
        for i in range(n):
            cand = levy_cand[i]
            fc = _evaluate_mo(problem, cand, t)
            archive._insert_fast(cand, fc)
            m = int(targets[i])
            if _accept(fc, values[m], rng):
                positions[m] = cand
                values[m] = fc

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
            cand = walk_cand[i]
            fc = _evaluate_mo(problem, cand, t)
            archive._insert_fast(cand, fc)
            if _accept(fc, values[i], rng):
                positions[i] = cand
                values[i] = fc

    return archive


def _accept(candidate: np.ndarray, incumbent: np.ndarray, rng: RngStream) -> bool:
    """Dominating candidates always win, dominated ones never do, and
    incomparable pairs are settled by a fair coin from the run's stream."""
    # Objective vectors are short; plain float comparisons beat numpy here.
    below = above = False
    for c, g in zip(candidate.tolist(), incumbent.tolist()):
        if c < g:
            below = True
        elif c > g:
            above = True
    if below and not above:
        return True
    if above and not below:
        return False
    return bool(rng.uniform() < 0.5)


def _evaluate_mo(problem: MultiObjectiveProblem, x: np.ndarray, iteration: int) -> np.ndarray:
    try:
        return problem.evaluate(x)
    except EvaluationError as err:
        if err.iteration is None:
            raise EvaluationError(err.vector, err.value, iteration) from None
        raise
