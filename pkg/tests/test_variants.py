"""Variant machinery: chaotic maps, schedules, binary decoding, gate sources."""

import math

import numpy as np
import pytest

import cuckoo_opt.cuckoo as cuckoo_mod
from cuckoo_opt import (
    AdaptiveSchedule,
    BinaryProblem,
    ContractError,
    CsParams,
    RngStream,
    VariantConfig,
    adaptive_params,
    binarize,
    binary_cs_run,
    chaotic_next,
    chaotic_uniform,
    cs_run,
    transfer_sigmoid,
)
from cuckoo_opt.benchsuite import make_problem
from cuckoo_opt.variants import ChaoticGate, UniformGate, make_gate_source


class TestChaoticMaps:
    def test_logistic_point_values(self):
        assert chaotic_next("logistic", 0.25) == 0.75
        assert chaotic_next("logistic", 0.75) == 0.75  # fixed point
        assert chaotic_next("logistic", 0.5) == 1.0
        assert chaotic_next("logistic", 0.0) == 0.0

    def test_tent_point_values(self):
        assert chaotic_next("tent", 0.25) == 0.5
        assert chaotic_next("tent", 0.5) == 1.0
        assert chaotic_next("tent", 0.75) == 0.5
        assert chaotic_next("tent", 1.0) == 0.0

    def test_domain_validation(self):
        with pytest.raises(ContractError):
            chaotic_next("logistic", 1.5)
        with pytest.raises(ContractError):
            chaotic_next("logistic", -0.1)
        with pytest.raises(ContractError):
            chaotic_next("butterfly", 0.5)

    def test_orbits_stay_in_unit_interval(self):
        for kind in ("logistic", "tent"):
            x = 0.123
            for _ in range(2000):
                x = chaotic_next(kind, x)
                assert 0.0 <= x <= 1.0

    def test_chaotic_uniform_threads_state(self):
        draw, nxt = chaotic_uniform(0.2, "logistic")
        assert draw == 0.2
        assert nxt == chaotic_next("logistic", 0.2)

    def test_chaotic_uniform_rejects_degenerate_states(self):
        for bad in (0.0, 0.25, 0.5, 0.75, 1.0):
            with pytest.raises(ContractError):
                chaotic_uniform(bad, "logistic")

    def test_logistic_density_piles_up_at_the_edges(self):
        # The invariant density of the logistic map is arcsine-shaped:
        # mass near 0 and 1 far exceeds mass near the middle.
        x = 0.123
        draws = np.empty(100_000)
        for i in range(draws.size):
            draws[i], x = chaotic_uniform(x, "logistic")
        frac_low = float(np.mean(draws <= 0.1))
        frac_mid = float(np.mean((draws >= 0.45) & (draws <= 0.55)))
        assert 0.15 < frac_low < 0.26
        assert 0.04 < frac_mid < 0.09
        assert frac_low > 1.5 * frac_mid


class TestAdaptiveSchedule:
    def test_exact_endpoints(self):
        s = AdaptiveSchedule(pa_max=0.5, pa_min=0.05, alpha_max=0.1, alpha_min=0.001)
        assert adaptive_params(0, 100, s) == (0.5, 0.1)
        assert adaptive_params(100, 100, s) == (0.05, 0.001)

    def test_linear_pa_midpoint(self):
        s = AdaptiveSchedule(pa_max=0.5, pa_min=0.1, alpha_max=1.0, alpha_min=0.01)
        pa, _ = adaptive_params(50, 100, s)
        assert pa == pytest.approx(0.3, abs=1e-15)

    def test_geometric_alpha(self):
        s = AdaptiveSchedule(pa_max=0.5, pa_min=0.1, alpha_max=0.1, alpha_min=0.001)
        _, alpha = adaptive_params(50, 100, s)
        assert alpha == pytest.approx(0.1 * (0.001 / 0.1) ** 0.5, rel=1e-14)

    def test_monotone_decay(self):
        s = AdaptiveSchedule()
        pas, alphas = zip(*(adaptive_params(t, 50, s) for t in range(51)))
        assert all(a >= b for a, b in zip(pas, pas[1:]))
        assert all(a >= b for a, b in zip(alphas, alphas[1:]))
        assert all(a > 0 for a in alphas)

    def test_preconditions(self):
        s = AdaptiveSchedule()
        with pytest.raises(ContractError):
            adaptive_params(0, 0, s)
        with pytest.raises(ContractError):
            adaptive_params(-1, 10, s)
        with pytest.raises(ContractError):
            adaptive_params(11, 10, s)

    def test_schedule_validation(self):
        with pytest.raises(ContractError):
            AdaptiveSchedule(pa_max=0.1, pa_min=0.5)
        with pytest.raises(ContractError):
            AdaptiveSchedule(alpha_max=0.001, alpha_min=0.1)
        with pytest.raises(ContractError):
            AdaptiveSchedule(alpha_min=0.0, alpha_max=0.0)


class TestVariantConfig:
    def test_standard_default(self):
        v = VariantConfig()
        assert v.kind == "standard"
        assert v.chaotic_map is None and v.schedule is None and v.transfer is None

    def test_chaotic_defaults(self):
        v = VariantConfig.chaotic()
        assert v.chaotic_map == "logistic"
        assert v.chaotic_state == 0.7

    def test_binary_default_transfer(self):
        assert VariantConfig.binary().transfer == "sigmoid"

    def test_unknown_kind(self):
        with pytest.raises(ContractError):
            VariantConfig(kind="quantum")

    def test_stray_fields_rejected(self):
        with pytest.raises(ContractError):
            VariantConfig(kind="standard", chaotic_map="logistic")
        with pytest.raises(ContractError):
            VariantConfig(kind="chaotic", chaotic_map="logistic", schedule=AdaptiveSchedule())
        with pytest.raises(ContractError):
            VariantConfig(kind="binary", chaotic_state=0.3)

    def test_chaotic_state_validation(self):
        with pytest.raises(ContractError):
            VariantConfig.chaotic("logistic", 0.75)  # fixed point
        with pytest.raises(ContractError):
            VariantConfig.chaotic("tent", 0.5)  # collapses immediately
        with pytest.raises(ContractError):
            VariantConfig.chaotic("logistic", 0.0)

    def test_unknown_map_and_transfer(self):
        with pytest.raises(ContractError):
            VariantConfig.chaotic("henon", 0.4)
        with pytest.raises(ContractError):
            VariantConfig(kind="binary", transfer="tanh")

    def test_self_adaptive_requires_schedule(self):
        with pytest.raises(ContractError):
            VariantConfig(kind="self_adaptive")
        assert VariantConfig.self_adaptive().schedule == AdaptiveSchedule()


class TestGateSources:
    def test_uniform_gate_draws_from_stream(self):
        rng = RngStream(8)
        probe = rng.clone()
        gate = UniformGate(rng)
        block = gate.block((4, 3))
        assert np.array_equal(block, probe.uniform(size=(4, 3)))
        assert gate.draws == 12

    def test_chaotic_gate_is_the_map_orbit(self):
        gate = ChaoticGate("logistic", 0.37)
        block = gate.block((6,))
        x = 0.37
        for value in block:
            assert value == x
            x = chaotic_next("logistic", x)
        assert gate.draws == 6
        assert gate.state == x

    def test_chaotic_gate_survives_tent_collapse(self):
        # In float arithmetic the raw tent orbit hits exactly 0 within ~55
        # steps from most states; the gate's guard must keep it alive.
        gate = ChaoticGate("tent", 0.3)
        block = gate.block((10_000,))
        assert np.all(block > 0.0)
        assert np.all(block < 1.0)
        assert np.unique(block).size > 10  # still moving, not stuck

    def test_make_gate_source_dispatch(self):
        rng = RngStream(0)
        assert isinstance(make_gate_source(VariantConfig(), rng), UniformGate)
        assert isinstance(make_gate_source(VariantConfig.chaotic(), rng), ChaoticGate)
        gate = make_gate_source(VariantConfig.chaotic("tent", 0.3), rng)
        assert gate.map_kind == "tent" and gate.state == 0.3


class TestChaoticRunWiring:
    def test_gate_feeds_discovery_and_stream_feeds_the_rest(self, monkeypatch):
        drawn = {"uniform": 0}

        class CountingStream(RngStream):
            def uniform(self, low=0.0, high=1.0, size=None):
                out = super().uniform(low, high, size)
                drawn["uniform"] += int(np.size(out))
                return out

        captured = {}
        real = cuckoo_mod.make_gate_source

        def spy(variant, rng):
            gate = real(variant, rng)
            captured["gate"] = gate
            return gate

        monkeypatch.setattr(cuckoo_mod, "RngStream", CountingStream)
        monkeypatch.setattr(cuckoo_mod, "make_gate_source", spy)
        n, d, iters = 6, 3, 10
        params = CsParams(
            n=n, max_iterations=iters, seed=2, variant=VariantConfig.chaotic("logistic", 0.41)
        )
        cs_run(make_problem("sphere", d), params)
        assert isinstance(captured["gate"], ChaoticGate)
        assert captured["gate"].draws == 2 * n * d * iters
        assert drawn["uniform"] == n * d  # population init only

    def test_chaotic_run_deterministic(self):
        params = CsParams(n=8, max_iterations=30, seed=5, variant=VariantConfig.chaotic())
        r1 = cs_run(make_problem("sphere", 4), params)
        r2 = cs_run(make_problem("sphere", 4), params)
        assert r1.best.fitness == r2.best.fitness
        assert r1.trace == r2.trace


class TestTransferAndBinarize:
    def test_sigmoid_values(self):
        assert transfer_sigmoid(0.0) == 0.5
        assert float(transfer_sigmoid(2.0)) == pytest.approx(0.8807970779778823, rel=1e-12)
        assert float(transfer_sigmoid(-2.0)) == pytest.approx(1.0 - 0.8807970779778823, rel=1e-12)

    def test_sigmoid_is_monotone_and_saturates(self):
        v = np.linspace(-40.0, 40.0, 101)
        s = transfer_sigmoid(v)
        assert np.all(np.diff(s) >= 0)
        assert s[0] < 1e-15 and s[-1] > 1.0 - 1e-15

    def test_binarize_matches_probability(self):
        x = np.full(100_000, math.log(0.3 / 0.7))  # sigmoid == 0.3
        bits = binarize(x, RngStream(0))
        assert bits.dtype == bool
        assert abs(float(bits.mean()) - 0.3) < 0.006  # ~4 sigma band

    def test_binarize_deterministic(self):
        x = RngStream(1).normal(size=64)
        assert np.array_equal(binarize(x, RngStream(2)), binarize(x, RngStream(2)))


class TestBinaryRun:
    def test_requires_binary_variant(self):
        problem = BinaryProblem(8, lambda bits: float(bits.sum()))
        with pytest.raises(ContractError):
            binary_cs_run(problem, CsParams(n=4, max_iterations=2, seed=0))

    def test_best_bits_consistent_with_fitness(self):
        problem = make_problem("onemax", 12)
        params = CsParams(n=10, max_iterations=60, seed=3, variant=VariantConfig.binary())
        res = binary_cs_run(problem, params)
        assert res.best_bits is not None
        assert res.best.fitness == problem.objective(res.best_bits)
        assert res.best.fitness == res.trace[-1][1]
        assert res.params.variant.kind == "binary"

    def test_deterministic_and_monotone(self):
        problem = make_problem("onemax", 10)
        params = CsParams(n=8, max_iterations=40, seed=9, variant=VariantConfig.binary())
        r1 = binary_cs_run(problem, params)
        r2 = binary_cs_run(problem, params)
        assert np.array_equal(r1.best_bits, r2.best_bits)
        assert r1.trace == r2.trace
        best = [b for _, b in r1.trace]
        assert all(a >= b for a, b in zip(best, best[1:]))

    def test_evaluation_accounting(self):
        problem = make_problem("onemax", 6)
        params = CsParams(n=5, max_iterations=11, seed=0, variant=VariantConfig.binary())
        res = binary_cs_run(problem, params)
        assert res.evaluations == 5 + 2 * 5 * 11

    def test_solves_small_onemax(self):
        problem = make_problem("onemax", 8)
        params = CsParams(n=12, max_iterations=120, seed=1, variant=VariantConfig.binary())
        res = binary_cs_run(problem, params)
        assert res.best.fitness == 0.0
        assert res.best_bits.all()

    def test_dimension_validation(self):
        with pytest.raises(ContractError):
            BinaryProblem(0, lambda bits: 0.0)
