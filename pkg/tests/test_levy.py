"""Heavy-tailed step sampler and Hill tail-exponent estimator."""

import math
import time

import numpy as np
import pytest

from cuckoo_opt import (
    ContractError,
    LevyParams,
    RngStream,
    mantegna_sigma,
    sample_levy_vector,
    tail_exponent_estimate,
)
from cuckoo_opt.levy import sample_levy_matrix


class TestMantegnaSigma:
    def test_lam_one_is_exactly_one(self):
        # Gamma(2) * sin(pi/2) / (Gamma(1) * 1 * 2^0) = 1
        assert mantegna_sigma(1.0) == pytest.approx(1.0, rel=1e-15)

    def test_frozen_value_at_default_exponent(self):
        assert mantegna_sigma(1.5) == pytest.approx(0.6965745025576967, rel=1e-12)

    def test_direct_formula_agreement(self):
        # Independent recomputation straight from the defining expression.
        for lam in (0.5, 0.8, 1.2, 1.7, 1.99):
            num = math.gamma(1 + lam) * math.sin(math.pi * lam / 2)
            den = math.gamma((1 + lam) / 2) * lam * 2 ** ((lam - 1) / 2)
            assert mantegna_sigma(lam) == pytest.approx((num / den) ** (1 / lam), rel=1e-14)

    def test_domain_edges(self):
        mantegna_sigma(0.3)
        mantegna_sigma(1.99)
        for bad in (0.29, 2.0, 0.0, -1.0):
            with pytest.raises(ContractError):
                mantegna_sigma(bad)


class TestLevyParams:
    def test_sigma_filled_in(self):
        p = LevyParams(1.5)
        assert p.sigma_u == pytest.approx(mantegna_sigma(1.5), rel=1e-15)

    def test_consistent_sigma_accepted(self):
        LevyParams(1.2, mantegna_sigma(1.2))

    def test_inconsistent_sigma_rejected(self):
        with pytest.raises(ContractError):
            LevyParams(1.2, 0.5)

    def test_bad_lam_rejected(self):
        with pytest.raises(ContractError):
            LevyParams(2.5)


class TestSampler:
    def test_shapes(self):
        rng = RngStream(0)
        assert sample_levy_vector(rng, LevyParams(1.5), 7).shape == (7,)
        assert sample_levy_matrix(rng, LevyParams(1.5), (4, 3)).shape == (4, 3)

    def test_dimension_validation(self):
        with pytest.raises(ContractError):
            sample_levy_vector(RngStream(0), LevyParams(1.5), 0)

    def test_deterministic(self):
        a = sample_levy_vector(RngStream(5), LevyParams(1.5), 100)
        b = sample_levy_vector(RngStream(5), LevyParams(1.5), 100)
        assert np.array_equal(a, b)

    def test_draw_discipline_two_normal_blocks(self):
        # The sampler must consume exactly a numerator block then a
        # denominator block; replay the raw draws and recompute by hand.
        params = LevyParams(1.5)
        rng = RngStream(21)
        probe = rng.clone()
        steps = sample_levy_matrix(rng, params, (6, 2))
        u = probe.normal(0.0, params.sigma_u, size=(6, 2))
        v = probe.normal(0.0, 1.0, size=(6, 2))
        expected = u / np.maximum(np.abs(v), np.finfo(float).tiny) ** (1.0 / params.lam)
        assert np.array_equal(steps, expected)
        # and nothing beyond those two blocks was consumed
        assert np.array_equal(rng.uniform(size=5), probe.uniform(size=5))

    def test_heavy_tail_produces_outliers(self):
        s = np.abs(sample_levy_vector(RngStream(3), LevyParams(1.2), 200_000))
        assert np.median(s) < 5.0
        assert s.max() > 1_000.0  # rare huge jumps are the point


class TestHillEstimator:
    def test_exact_pareto_quantile_grid(self):
        # Deterministic oracle: plugging the exact quantiles of a Pareto
        # law with tail exponent lam into the estimator must recover lam
        # closely (no sampling noise at all).
        for lam in (0.8, 1.5, 1.8):
            u = (np.arange(1, 200_001) - 0.5) / 200_000
            samples = (1.0 - u) ** (-1.0 / lam)
            est = tail_exponent_estimate(samples, 2_000)
            assert est == pytest.approx(lam, rel=0.02)

    def test_recovers_sampler_exponent(self):
        samples = sample_levy_vector(RngStream(17), LevyParams(1.5), 400_000)
        est = tail_exponent_estimate(samples, 4_000)
        assert 1.35 <= est <= 1.65

    def test_thin_tails_give_large_estimate(self):
        gaussian = RngStream(2).normal(size=400_000)
        assert tail_exponent_estimate(gaussian, 4_000) > 2.5

    def test_k_validation(self):
        samples = RngStream(0).normal(size=1000)
        with pytest.raises(ContractError):
            tail_exponent_estimate(samples, 9)
        with pytest.raises(ContractError):
            tail_exponent_estimate(samples, 1000)

    def test_degenerate_samples_rejected(self):
        with pytest.raises(ContractError):
            tail_exponent_estimate(np.ones(1000), 50)

    def test_zeros_are_ignored(self):
        u = (np.arange(1, 50_001) - 0.5) / 50_000
        samples = np.concatenate([np.zeros(1000), (1.0 - u) ** (-1.0 / 1.5)])
        est = tail_exponent_estimate(samples, 500)
        assert est == pytest.approx(1.5, rel=0.05)

    def test_runtime_on_large_sample(self):
        samples = sample_levy_vector(RngStream(8), LevyParams(1.5), 1_000_000)
        start = time.perf_counter()
        tail_exponent_estimate(samples, 10_000)
        assert time.perf_counter() - start < 2.0
