"""Heavy-tailed step sampling and tail diagnostics.

Steps are drawn with Mantegna's method: ``step = u / |v|**(1/lam)`` where
``u ~ N(0, sigma_u**2)`` and ``v ~ N(0, 1)``.  With

    sigma_u = [ Gamma(1+lam) * sin(pi*lam/2)
                / (Gamma((1+lam)/2) * lam * 2**((lam-1)/2)) ] ** (1/lam)

the resulting distribution has a power-law tail P(|step| > s) ~ s**(-lam),
which is what gives the search its occasional long jumps.  The exponent can
be checked empirically with :func:`tail_exponent_estimate` (a Hill
estimator over the largest order statistics).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import ContractError, RngStream

# Mantegna's sigma formula is numerically sensible only on this range; at
# lam = 2 the sin factor vanishes and below ~0.3 the tails are so heavy
# that float64 overflows in a handful of draws.
LAM_MIN = 0.3
LAM_MAX = 1.99


def mantegna_sigma(lam: float) -> float:
    """Scale of the numerator Gaussian in Mantegna's sampler."""
    if not (LAM_MIN <= lam <= LAM_MAX):
        raise ContractError(
            f"tail exponent lam must be within [{LAM_MIN}, {LAM_MAX}], got {lam}"
        )
    num = math.gamma(1.0 + lam) * math.sin(math.pi * lam / 2.0)
    den = math.gamma((1.0 + lam) / 2.0) * lam * 2.0 ** ((lam - 1.0) / 2.0)
    return (num / den) ** (1.0 / lam)


@dataclass(frozen=True)
class LevyParams:
    """Tail exponent plus its derived Mantegna scale."""

    lam: float
    sigma_u: float = float("nan")

    def __post_init__(self):
        sigma = mantegna_sigma(self.lam)  # also validates lam
        if math.isnan(self.sigma_u):
            object.__setattr__(self, "sigma_u", sigma)
        elif not math.isclose(self.sigma_u, sigma, rel_tol=1e-12):
            raise ContractError(
                f"sigma_u={self.sigma_u} is inconsistent with lam={self.lam} "
                f"(expected {sigma})"
            )


def sample_levy_matrix(rng: RngStream, params: LevyParams, shape: tuple[int, ...]) -> np.ndarray:
    """Draw a block of heavy-tailed steps in one batched call.

    Consumes exactly two normal blocks of ``shape`` from ``rng`` (numerators
    first, then denominators).  Denominator values that round to exactly
    zero are replaced by the smallest positive normal float, which keeps
    the draw count fixed without affecting the distribution measurably.
    """
    u = rng.normal(0.0, params.sigma_u, size=shape)
    v = rng.normal(0.0, 1.0, size=shape)
    av = np.abs(v)
    # P(v == 0.0) is ~1e-300 per draw, but a zero would poison the whole run.
    np.maximum(av, np.finfo(float).tiny, out=av)
    return u / av ** (1.0 / params.lam)


def sample_levy_vector(rng: RngStream, params: LevyParams, d: int) -> np.ndarray:
    """Draw one d-dimensional heavy-tailed step vector."""
    if d < 1:
        raise ContractError(f"dimension must be >= 1, got {d}")
    return sample_levy_matrix(rng, params, (d,))


def tail_exponent_estimate(samples: np.ndarray, k: int) -> float:
    """Hill estimate of the power-law tail exponent of ``|samples|``.

    Uses the k largest magnitudes:  lam_hat = k / sum_{i<=k} ln(x_(i) / x_(k+1))
    where x_(1) >= x_(2) >= ... are descending order statistics.  Reasonable
    only when k is small relative to the sample count (the estimate is a
    tail property) and large enough to average out noise, hence k >= 10.
    """
    a = np.abs(np.asarray(samples, dtype=float).ravel())
    if k < 10:
        raise ContractError(f"k must be >= 10 for a stable estimate, got {k}")
    a = a[a > 0.0]
    if a.size <= k:
        raise ContractError(
            f"need more than k={k} positive-magnitude samples, have {a.size}"
        )
    # Only the top k+1 magnitudes matter; partition instead of a full sort.
    top = np.partition(a, a.size - (k + 1))[a.size - (k + 1):]
    top = np.sort(top)[::-1]
    denom = float(np.sum(np.log(top[:k] / top[k])))
    if denom <= 0.0:
        raise ContractError("degenerate samples: top magnitudes are all equal")
    return k / denom
