"""Statistical primitives used at interim and final analysis.

Normal and Beta distribution functions come from :mod:`scipy.special`;
the Dunnett integral, log-rank accumulation and exact binomial tail run
through the kernel backend (compiled if available).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from ._backend import kernels


class DomainError(ValueError):
    """Argument outside the domain of a statistical function."""


@dataclass(frozen=True)
class BetaPrior:
    a: float = 1.0
    b: float = 1.0

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0):
            raise DomainError(f"Beta prior needs a, b > 0, got ({self.a}, {self.b})")


@dataclass(frozen=True)
class SurvivalSample:
    """Observed times (months) and event indicators for one arm."""

    times: np.ndarray
    events: np.ndarray

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        events = np.asarray(self.events, dtype=bool)
        if times.shape != events.shape or times.ndim != 1:
            raise DomainError("times and events must be 1-d arrays of equal length")
        if times.size and not np.all(times > 0):
            raise DomainError("observed times must be strictly positive")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "events", events)

    def __len__(self):
        return self.times.size

    @property
    def n_events(self) -> int:
        return int(self.events.sum())


def std_normal_cdf(z: float) -> float:
    return float(special.ndtr(z))


def std_normal_sf(z: float) -> float:
    """Upper tail 1 - Phi(z), accurate for large z."""
    return float(special.ndtr(-z))


def std_normal_quantile(p: float) -> float:
    if not 0.0 < p < 1.0:
        raise DomainError(f"quantile needs 0 < p < 1, got {p}")
    return float(special.ndtri(p))


def beta_tail_below(prior: BetaPrior, successes: int, n: int, threshold: float) -> float:
    """Posterior Pr(p < threshold) after ``successes`` out of ``n`` Bernoulli trials."""
    if not 0 <= successes <= n:
        raise DomainError(f"need 0 <= successes <= n, got {successes} of {n}")
    if not 0.0 < threshold < 1.0:
        raise DomainError(f"threshold must lie in (0, 1), got {threshold}")
    return float(special.betainc(prior.a + successes, prior.b + n - successes, threshold))


def prop_ztest(x_trt: int, n_trt: int, x_ctl: int, n_ctl: int) -> tuple[float, float]:
    """One-sided pooled two-proportion z-test of trt > ctl.

    Returns ``(z, p)``. Zero pooled variance gives ``(0.0, 0.5)``.
    """
    if n_trt <= 0 or n_ctl <= 0:
        raise DomainError("both sample sizes must be positive")
    if not (0 <= x_trt <= n_trt and 0 <= x_ctl <= n_ctl):
        raise DomainError("counts must lie within sample sizes")
    pooled = (x_trt + x_ctl) / (n_trt + n_ctl)
    var = pooled * (1.0 - pooled) * (1.0 / n_trt + 1.0 / n_ctl)
    if var <= 0.0:
        return 0.0, 0.5
    z = (x_trt / n_trt - x_ctl / n_ctl) / math.sqrt(var)
    return z, std_normal_sf(z)


def one_sided_prop_pvalue(x_trt: int, n_trt: int, x_ctl: int, n_ctl: int) -> float:
    return prop_ztest(x_trt, n_trt, x_ctl, n_ctl)[1]


def exact_binom_pvalue(x: int, n: int, p0: float) -> float:
    """Exact one-sided p-value P(X >= x) under Binomial(n, p0)."""
    if not 0 <= x <= n:
        raise DomainError(f"need 0 <= x <= n, got x={x}, n={n}")
    if not 0.0 < p0 < 1.0:
        raise DomainError(f"p0 must lie in (0, 1), got {p0}")
    return float(kernels.binom_upper_tail(int(x), int(n), float(p0)))


def logrank_two_sample(trt: SurvivalSample, ctl: SurvivalSample) -> tuple[float, float]:
    """Unweighted log-rank test; ``z > 0`` when trt survives longer.

    Returns ``(z, one-sided p)``; no events at all gives ``(0.0, 0.5)``.
    """
    if len(trt) == 0 or len(ctl) == 0:
        raise DomainError("log-rank test needs non-empty samples")
    o_minus_e, var = kernels.logrank_terms(trt.times, trt.events, ctl.times, ctl.events)
    if var <= 0.0:
        return 0.0, 0.5
    z = -o_minus_e / math.sqrt(var)
    return z, std_normal_sf(z)


def logrank_one_sample(sample: SurvivalSample, hist_hazard: float) -> tuple[float, float]:
    """One-sample log-rank against a known exponential hazard.

    ``z = (E - O) / sqrt(E)`` with ``E = hist_hazard * total follow-up``.
    """
    if not hist_hazard > 0:
        raise DomainError("historical hazard must be positive")
    if len(sample) == 0:
        raise DomainError("one-sample log-rank needs a non-empty sample")
    expected = hist_hazard * float(sample.times.sum())
    if expected <= 0.0:
        raise DomainError("no follow-up time")
    observed = sample.n_events
    z = (expected - observed) / math.sqrt(expected)
    return z, std_normal_sf(z)


def dunnett_maxz_pvalue(z_obs: float, m: int, rho: float) -> float:
    """P(max of ``m`` equicorrelated standard normals > ``z_obs``).

    Uses the one-dimensional latent-factor representation
    P(all <= c) = int phi(u) prod_j Phi((c - sqrt(rho) u) / sqrt(1 - rho)) du,
    integrated adaptively over u in [-8, 8].
    """
    if m < 1:
        raise DomainError(f"m must be >= 1, got {m}")
    if not 0.0 <= rho < 1.0:
        raise DomainError(f"rho must lie in [0, 1), got {rho}")
    if m == 1:
        return std_normal_sf(z_obs)
    p = kernels.dunnett_exceed(float(z_obs), int(m), float(rho))
    return min(max(p, 0.0), 1.0)


def dunnett_rho(n_dose: float, n_ctl: float) -> float:
    """Correlation between two dose-vs-control statistics sharing a control."""
    return n_dose / (n_dose + n_ctl)


def sidak_min_p(p_min: float, m: int) -> float:
    if m < 1:
        raise DomainError(f"m must be >= 1, got {m}")
    if not 0.0 <= p_min <= 1.0:
        raise DomainError(f"p_min must lie in [0, 1], got {p_min}")
    return -math.expm1(m * math.log1p(-p_min)) if p_min < 1.0 else 1.0
