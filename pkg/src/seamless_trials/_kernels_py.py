"""Pure-Python fallback for the compiled kernels in ``_kernels.pyx``."""
import math

import numpy as np
from scipy import integrate, special

BACKEND = "python"

_U_LIMIT = 8.0


def dunnett_exceed(c, m, rho, tol=1e-10):
    """P(max of m equicorrelated N(0,1) > c) by latent-factor quadrature."""
    if rho == 0.0:
        return -math.expm1(m * math.log1p(-special.ndtr(-c)))
    sr = math.sqrt(rho)
    s1r = math.sqrt(1.0 - rho)

    def integrand(u):
        q = special.ndtr(-(c - sr * u) / s1r)
        tail = 1.0 if q >= 1.0 else -math.expm1(m * math.log1p(-q))
        return math.exp(-0.5 * u * u) / math.sqrt(2.0 * math.pi) * tail

    kink = c / sr
    points = [kink] if -_U_LIMIT < kink < _U_LIMIT else None
    value, _ = integrate.quad(
        integrand, -_U_LIMIT, _U_LIMIT, points=points, epsabs=tol, epsrel=0.0, limit=200
    )
    return value


def logrank_terms(times_trt, events_trt, times_ctl, events_ctl):
    """Return (observed - expected events in trt, hypergeometric variance)."""
    t1 = np.asarray(times_trt, dtype=float)
    t0 = np.asarray(times_ctl, dtype=float)
    times = np.concatenate((t1, t0))
    events = np.concatenate((np.asarray(events_trt, bool), np.asarray(events_ctl, bool)))
    is_trt = np.concatenate((np.ones(t1.size, bool), np.zeros(t0.size, bool)))

    uniq, inv = np.unique(times, return_inverse=True)
    k = uniq.size
    leave = np.bincount(inv, minlength=k).astype(float)
    leave_trt = np.bincount(inv, weights=is_trt, minlength=k)
    d = np.bincount(inv, weights=events, minlength=k)
    d_trt = np.bincount(inv, weights=events & is_trt, minlength=k)

    # at-risk counts just before each distinct time
    at_risk = leave[::-1].cumsum()[::-1]
    at_risk_trt = leave_trt[::-1].cumsum()[::-1]

    frac = at_risk_trt / at_risk
    o_minus_e = float(np.sum(d_trt - d * frac))
    with np.errstate(invalid="ignore", divide="ignore"):
        v = d * frac * (1.0 - frac) * (at_risk - d) / (at_risk - 1.0)
    var = float(np.sum(np.where(at_risk > 1.0, v, 0.0)))
    return o_minus_e, var


def binom_upper_tail(x, n, p0):
    """P(X >= x) for X ~ Binomial(n, p0), summed in log space so deep tails keep precision."""
    if x <= 0:
        return 1.0
    if x > n:
        return 0.0
    lp, lq = math.log(p0), math.log1p(-p0)
    lfn = math.lgamma(n + 1.0)
    total = math.fsum(
        math.exp(lfn - math.lgamma(k + 1.0) - math.lgamma(n - k + 1.0) + k * lp + (n - k) * lq)
        for k in range(x, n + 1)
    )
    return min(total, 1.0)
