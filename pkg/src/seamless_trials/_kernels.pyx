# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels.

Same functions and signatures as ``_kernels_py``; the package picks one at
import time (see ``_backend``).
"""
import numpy as np

from libc.math cimport erfc, exp, expm1, fabs, lgamma, log, log1p, sqrt

cdef double SQRT1_2 = 0.70710678118654752440
cdef double INV_SQRT_2PI = 0.39894228040143267794
cdef double U_LIMIT = 8.0
cdef int MAX_DEPTH = 40

# Gauss-Kronrod 7/15 abscissae and weights (QUADPACK qk15)
cdef double[8] XGK = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
]
cdef double[8] WGK = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
]
cdef double[4] WG = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
]

BACKEND = "compiled"


cdef inline double _exceed(double u, double c, double m, double sr, double s1r) nogil:
    # phi(u) * (1 - Phi(a)^m), a = (c - sqrt(rho) u) / sqrt(1 - rho)
    cdef double a = (c - sr * u) / s1r
    cdef double q = 0.5 * erfc(a * SQRT1_2)
    cdef double tail
    if q >= 1.0:
        tail = 1.0
    else:
        tail = -expm1(m * log1p(-q))
    return exp(-0.5 * u * u) * INV_SQRT_2PI * tail


cdef void _gk15(double lo, double hi, double c, double m, double sr, double s1r,
                double* result, double* abserr) nogil:
    cdef double center = 0.5 * (lo + hi)
    cdef double half = 0.5 * (hi - lo)
    cdef double fc = _exceed(center, c, m, sr, s1r)
    cdef double resk = fc * WGK[7]
    cdef double resg = fc * WG[3]
    cdef double f1, f2, dx
    cdef int j
    for j in range(7):
        dx = half * XGK[j]
        f1 = _exceed(center - dx, c, m, sr, s1r)
        f2 = _exceed(center + dx, c, m, sr, s1r)
        resk += WGK[j] * (f1 + f2)
        if j % 2 == 1:
            resg += WG[j // 2] * (f1 + f2)
    result[0] = resk * half
    abserr[0] = fabs((resk - resg) * half)


cdef double _adaptive(double lo, double hi, double c, double m, double sr, double s1r,
                      double tol, int depth) nogil:
    cdef double res, err
    _gk15(lo, hi, c, m, sr, s1r, &res, &err)
    if err <= tol or depth >= MAX_DEPTH:
        return res
    cdef double mid = 0.5 * (lo + hi)
    return (_adaptive(lo, mid, c, m, sr, s1r, 0.5 * tol, depth + 1)
            + _adaptive(mid, hi, c, m, sr, s1r, 0.5 * tol, depth + 1))


def dunnett_exceed(double c, int m, double rho, double tol=1e-10):
    """P(max of m equicorrelated N(0,1) > c) by latent-factor quadrature."""
    cdef double sr = sqrt(rho)
    cdef double s1r = sqrt(1.0 - rho)
    cdef double q, kink
    if rho == 0.0:
        q = 0.5 * erfc(c * SQRT1_2)
        if q >= 1.0:
            return 1.0
        return -expm1(m * log1p(-q))
    kink = c / sr
    if -U_LIMIT < kink < U_LIMIT:
        return (_adaptive(-U_LIMIT, kink, c, m, sr, s1r, 0.5 * tol, 0)
                + _adaptive(kink, U_LIMIT, c, m, sr, s1r, 0.5 * tol, 0))
    return _adaptive(-U_LIMIT, U_LIMIT, c, m, sr, s1r, tol, 0)


def logrank_terms(times_trt, events_trt, times_ctl, events_ctl):
    """Return (observed - expected events in trt, hypergeometric variance)."""
    t1 = np.asarray(times_trt, dtype=np.float64)
    t0 = np.asarray(times_ctl, dtype=np.float64)
    cdef Py_ssize_t n1 = t1.shape[0]
    cdef Py_ssize_t n0 = t0.shape[0]
    times = np.concatenate((t1, t0))
    events = np.concatenate((np.asarray(events_trt, dtype=np.int8),
                             np.asarray(events_ctl, dtype=np.int8)))
    order = np.argsort(times, kind="stable")
    cdef double[:] tv = times[order]
    cdef signed char[:] ev = events[order]
    cdef long[:] idx = order.astype(np.int_)

    cdef double at_risk = n1 + n0
    cdef double at_risk_trt = n1
    cdef double o_minus_e = 0.0
    cdef double var = 0.0
    cdef double d, d_trt, leave, leave_trt, frac, t
    cdef Py_ssize_t i = 0, k
    cdef Py_ssize_t total = n1 + n0
    with nogil:
        while i < total:
            t = tv[i]
            d = 0.0
            d_trt = 0.0
            leave = 0.0
            leave_trt = 0.0
            k = i
            while k < total and tv[k] == t:
                leave += 1.0
                if idx[k] < n1:
                    leave_trt += 1.0
                    if ev[k]:
                        d_trt += 1.0
                if ev[k]:
                    d += 1.0
                k += 1
            if d > 0.0:
                frac = at_risk_trt / at_risk
                o_minus_e += d_trt - d * frac
                if at_risk > 1.0:
                    var += d * frac * (1.0 - frac) * (at_risk - d) / (at_risk - 1.0)
            at_risk -= leave
            at_risk_trt -= leave_trt
            i = k
    return o_minus_e, var


def binom_upper_tail(int x, int n, double p0):
    """P(X >= x) for X ~ Binomial(n, p0) by direct summation in log space."""
    if x <= 0:
        return 1.0
    if x > n:
        return 0.0
    cdef double lp = log(p0)
    cdef double lq = log1p(-p0)
    cdef double lfn = lgamma(n + 1.0)
    cdef double total = 0.0
    cdef int k
    with nogil:
        for k in range(x, n + 1):
            total += exp(lfn - lgamma(k + 1.0) - lgamma(n - k + 1.0) + k * lp + (n - k) * lq)
    return min(total, 1.0)
