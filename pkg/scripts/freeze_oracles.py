"""Compute reference values with mpmath / exact arithmetic and freeze them to tests/data/oracles.json.

Nothing here imports the package; the values are independent of the code under test.
"""
import json
import random
from fractions import Fraction
from math import comb
from pathlib import Path

import mpmath as mp

mp.mp.dps = 40
rnd = random.Random(20241019)
out = {}

out["normal_cdf"] = [[z, float(mp.ncdf(z))] for z in (-8.0, -5.5, -3.0, -1.2, -0.1, 0.0, 0.7, 1.6448536, 2.5, 6.0)]
out["normal_quantile"] = [
    [p, float(mp.sqrt(2) * mp.erfinv(2 * mp.mpf(p) - 1))]
    for p in (1e-12, 1e-6, 0.001, 0.025, 0.05, 0.3, 0.5, 0.8, 0.975, 0.999999)
]


def beta_tail_quad(a, b, x):
    dens = lambda t: t ** (a - 1) * (1 - t) ** (b - 1)
    # the integrand is sharply peaked for large a + b; subdivide around the mode
    mode = (a - 1) / (a + b - 2) if a > 1 and b > 1 else x / 2
    nodes = sorted({mp.mpf(0), mp.mpf(x)} | {mp.mpf(v) for v in mp.linspace(0, x, 17)} | ({mp.mpf(mode)} if 0 < mode < x else set()))
    return mp.quad(dens, nodes) / mp.beta(a, b)


cases = []
for _ in range(100):
    a = rnd.choice([0.5, 1.0, 1.0, 2.0, 0.3])
    b = rnd.choice([0.5, 1.0, 1.0, 3.0, 1.7])
    n = rnd.randint(0, 120)
    s = rnd.randint(0, n)
    thr = round(rnd.uniform(0.02, 0.98), 4)
    cases.append([a, b, s, n, thr, float(beta_tail_quad(a + s, b + n - s, thr))])
out["beta_tail"] = cases


def binom_tail_exact(x, n, p0):
    p = Fraction(p0)
    return float(sum(comb(n, k) * p**k * (1 - p) ** (n - k) for k in range(x, n + 1)))


out["binom_tail"] = [
    [x, n, p0, binom_tail_exact(x, n, p0)]
    for x, n, p0 in [
        (15, 45, "0.2"), (0, 30, "0.2"), (30, 30, "0.2"), (9, 45, "0.2"), (40, 80, "0.17"),
        (3, 10, "0.5"), (25, 60, "0.23"), (150, 200, "0.5"), (1, 1, "0.3"), (60, 400, "0.1"),
    ]
]


def dunnett_latent(c, m, rho):
    c, rho = mp.mpf(c), mp.mpf(rho)
    if rho == 0:
        return 1 - mp.ncdf(c) ** m
    s, r = mp.sqrt(rho), mp.sqrt(1 - rho)
    f = lambda u: mp.npdf(u) * mp.ncdf((c - s * u) / r) ** m
    return 1 - mp.quad(f, [-mp.inf, c / s, mp.inf])


pts = [[c, m, rho] for c, m, rho in [
    (1.6448536, 2, 0.5), (2.0, 3, 0.5), (0.0, 2, 0.5), (-1.0, 3, 0.3), (3.5, 2, 0.8),
    (2.2, 4, 0.0), (1.0, 5, 0.9), (2.5, 2, 0.25),
]]
out["dunnett"] = [p + [float(dunnett_latent(*p))] for p in pts]

path = Path(__file__).resolve().parents[1] / "tests" / "data" / "oracles.json"
path.write_text(json.dumps(out, indent=1) + "\n")
print("wrote", path)
