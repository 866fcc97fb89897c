"""Final analysis: inverse-normal combination test inside a closed testing procedure.

Each intersection hypothesis containing the selected dose gets a stage-1
p-value (Dunnett or Sidak adjusted over its doses) and shares the stage-2
p-value of the selected dose. The selected dose is declared effective only
if every such intersection is rejected.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Sequence

from .stats import (
    DomainError,
    dunnett_maxz_pvalue,
    sidak_min_p,
    std_normal_quantile,
    std_normal_sf,
)

METHODS = ("dunnett", "sidak")


@dataclass(frozen=True)
class CombinationSpec:
    n1: int
    n2: int
    alpha: float = 0.05
    p_clamp_epsilon: float = 1e-10

    def __post_init__(self):
        if self.n1 < 1 or self.n2 < 1:
            raise DomainError("stage sizes must be >= 1")
        if not 0.0 < self.alpha < 0.5:
            raise DomainError("alpha must lie in (0, 0.5)")
        if not 0.0 < self.p_clamp_epsilon < 1e-6:
            raise DomainError("clamp epsilon must lie in (0, 1e-6)")

    @property
    def weights(self) -> tuple[float, float]:
        total = self.n1 + self.n2
        return math.sqrt(self.n1 / total), math.sqrt(self.n2 / total)

    @property
    def critical_value(self) -> float:
        return std_normal_quantile(1.0 - self.alpha)


@dataclass(frozen=True)
class IntersectionResult:
    subset: tuple[int, ...]
    p1: float
    p2: float
    z: float
    rejected: bool


@dataclass(frozen=True)
class FinalVerdict:
    rejected: bool
    intersections: tuple[IntersectionResult, ...]


@lru_cache(maxsize=None)
def intersections_containing(selected: int, n_doses: int) -> tuple[tuple[int, ...], ...]:
    """All subsets of ``range(n_doses)`` that contain ``selected``, smallest first."""
    if not 0 <= selected < n_doses:
        raise DomainError(f"selected dose {selected} out of range for {n_doses} doses")
    others = [j for j in range(n_doses) if j != selected]
    subsets = []
    for size in range(len(others) + 1):
        for extra in combinations(others, size):
            subsets.append(tuple(sorted((selected,) + extra)))
    return tuple(subsets)


def stage1_intersection_pvalue(
    subset: Sequence[int], per_dose_z: Sequence[float], method: str, rho: float = 0.5
) -> float:
    """Multiplicity-adjusted stage-1 p-value for the intersection over ``subset``."""
    try:
        zs = [per_dose_z[j] for j in subset]
    except (IndexError, KeyError) as exc:
        raise DomainError(f"missing stage-1 statistic for subset {tuple(subset)}") from exc
    if any(z is None for z in zs):
        raise DomainError(f"missing stage-1 statistic for subset {tuple(subset)}")
    if method == "dunnett":
        return dunnett_maxz_pvalue(max(zs), len(zs), rho)
    if method == "sidak":
        return sidak_min_p(std_normal_sf(max(zs)), len(zs))
    raise DomainError(f"unknown intersection method {method!r}")


def combine(p1: float, p2: float, spec: CombinationSpec) -> float:
    """Weighted inverse-normal combination of two stage-wise p-values."""
    eps = spec.p_clamp_epsilon
    p1 = min(max(p1, eps), 1.0 - eps)
    p2 = min(max(p2, eps), 1.0 - eps)
    w1, w2 = spec.weights
    return w1 * std_normal_quantile(1.0 - p1) + w2 * std_normal_quantile(1.0 - p2)


def closed_test(
    selected: int,
    n_doses: int,
    per_dose_stage1_z: Sequence[float],
    stage2_p: float,
    method: str,
    rho: float,
    spec: CombinationSpec,
) -> FinalVerdict:
    crit = spec.critical_value
    results = []
    for subset in intersections_containing(selected, n_doses):
        p1 = stage1_intersection_pvalue(subset, per_dose_stage1_z, method, rho)
        z = combine(p1, stage2_p, spec)
        results.append(IntersectionResult(subset, p1, stage2_p, z, z > crit))
    return FinalVerdict(all(r.rejected for r in results), tuple(results))
