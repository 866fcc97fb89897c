"""Interim benefit-risk assessment and optimal-dose selection."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .outcomes import CopulaSpec, DoseTruth, cell_probabilities
from .stats import BetaPrior, DomainError, beta_tail_below

# relative slack when comparing desirability scores for ties
_TIE_TOL = 1e-12


@dataclass(frozen=True)
class CellCounts:
    """Outcome table for one dose.

    c1 = efficacy without toxicity, c2 = efficacy with toxicity,
    c3 = neither, c4 = toxicity without efficacy.
    """

    c1: int
    c2: int
    c3: int
    c4: int

    def __post_init__(self):
        if min(self.c1, self.c2, self.c3, self.c4) < 0:
            raise DomainError("cell counts must be nonnegative")

    @property
    def n(self) -> int:
        return self.c1 + self.c2 + self.c3 + self.c4

    @property
    def responders(self) -> int:
        return self.c1 + self.c2

    @property
    def toxicities(self) -> int:
        return self.c2 + self.c4

    @classmethod
    def from_outcomes(cls, y_t, y_e) -> "CellCounts":
        y_t = np.asarray(y_t, dtype=bool)
        y_e = np.asarray(y_e, dtype=bool)
        c1 = int(np.count_nonzero(y_e & ~y_t))
        c2 = int(np.count_nonzero(y_e & y_t))
        c4 = int(np.count_nonzero(~y_e & y_t))
        return cls(c1, c2, y_t.size - c1 - c2 - c4, c4)


@dataclass(frozen=True)
class UtilitySpec:
    u1: float = 0.0
    u2: float = 40.0
    u3: float = 60.0
    u4: float = 100.0
    orientation: str = "minimize"

    def __post_init__(self):
        scores = (self.u1, self.u2, self.u3, self.u4)
        if not all(0.0 <= u <= 100.0 for u in scores):
            raise DomainError("utility scores must lie in [0, 100]")
        if self.orientation not in ("maximize", "minimize"):
            raise DomainError(f"unknown orientation {self.orientation!r}")
        # outcome 1 is the best outcome and outcome 4 the worst
        lo, hi = min(scores), max(scores)
        if self.orientation == "minimize" and not (self.u1 == lo and self.u4 == hi):
            raise DomainError("minimize orientation needs u1 lowest and u4 highest")
        if self.orientation == "maximize" and not (self.u1 == hi and self.u4 == lo):
            raise DomainError("maximize orientation needs u1 highest and u4 lowest")


@dataclass(frozen=True)
class TradeoffSpec:
    w: float = 2.0 / 3.0

    def __post_init__(self):
        if not self.w >= 0:
            raise DomainError("tradeoff weight must be nonnegative")


Desirability = Union[UtilitySpec, TradeoffSpec]


@dataclass(frozen=True)
class GateSpec:
    phi_t: float = 0.3
    phi_e: float = 0.3
    c_t: float = 0.1
    c_e: float = 0.1
    prior: BetaPrior = BetaPrior()

    def __post_init__(self):
        for name in ("phi_t", "phi_e", "c_t", "c_e"):
            if not 0.0 < getattr(self, name) < 1.0:
                raise DomainError(f"{name} must lie in (0, 1)")


@dataclass(frozen=True)
class InterimDecision:
    """Outcome of the interim analysis; ``selected`` is None on early stop."""

    selected: int | None
    scores: tuple[float, ...]
    safety_pass: tuple[bool, ...]
    efficacy_pass: tuple[bool, ...]
    admissible: tuple[bool, ...] = field(init=False)

    def __post_init__(self):
        adm = tuple(s and e for s, e in zip(self.safety_pass, self.efficacy_pass))
        object.__setattr__(self, "admissible", adm)
        if self.selected is not None and not adm[self.selected]:
            raise DomainError("selected dose must pass both gates")

    @property
    def stopped_early(self) -> bool:
        return self.selected is None


def expected_score(cells: CellCounts, spec: UtilitySpec) -> float:
    if cells.n == 0:
        raise DomainError("cannot score a dose with no patients")
    return (
        cells.c1 * spec.u1 + cells.c2 * spec.u2 + cells.c3 * spec.u3 + cells.c4 * spec.u4
    ) / cells.n


def tradeoff_score(p_e_hat: float, p_t_hat: float, spec: TradeoffSpec) -> float:
    return p_e_hat - spec.w * p_t_hat


def gate_safety(tox_count: int, n: int, gate: GateSpec) -> bool:
    if n == 0:
        raise DomainError("safety gate needs patients")
    return beta_tail_below(gate.prior, tox_count, n, gate.phi_t) > gate.c_t


def gate_efficacy(resp_count: int, n: int, gate: GateSpec) -> bool:
    if n == 0:
        raise DomainError("efficacy gate needs patients")
    return 1.0 - beta_tail_below(gate.prior, resp_count, n, gate.phi_e) > gate.c_e


def desirability(cells: CellCounts, spec: Desirability) -> float:
    if isinstance(spec, TradeoffSpec):
        if cells.n == 0:
            raise DomainError("cannot score a dose with no patients")
        return tradeoff_score(cells.responders / cells.n, cells.toxicities / cells.n, spec)
    return expected_score(cells, spec)


def desirability_of_truth(dose: DoseTruth, copula: CopulaSpec, spec: Desirability) -> float:
    """Desirability evaluated at the true outcome probabilities of ``dose``."""
    if isinstance(spec, TradeoffSpec):
        return tradeoff_score(dose.p_e, dose.p_t, spec)
    pi = cell_probabilities(dose, copula)
    return pi[0] * spec.u1 + pi[1] * spec.u2 + pi[2] * spec.u3 + pi[3] * spec.u4


def _maximizes(spec: Desirability) -> bool:
    return isinstance(spec, TradeoffSpec) or spec.orientation == "maximize"


def select_optimal(
    per_dose_cells: Sequence[CellCounts], utility: Desirability, gates: GateSpec
) -> InterimDecision:
    """Pick the admissible dose with the best desirability, or stop early.

    Ties (within floating-point noise) go to the lowest dose index.
    """
    if len(per_dose_cells) < 2:
        raise DomainError("selection needs at least two doses")
    scores = tuple(desirability(c, utility) for c in per_dose_cells)
    safety = tuple(gate_safety(c.toxicities, c.n, gates) for c in per_dose_cells)
    efficacy = tuple(gate_efficacy(c.responders, c.n, gates) for c in per_dose_cells)

    sign = 1.0 if _maximizes(utility) else -1.0
    candidates = [j for j in range(len(scores)) if safety[j] and efficacy[j]]
    selected = None
    if candidates:
        best = max(sign * scores[j] for j in candidates)
        slack = _TIE_TOL * max(1.0, abs(best))
        selected = next(j for j in candidates if sign * scores[j] >= best - slack)
    return InterimDecision(selected, scores, safety, efficacy)
