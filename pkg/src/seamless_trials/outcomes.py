"""Patient-level data generation.

Toxicity and efficacy come from a Gaussian copula, survival times from an
exponential model whose hazard depends on response status.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy import special, stats

from .stats import DomainError, SurvivalSample


@dataclass(frozen=True)
class DoseTruth:
    p_e: float
    p_t: float
    hr: float = 1.0

    def __post_init__(self):
        if not (0.0 <= self.p_e <= 1.0 and 0.0 <= self.p_t <= 1.0):
            raise DomainError("dose efficacy/toxicity rates must lie in [0, 1]")
        if not self.hr > 0:
            raise DomainError("hazard ratio must be positive")


@dataclass(frozen=True)
class ControlTruth:
    p_c: float = 0.2
    lambda_resp: float = 0.26
    lambda_nonresp: float = 0.26

    def __post_init__(self):
        if not 0.0 <= self.p_c <= 1.0:
            raise DomainError("control response rate must lie in [0, 1]")
        if not (self.lambda_resp > 0 and self.lambda_nonresp > 0):
            raise DomainError("control hazards must be positive")


@dataclass(frozen=True)
class HistoricalBenchmark:
    p_c_hist: float = 0.2
    hazard_hist: float = 0.26

    def __post_init__(self):
        if not 0.0 < self.p_c_hist < 1.0:
            raise DomainError("historical response rate must lie in (0, 1)")
        if not self.hazard_hist > 0:
            raise DomainError("historical hazard must be positive")


@dataclass(frozen=True)
class CopulaSpec:
    rho: float = 0.0

    def __post_init__(self):
        if not -1.0 < self.rho < 1.0:
            raise DomainError("copula correlation must lie in (-1, 1)")


@dataclass(frozen=True)
class ScenarioSpec:
    """Ground truth for one simulation scenario.

    ``optimal`` is the 0-based index of the truly optimal dose, or ``None``
    when no dose is worth carrying forward.
    """

    doses: tuple[DoseTruth, ...]
    control: ControlTruth = ControlTruth()
    historical: HistoricalBenchmark = HistoricalBenchmark()
    copula: CopulaSpec = CopulaSpec()
    optimal: int | None = None
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "doses", tuple(self.doses))
        if len(self.doses) < 2:
            raise DomainError("a scenario needs at least two doses")
        if self.optimal is not None and not 0 <= self.optimal < len(self.doses):
            raise DomainError(f"optimal dose index {self.optimal} out of range")

    @property
    def n_doses(self) -> int:
        return len(self.doses)

    def dose_is_null(self, j: int, endpoint: str) -> bool:
        """Whether dose ``j`` is truly no better than control on ``endpoint``."""
        if endpoint == "survival":
            return self.doses[j].hr >= 1.0
        return self.doses[j].p_e <= self.control.p_c


@dataclass(frozen=True)
class PatientRecord:
    arm: int
    enroll_time: float
    y_t: bool
    y_e: bool
    raw_event_time: float
    stage: int


class Cohort:
    """Columnar batch of patients enrolled on one arm in one stage.

    ``arm`` is the dose index, or -1 for control.
    """

    __slots__ = ("arm", "stage", "enroll", "y_t", "y_e", "event_time")

    def __init__(self, arm, stage, enroll, y_t, y_e, event_time):
        self.arm = arm
        self.stage = stage
        self.enroll = np.asarray(enroll, dtype=float)
        self.y_t = np.asarray(y_t, dtype=bool)
        self.y_e = np.asarray(y_e, dtype=bool)
        self.event_time = np.asarray(event_time, dtype=float)

    def __len__(self):
        return self.enroll.size

    @property
    def n_resp(self) -> int:
        return int(self.y_e.sum())

    def records(self) -> list[PatientRecord]:
        return [
            PatientRecord(self.arm, float(e), bool(t), bool(r), float(s), self.stage)
            for e, t, r, s in zip(self.enroll, self.y_t, self.y_e, self.event_time)
        ]

    @classmethod
    def from_records(cls, records: Sequence[PatientRecord]) -> "Cohort":
        if not records:
            return cls(-1, 1, [], [], [], [])
        return cls(
            records[0].arm,
            records[0].stage,
            [r.enroll_time for r in records],
            [r.y_t for r in records],
            [r.y_e for r in records],
            [r.raw_event_time for r in records],
        )


def cell_probabilities(dose: DoseTruth, copula: CopulaSpec) -> tuple[float, float, float, float]:
    """True probabilities of (E, no T), (E, T), (no E, no T), (no E, T)."""
    if copula.rho == 0.0 or dose.p_t in (0.0, 1.0) or dose.p_e in (0.0, 1.0):
        both = dose.p_e * dose.p_t
    else:
        cov = [[1.0, copula.rho], [copula.rho, 1.0]]
        limits = [special.ndtri(dose.p_t), special.ndtri(dose.p_e)]
        both = float(stats.multivariate_normal(mean=[0.0, 0.0], cov=cov).cdf(limits))
    return dose.p_e - both, both, 1.0 - dose.p_e - dose.p_t + both, dose.p_t - both


def draw_dose_outcomes(dose: DoseTruth, copula: CopulaSpec, n: int, rng) -> tuple[np.ndarray, np.ndarray]:
    """Draw ``n`` correlated (toxicity, efficacy) indicator pairs."""
    z = rng.standard_normal((2, n))
    z_t = z[0]
    z_e = copula.rho * z[0] + math.sqrt(1.0 - copula.rho**2) * z[1]
    y_t = z_t <= special.ndtri(dose.p_t)
    y_e = z_e <= special.ndtri(dose.p_e)
    return y_t, y_e


def draw_dose_outcome(dose: DoseTruth, copula: CopulaSpec, rng) -> tuple[bool, bool]:
    y_t, y_e = draw_dose_outcomes(dose, copula, 1, rng)
    return bool(y_t[0]), bool(y_e[0])


def draw_control_responses(control: ControlTruth, n: int, rng) -> np.ndarray:
    return rng.random(n) < control.p_c


def draw_survival_times(y_e, control: ControlTruth, hr: float, rng) -> np.ndarray:
    """Exponential event times; responders use ``lambda_resp``, others ``lambda_nonresp``.

    The same hazard ratio multiplies both groups.
    """
    if not hr > 0:
        raise DomainError("hazard ratio must be positive")
    y_e = np.asarray(y_e, dtype=bool)
    rate = np.where(y_e, control.lambda_resp, control.lambda_nonresp) * hr
    return rng.standard_exponential(y_e.size) / rate


def draw_survival_time(y_e: bool, control: ControlTruth, hr: float, rng) -> float:
    return float(draw_survival_times(np.array([y_e]), control, hr, rng)[0])


def enroll_times(n: int, accrual_rate: float, start: float = 0.0) -> np.ndarray:
    """Evenly spaced arrivals ``start + k / accrual_rate`` for k = 1..n."""
    if n < 1:
        raise DomainError("need at least one patient")
    if not accrual_rate > 0:
        raise DomainError("accrual rate must be positive")
    return start + np.arange(1, n + 1) / accrual_rate


def censor_at(records: Cohort | Iterable[PatientRecord], analysis_time: float) -> SurvivalSample:
    """Administratively censor follow-up at calendar ``analysis_time``.

    Patients with no follow-up by then are left out.
    """
    cohort = records if isinstance(records, Cohort) else Cohort.from_records(list(records))
    followup = analysis_time - cohort.enroll
    keep = followup > 0
    followup = followup[keep]
    raw = cohort.event_time[keep]
    events = raw <= followup
    return SurvivalSample(np.minimum(raw, followup), events)
