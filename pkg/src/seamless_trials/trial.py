"""Simulation of one seamless phase 2-3 trial (Designs A-D) or its conventional counterpart.

Design  stage-1 control  stage-2 control  endpoint for final analysis
A       concurrent       concurrent       survival (log-rank)
B       historical       concurrent       survival (one-sample / two-sample log-rank)
C       concurrent       concurrent       response (z-test)
D       historical       historical       response (exact binomial)

Stage 1 always selects the dose on response and toxicity.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from scipy import special

from .closed_testing import CombinationSpec, FinalVerdict, closed_test
from .outcomes import (
    Cohort,
    ScenarioSpec,
    censor_at,
    draw_control_responses,
    draw_dose_outcomes,
    draw_survival_times,
    enroll_times,
)
from .selection import (
    CellCounts,
    Desirability,
    GateSpec,
    InterimDecision,
    UtilitySpec,
    select_optimal,
)
from .stats import (
    dunnett_rho,
    exact_binom_pvalue,
    logrank_one_sample,
    logrank_two_sample,
    prop_ztest,
)

CONTROL = -1


class ConfigError(ValueError):
    """Inconsistent design configuration."""


@dataclass(frozen=True)
class _DesignTraits:
    endpoint: str
    stage1_control: bool
    stage2_control: bool
    method: str


DESIGNS = {
    "A": _DesignTraits("survival", True, True, "dunnett"),
    "B": _DesignTraits("survival", False, True, "sidak"),
    "C": _DesignTraits("response", True, True, "dunnett"),
    "D": _DesignTraits("response", False, False, "sidak"),
}


@dataclass(frozen=True)
class DesignConfig:
    design: str
    n1: int
    n2: int
    alpha: float = 0.05
    gates: GateSpec = GateSpec()
    utility: Desirability = UtilitySpec()
    accrual_rate: float = 2.0
    assess_time: float = 0.0
    followup_min: float = 12.0
    rho_dunnett: float | None = None
    p_clamp_epsilon: float = 1e-10
    # "survival" or "response"; only meaningful for Designs A and B
    stage1_endpoint: str | None = None
    traits: _DesignTraits = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.design not in DESIGNS:
            raise ConfigError(f"unknown design {self.design!r}; expected one of A-D")
        object.__setattr__(self, "traits", DESIGNS[self.design])
        if int(self.n1) != self.n1 or int(self.n2) != self.n2 or self.n1 < 1 or self.n2 < 1:
            raise ConfigError("n1 and n2 must be integers >= 1")
        if not 0.0 < self.alpha < 0.5:
            raise ConfigError("alpha must lie in (0, 0.5)")
        if not self.accrual_rate > 0:
            raise ConfigError("accrual_rate must be positive")
        if self.assess_time < 0 or self.followup_min < 0:
            raise ConfigError("assess_time and followup_min must be nonnegative")
        if self.rho_dunnett is not None and not 0.0 <= self.rho_dunnett < 1.0:
            raise ConfigError("rho_dunnett must lie in [0, 1)")
        if self.stage1_endpoint is not None:
            if self.traits.endpoint != "survival":
                raise ConfigError("stage1_endpoint applies only to Designs A and B")
            if self.stage1_endpoint not in ("survival", "response"):
                raise ConfigError(f"unknown stage1_endpoint {self.stage1_endpoint!r}")

    @property
    def endpoint(self) -> str:
        return self.traits.endpoint

    @property
    def method(self) -> str:
        return self.traits.method

    @property
    def dunnett_rho(self) -> float:
        if self.rho_dunnett is not None:
            return self.rho_dunnett
        return dunnett_rho(self.n1, self.n1)

    @property
    def combination(self) -> CombinationSpec:
        return CombinationSpec(self.n1, self.n2, self.alpha, self.p_clamp_epsilon)

    def stage1_arms(self, n_doses: int) -> int:
        return n_doses + int(self.traits.stage1_control)

    def stage2_arms(self) -> int:
        return 1 + int(self.traits.stage2_control)

    def with_sizes(self, n1: int, n2: int) -> "DesignConfig":
        return replace(self, n1=n1, n2=n2)


@dataclass(frozen=True)
class TrialResult:
    interim: InterimDecision
    final: FinalVerdict | None
    rejected: bool
    n_enrolled: int
    duration: float
    interim_time: float
    stage2_p: float | None = None

    @property
    def selected(self) -> int | None:
        return self.interim.selected

    @property
    def stopped_early(self) -> bool:
        return self.interim.selected is None


@dataclass
class _Conduct:
    stage1: list[Cohort]
    control1: Cohort | None
    interim: InterimDecision
    interim_time: float
    stage2: Cohort | None = None
    control2: Cohort | None = None
    final_time: float = float("nan")


def check_consistent(config: DesignConfig, scenario: ScenarioSpec) -> None:
    if scenario.n_doses < 2:
        raise ConfigError("scenario needs at least two doses")


def _arm_times(config: DesignConfig, n_arms: int, n_per_arm: int, start: float) -> np.ndarray:
    # round-robin allocation of a shared accrual stream; row = patient slot, column = arm
    return enroll_times(n_arms * n_per_arm, config.accrual_rate, start).reshape(n_per_arm, n_arms)


def _dose_cohort(config, scenario, j, stage, times, rng) -> Cohort:
    dose = scenario.doses[j]
    y_t, y_e = draw_dose_outcomes(dose, scenario.copula, times.size, rng)
    if config.endpoint == "survival":
        event = draw_survival_times(y_e, scenario.control, dose.hr, rng)
    else:
        event = np.full(times.size, np.nan)
    return Cohort(j, stage, times, y_t, y_e, event)


def _control_cohort(config, scenario, stage, times, rng) -> Cohort:
    y_e = draw_control_responses(scenario.control, times.size, rng)
    if config.endpoint == "survival":
        event = draw_survival_times(y_e, scenario.control, 1.0, rng)
    else:
        event = np.full(times.size, np.nan)
    return Cohort(CONTROL, stage, times, np.zeros(times.size, bool), y_e, event)


def _conduct(config: DesignConfig, scenario: ScenarioSpec, rng) -> _Conduct:
    check_consistent(config, scenario)
    n_doses = scenario.n_doses
    n_arms1 = config.stage1_arms(n_doses)
    slots = _arm_times(config, n_arms1, config.n1, 0.0)
    stage1 = [_dose_cohort(config, scenario, j, 1, slots[:, j], rng) for j in range(n_doses)]
    control1 = None
    if config.traits.stage1_control:
        control1 = _control_cohort(config, scenario, 1, slots[:, n_doses], rng)
    interim_time = float(slots[-1, -1]) + config.assess_time

    cells = [CellCounts.from_outcomes(c.y_t, c.y_e) for c in stage1]
    interim = select_optimal(cells, config.utility, config.gates)
    conduct = _Conduct(stage1, control1, interim, interim_time)
    if interim.selected is None:
        return conduct

    slots2 = _arm_times(config, config.stage2_arms(), config.n2, interim_time)
    conduct.stage2 = _dose_cohort(config, scenario, interim.selected, 2, slots2[:, 0], rng)
    if config.traits.stage2_control:
        conduct.control2 = _control_cohort(config, scenario, 2, slots2[:, 1], rng)
    lag = config.followup_min if config.endpoint == "survival" else config.assess_time
    conduct.final_time = float(slots2[-1, -1]) + lag
    return conduct


def _p_to_z(p: float, eps: float) -> float:
    return float(-special.ndtri(min(max(p, eps), 1.0 - eps)))


def _stage1_z(config: DesignConfig, scenario: ScenarioSpec, cd: _Conduct) -> list[float]:
    eps = config.p_clamp_epsilon
    hist = scenario.historical
    design = config.design
    use_survival = config.endpoint == "survival" and config.stage1_endpoint != "response"
    zs = []
    for cohort in cd.stage1:
        if design in ("A", "C") and not use_survival:
            z, _ = prop_ztest(cohort.n_resp, len(cohort), cd.control1.n_resp, len(cd.control1))
        elif design == "A":
            z, _ = logrank_two_sample(
                censor_at(cohort, cd.final_time), censor_at(cd.control1, cd.final_time)
            )
        elif design == "B" and use_survival:
            z, _ = logrank_one_sample(censor_at(cohort, cd.final_time), hist.hazard_hist)
        else:
            z = _p_to_z(exact_binom_pvalue(cohort.n_resp, len(cohort), hist.p_c_hist), eps)
        zs.append(z)
    return zs


def _stage2_p(config: DesignConfig, scenario: ScenarioSpec, cd: _Conduct) -> float:
    if config.endpoint == "survival":
        _, p = logrank_two_sample(
            censor_at(cd.stage2, cd.final_time), censor_at(cd.control2, cd.final_time)
        )
    elif config.design == "C":
        _, p = prop_ztest(cd.stage2.n_resp, len(cd.stage2), cd.control2.n_resp, len(cd.control2))
    else:
        p = exact_binom_pvalue(cd.stage2.n_resp, len(cd.stage2), scenario.historical.p_c_hist)
    return p


def _enrolled(config: DesignConfig, scenario: ScenarioSpec, cd: _Conduct) -> int:
    n = config.stage1_arms(scenario.n_doses) * config.n1
    if cd.interim.selected is not None:
        n += config.stage2_arms() * config.n2
    return n


def run_trial(config: DesignConfig, scenario: ScenarioSpec, rng) -> TrialResult:
    """Simulate one seamless trial and its closed-testing final analysis."""
    cd = _conduct(config, scenario, rng)
    n = _enrolled(config, scenario, cd)
    if cd.interim.selected is None:
        return TrialResult(cd.interim, None, False, n, cd.interim_time, cd.interim_time)
    p2 = _stage2_p(config, scenario, cd)
    verdict = closed_test(
        cd.interim.selected,
        scenario.n_doses,
        _stage1_z(config, scenario, cd),
        p2,
        config.method,
        config.dunnett_rho,
        config.combination,
    )
    return TrialResult(cd.interim, verdict, verdict.rejected, n, cd.final_time, cd.interim_time, p2)


def run_conventional(config: DesignConfig, scenario: ScenarioSpec, rng) -> TrialResult:
    """Same conduct as :func:`run_trial`, but inference uses stage-2 data alone."""
    cd = _conduct(config, scenario, rng)
    n = _enrolled(config, scenario, cd)
    if cd.interim.selected is None:
        return TrialResult(cd.interim, None, False, n, cd.interim_time, cd.interim_time)
    p2 = _stage2_p(config, scenario, cd)
    return TrialResult(cd.interim, None, p2 < config.alpha, n, cd.final_time, cd.interim_time, p2)
