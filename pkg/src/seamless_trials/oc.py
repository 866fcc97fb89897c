"""Monte Carlo operating characteristics, sample-size calibration and allocation sweeps.

Replication ``r`` always draws from the substream ``SeedSequence(seed,
spawn_key=(r,))``, so results do not depend on the number of workers, and
different grid points share common random numbers.
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .outcomes import ScenarioSpec
from .trial import DesignConfig, run_conventional, run_trial

log = logging.getLogger(__name__)


class Replication(NamedTuple):
    rep: int
    selected: int | None
    rejected: bool
    false_rejection: bool
    n_enrolled: int
    duration: float
    stage2_p: float | None


@dataclass(frozen=True)
class OperatingCharacteristics:
    reps: int
    fwer: float
    fwer_se: float
    pcs: float | None
    pcs_se: float | None
    generalized_power: float | None
    gen_power_se: float | None
    avg_sample_size: float
    avg_duration: float
    early_stop_rate: float


def mc_se(p: float, reps: int) -> float:
    return math.sqrt(p * (1.0 - p) / reps)


def replication_rng(seed: int, rep: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(rep,))))


def _run_chunk(args) -> list[Replication]:
    config, scenario, seed, start, stop, conventional = args
    runner = run_conventional if conventional else run_trial
    out = []
    for r in range(start, stop):
        res = runner(config, scenario, replication_rng(seed, r))
        sel = res.selected
        false_rej = bool(res.rejected and sel is not None and scenario.dose_is_null(sel, config.endpoint))
        out.append(Replication(r, sel, res.rejected, false_rej, res.n_enrolled, res.duration, res.stage2_p))
    return out


def simulate(
    config: DesignConfig,
    scenario: ScenarioSpec,
    reps: int,
    seed: int,
    workers: int = 1,
    conventional: bool = False,
) -> list[Replication]:
    """Run ``reps`` trials and return per-replication records in replication order."""
    if reps < 1:
        raise ValueError("reps must be >= 1")
    if workers <= 1:
        return _run_chunk((config, scenario, seed, 0, reps, conventional))
    n_chunks = min(reps, workers * 4)
    bounds = np.linspace(0, reps, n_chunks + 1).astype(int)
    jobs = [
        (config, scenario, seed, int(a), int(b), conventional)
        for a, b in zip(bounds[:-1], bounds[1:])
        if b > a
    ]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        chunks = list(pool.map(_run_chunk, jobs))
    return [rep for chunk in chunks for rep in chunk]


def summarize(replications: Sequence[Replication], scenario: ScenarioSpec) -> OperatingCharacteristics:
    reps = len(replications)
    n_false = sum(r.false_rejection for r in replications)
    n_stop = sum(r.selected is None for r in replications)
    fwer = n_false / reps
    pcs = pcs_se = gp = gp_se = None
    if scenario.optimal is not None:
        hits = [r.selected == scenario.optimal for r in replications]
        pcs = sum(hits) / reps
        gp = sum(h and r.rejected for h, r in zip(hits, replications)) / reps
        pcs_se, gp_se = mc_se(pcs, reps), mc_se(gp, reps)
    return OperatingCharacteristics(
        reps=reps,
        fwer=fwer,
        fwer_se=mc_se(fwer, reps),
        pcs=pcs,
        pcs_se=pcs_se,
        generalized_power=gp,
        gen_power_se=gp_se,
        avg_sample_size=sum(r.n_enrolled for r in replications) / reps,
        avg_duration=math.fsum(r.duration for r in replications) / reps,
        early_stop_rate=n_stop / reps,
    )


def run_oc(
    config: DesignConfig,
    scenario: ScenarioSpec,
    reps: int,
    seed: int,
    workers: int = 1,
    conventional: bool = False,
) -> OperatingCharacteristics:
    """FWER, PCS, generalized power, average sample size and duration.

    PCS and generalized power are ``None`` when the scenario has no optimal dose.
    """
    return summarize(simulate(config, scenario, reps, seed, workers, conventional), scenario)


def planned_total(config: DesignConfig, n_doses: int, n1: int | None = None, n2: int | None = None) -> int:
    n1 = config.n1 if n1 is None else n1
    n2 = config.n2 if n2 is None else n2
    return config.stage1_arms(n_doses) * n1 + config.stage2_arms() * n2


@dataclass(frozen=True)
class CalibrationResult:
    n1: int
    n2: int
    power: float
    reachable: bool
    # (n1, n2, planned total, generalized power) for each evaluated grid point
    table: tuple[tuple[int, int, int, float], ...]


def calibrate_n(
    config: DesignConfig,
    scenario: ScenarioSpec,
    target_power: float,
    n1_grid: Sequence[int],
    n2_grid: Sequence[int],
    reps: int,
    seed: int,
    workers: int = 1,
    conventional: bool = False,
) -> CalibrationResult:
    """Smallest planned total sample size whose generalized power reaches the target.

    Grid points are visited by increasing total (ties: smaller n2). If none
    reaches the target the result has ``reachable=False`` and carries the
    best point found.
    """
    if not n1_grid or not n2_grid:
        raise ValueError("calibration grids must be non-empty")
    if scenario.optimal is None:
        raise ValueError("calibration needs a scenario with an optimal dose")
    J = scenario.n_doses
    points = sorted(
        {(int(a), int(b)) for a in n1_grid for b in n2_grid},
        key=lambda ab: (planned_total(config, J, *ab), ab[1], ab[0]),
    )
    table = []
    best = None
    for n1, n2 in points:
        oc = run_oc(config.with_sizes(n1, n2), scenario, reps, seed, workers, conventional)
        power = oc.generalized_power
        total = planned_total(config, J, n1, n2)
        table.append((n1, n2, total, power))
        log.info("calibrate n1=%d n2=%d total=%d power=%.4f", n1, n2, total, power)
        if power >= target_power:
            return CalibrationResult(n1, n2, power, True, tuple(table))
        if best is None or power > best[3]:
            best = (n1, n2, total, power)
    return CalibrationResult(best[0], best[1], best[3], False, tuple(table))


@dataclass(frozen=True)
class SweepRow:
    n1: int
    n2: int
    pcs: float | None
    generalized_power: float | None


def allocation_sweep(
    config: DesignConfig,
    scenario: ScenarioSpec,
    total: int,
    n1_values: Sequence[int],
    reps: int,
    seed: int,
    workers: int = 1,
) -> list[SweepRow]:
    """Vary n1 while holding the planned total enrollment at ``total``.

    n2 is whatever the remaining budget buys for the stage-2 arms; n1 values
    that leave no whole n2 >= 1 are skipped with a warning.
    """
    J = scenario.n_doses
    arms1, arms2 = config.stage1_arms(J), config.stage2_arms()
    rows = []
    for n1 in sorted(set(int(v) for v in n1_values)):
        rest = total - arms1 * n1
        if rest < arms2 or rest % arms2:
            log.warning("n1=%d infeasible under total=%d; row omitted", n1, total)
            continue
        n2 = rest // arms2
        oc = run_oc(config.with_sizes(n1, n2), scenario, reps, seed, workers)
        rows.append(SweepRow(n1, n2, oc.pcs, oc.generalized_power))
    return rows


@dataclass(frozen=True)
class SavingsReport:
    seamless: OperatingCharacteristics
    conventional: OperatingCharacteristics
    savings: float


def compare_with_conventional(
    config: DesignConfig,
    cc_config: DesignConfig,
    scenario: ScenarioSpec,
    reps: int,
    seed: int,
    workers: int = 1,
) -> SavingsReport:
    """Average sample size of the seamless design against its conventional counterpart.

    ``savings = 1 - N_seamless / N_conventional``; negative when the
    conventional design is smaller.
    """
    seamless = run_oc(config, scenario, reps, seed, workers)
    conventional = run_oc(cc_config, scenario, reps, seed, workers, conventional=True)
    savings = 1.0 - seamless.avg_sample_size / conventional.avg_sample_size
    return SavingsReport(seamless, conventional, savings)
