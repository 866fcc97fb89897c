"""Acceptance criteria 1-10, each at its stated tolerance.

Every test prints one ``CRITERION k: PASS|FAIL`` line (also repeated in the
terminal summary) before asserting.
"""
import math
import subprocess
import sys
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from nullsim import null_rejection_counts
from seamless_trials import presets
from seamless_trials.oc import allocation_sweep, calibrate_n, compare_with_conventional, run_oc
from seamless_trials.selection import CellCounts, GateSpec, TradeoffSpec, UtilitySpec, select_optimal
from seamless_trials.stats import BetaPrior, beta_tail_below, dunnett_maxz_pvalue

pytestmark = pytest.mark.acceptance

REPS = 10_000
SEED = 20240
ALPHA = 0.05
FWER_LIMIT = 0.057


def report(k: int, ok: bool, detail: str) -> None:
    line = f"CRITERION {k}: {'PASS' if ok else 'FAIL'} - {detail}"
    ACCEPTANCE_LINES.append(line)
    print("\n" + line, file=sys.__stdout__, flush=True)
    assert ok, line


def test_criterion_01_fwer_orr_designs():
    parts, ok = [], True
    for letter, size in (("C", (50, 80)), ("D", (45, 30))):
        cfg = presets.design(letter, n1=size[0], n2=size[1])
        t0 = time.perf_counter()
        oc = run_oc(cfg, presets.scenario(2, 0), REPS, SEED)
        secs = time.perf_counter() - t0
        ok &= oc.fwer <= FWER_LIMIT and secs < 120
        parts.append(f"{letter}{size} FWER={oc.fwer:.4f} ({secs:.1f}s)")
    report(1, ok, "; ".join(parts) + f"; limit {FWER_LIMIT}, < 120 s each")


def test_criterion_02_generalized_power_design_c():
    oc = run_oc(presets.design("C", n1=50, n2=80), presets.scenario(2, 1), REPS, SEED)
    gp = oc.generalized_power
    report(2, abs(gp - 0.80) <= 0.05, f"C (50, 80) generalized power {gp:.4f}, target 0.80 +/- 0.05")


def test_criterion_03_generalized_power_design_d():
    oc = run_oc(presets.design("D", n1=45, n2=30), presets.scenario(2, 1), REPS, SEED)
    gp = oc.generalized_power
    report(3, abs(gp - 0.80) <= 0.05, f"D (45, 30) generalized power {gp:.4f}, target 0.80 +/- 0.05")


def test_criterion_04_survival_designs():
    parts, ok = [], True
    for letter, size in (("A", (50, 100)), ("B", (50, 115))):
        cfg = presets.design(letter, n1=size[0], n2=size[1])
        null = run_oc(cfg, presets.scenario(2, 0), REPS, SEED)
        alt = run_oc(cfg, presets.scenario(2, 1), REPS, SEED)
        gp = alt.generalized_power
        ok &= null.fwer <= FWER_LIMIT and 0.65 <= gp <= 0.90
        parts.append(f"{letter}{size} FWER={null.fwer:.4f} gen_power={gp:.4f}")
    report(4, ok, "; ".join(parts) + f"; FWER <= {FWER_LIMIT}, power in [0.65, 0.90]")


CC_GRIDS = {
    "C": ([50], list(range(100, 145, 5))),
    "D": ([45], list(range(45, 85, 5))),
}


def test_criterion_05_sample_size_savings():
    parts, ok = [], True
    sc = presets.scenario(2, 1)
    for letter in ("D", "C"):
        cfg = presets.design(letter)
        n1_grid, n2_grid = CC_GRIDS[letter]
        cal = calibrate_n(cfg, sc, 0.80, n1_grid, n2_grid, REPS, SEED, conventional=True)
        if not cal.reachable:
            ok = False
            parts.append(f"{letter}: CC calibration unreachable (best {cal.power:.4f})")
            continue
        rep = compare_with_conventional(cfg, cfg.with_sizes(cal.n1, cal.n2), sc, REPS, SEED)
        ok &= 0.15 <= rep.savings <= 0.30
        parts.append(
            f"{letter}: CC ({cal.n1}, {cal.n2}) power {cal.power:.4f}, "
            f"avg N {rep.seamless.avg_sample_size:.1f} vs {rep.conventional.avg_sample_size:.1f}, "
            f"savings {rep.savings:.3f}"
        )
    report(5, ok, "; ".join(parts) + "; savings in [0.15, 0.30]")


def test_criterion_06_population_drift():
    cfg = presets.design("D")
    se = math.sqrt(ALPHA * (1 - ALPHA) / REPS)
    pos = run_oc(cfg, presets.scenario(2, 0, presets.DRIFT[("D", "positive")]), REPS, SEED)
    base = run_oc(cfg, presets.scenario(2, 1, presets.DRIFT[("D", "none")]), REPS, SEED)
    neg = run_oc(cfg, presets.scenario(2, 1, presets.DRIFT[("D", "negative")]), REPS, SEED)
    drop = base.generalized_power - neg.generalized_power
    ok = pos.fwer > ALPHA + 3 * se and drop >= 0.03
    report(
        6,
        ok,
        f"benchmark 0.17 FWER={pos.fwer:.4f} (must exceed {ALPHA + 3 * se:.4f}); "
        f"power no drift {base.generalized_power:.4f}, benchmark 0.23 {neg.generalized_power:.4f}, "
        f"drop {drop:.4f} (must be >= 0.03)",
    )


# Smallest even total at which every n1 in the grid leaves n2 >= 1 for a
# three-dose Design C (4 stage-1 arms, 2 stage-2 arms): 4 * 140 + 2.
SWEEP_TOTAL = 562
SWEEP_N1 = [30, 50, 80, 110, 140]


def test_criterion_07_allocation_sweep():
    cfg, sc = presets.design("C", n_doses=3), presets.scenario(3, 2)
    rows = allocation_sweep(cfg, sc, SWEEP_TOTAL, SWEEP_N1, REPS, SEED)
    power = {r.n1: r.generalized_power for r in rows}
    complete = sorted(power) == SWEEP_N1
    ok = complete and power[80] - power[30] >= 0.03 and power[80] - power[140] >= 0.03
    table = ", ".join(f"n1={r.n1}/n2={r.n2}: {r.generalized_power:.4f}" for r in rows)
    report(7, ok, f"total {SWEEP_TOTAL}: {table}; need power(80) >= power(30) + 0.03 and >= power(140) + 0.03")


CTCT_REPS = 100_000


def test_criterion_08_ctct_validity():
    parts, ok = [], True
    alphas = (0.025, 0.05)
    for method in ("dunnett", "sidak"):
        for J in (2, 3):
            counts = null_rejection_counts(J, method, alphas, CTCT_REPS, seed=SEED + J)
            for a, c in zip(alphas, counts):
                rate = c / CTCT_REPS
                lim = a + 3 * math.sqrt(a * (1 - a) / CTCT_REPS)
                ok &= rate <= lim
                parts.append(f"{method} J={J} a={a}: {rate:.5f}<={lim:.5f}")
    report(8, ok, "; ".join(parts))


def _mvn_max_exceed(c, m, rho, draws, g, chunk=1_000_000):
    hits = 0
    done = 0
    while done < draws:
        k = min(chunk, draws - done)
        shared = g.standard_normal(k)
        own = g.standard_normal((k, m))
        z = math.sqrt(rho) * shared[:, None] + math.sqrt(1 - rho) * own
        hits += int(np.count_nonzero(z.max(axis=1) > c))
        done += k
    return hits / draws


def test_criterion_09_numerical_oracles(oracles):
    g = np.random.default_rng(SEED)
    draws = 10_000_000
    worst = 0.0
    dunnett_ok = True
    for _ in range(10):
        c, m, rho = float(g.uniform(0.0, 3.0)), int(g.integers(2, 6)), float(g.uniform(0.05, 0.9))
        mc = _mvn_max_exceed(c, m, rho, draws, g)
        se = math.sqrt(max(mc * (1 - mc), 1e-12) / draws)
        dev = abs(dunnett_maxz_pvalue(c, m, rho) - mc) / se
        worst = max(worst, dev)
        dunnett_ok &= dev <= 3
    beta_err = max(
        abs(beta_tail_below(BetaPrior(a, b), s, n, thr) - ref) for a, b, s, n, thr, ref in oracles["beta_tail"]
    )
    beta_ok = beta_err <= 1e-8 and len(oracles["beta_tail"]) == 100

    gates = GateSpec()
    mismatches = 0
    for _ in range(10_000):
        tables = []
        for _ in range(int(g.integers(2, 5))):
            n = int(g.integers(5, 60))
            tables.append(CellCounts(*map(int, g.multinomial(n, g.dirichlet(np.ones(4))))))
        a = select_optimal(tables, UtilitySpec(), gates).selected
        b = select_optimal(tables, TradeoffSpec(40 / 60), gates).selected
        mismatches += a != b
    ok = dunnett_ok and beta_ok and mismatches == 0
    report(
        9,
        ok,
        f"Dunnett vs 1e7-draw MVN worst |dev| {worst:.2f} SE (<= 3); "
        f"beta tail max error {beta_err:.1e} (<= 1e-8); argmax mismatches {mismatches}/10000",
    )


def test_criterion_10_reproducibility(configs_dir, tmp_path):
    outs = []
    for i, workers in enumerate((1, 4)):
        out = tmp_path / f"run{i}.csv"
        subprocess.run(
            [sys.executable, "-m", "seamless_trials", "simulate", "--config",
             str(configs_dir / "C_2dose_s1.json"), "--reps", "2000", "--seed", "99",
             "--workers", str(workers), "--out", str(out)],
            check=True,
        )
        outs.append(out.read_bytes())
    report(10, outs[0] == outs[1] and len(outs[0]) > 0, f"1 vs 4 workers: {len(outs[0])} bytes, identical={outs[0] == outs[1]}")
