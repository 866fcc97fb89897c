import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from seamless_trials.outcomes import CopulaSpec, DoseTruth, cell_probabilities
from seamless_trials.selection import (
    CellCounts,
    GateSpec,
    TradeoffSpec,
    UtilitySpec,
    desirability,
    desirability_of_truth,
    expected_score,
    gate_efficacy,
    gate_safety,
    select_optimal,
)
from seamless_trials.stats import DomainError

GATES = GateSpec()


def random_tables(g, J, n_max=60):
    tables = []
    for _ in range(J):
        n = int(g.integers(5, n_max))
        c = g.multinomial(n, g.dirichlet(np.ones(4)))
        tables.append(CellCounts(*map(int, c)))
    return tables


def test_cell_counts_from_outcomes():
    y_t = [0, 1, 0, 1, 0]
    y_e = [1, 1, 0, 0, 1]
    c = CellCounts.from_outcomes(y_t, y_e)
    assert (c.c1, c.c2, c.c3, c.c4) == (2, 1, 1, 1)
    assert c.responders == 3 and c.toxicities == 2 and c.n == 5
    with pytest.raises(DomainError):
        CellCounts(-1, 0, 0, 0)


def test_expected_score_hand_value():
    assert expected_score(CellCounts(10, 5, 30, 5), UtilitySpec()) == pytest.approx(
        (0 * 10 + 40 * 5 + 60 * 30 + 100 * 5) / 50
    )


def test_gate_hand_values():
    # Pr(p_T < 0.3 | 20 of 50 toxic) under Beta(21, 31)
    assert gate_safety(20, 50, GATES) == (special.betainc(21, 31, 0.3) > 0.1)
    assert gate_safety(5, 50, GATES) and not gate_safety(25, 50, GATES)
    assert gate_efficacy(20, 50, GATES) and not gate_efficacy(5, 50, GATES)


def test_argmax_equivalence_random_tables():
    g = np.random.default_rng(99)
    spec_u, spec_w = UtilitySpec(), TradeoffSpec(40 / 60)
    for _ in range(10_000):
        tables = random_tables(g, int(g.integers(2, 5)))
        a = select_optimal(tables, spec_u, GATES).selected
        b = select_optimal(tables, spec_w, GATES).selected
        assert a == b


@settings(max_examples=200)
@given(st.integers(0, 100), st.integers(1, 99))
def test_equivalence_holds_for_other_scores(u2, seed):
    u3 = 100 - u2
    if u2 >= u3 or u2 == 0:
        return
    g = np.random.default_rng(seed)
    tables = random_tables(g, 3)
    a = select_optimal(tables, UtilitySpec(0, u2, u3, 100), GATES).selected
    b = select_optimal(tables, TradeoffSpec(u2 / u3), GATES).selected
    assert a == b


@settings(max_examples=200)
@given(st.integers(1, 80), st.data())
def test_gate_monotonicity(n, data):
    k = data.draw(st.integers(0, n - 1))
    assert gate_safety(k + 1, n, GATES) <= gate_safety(k, n, GATES)
    assert gate_efficacy(k + 1, n, GATES) >= gate_efficacy(k, n, GATES)


@settings(max_examples=300)
@given(st.integers(0, 2**31), st.integers(2, 4))
def test_selected_dose_passes_gates_and_permutes(seed, J):
    g = np.random.default_rng(seed)
    tables = random_tables(g, J)
    d = select_optimal(tables, UtilitySpec(), GATES)
    if d.selected is not None:
        assert d.safety_pass[d.selected] and d.efficacy_pass[d.selected]
    perm = g.permutation(J)
    d2 = select_optimal([tables[i] for i in perm], UtilitySpec(), GATES)
    admissible_scores = sorted(s for s, a in zip(d.scores, d.admissible) if a)
    tie = len(admissible_scores) > 1 and admissible_scores[0] == admissible_scores[1]
    if not tie:
        expected = None if d.selected is None else int(np.where(perm == d.selected)[0][0])
        assert d2.selected == expected


def test_ties_go_to_lowest_index_and_early_stop():
    same = CellCounts(20, 2, 25, 3)
    assert select_optimal([same, same, same], UtilitySpec(), GATES).selected == 0
    bad = CellCounts(1, 9, 10, 30)
    d = select_optimal([bad, bad], UtilitySpec(), GATES)
    assert d.selected is None and d.stopped_early
    with pytest.raises(DomainError):
        select_optimal([same], UtilitySpec(), GATES)


def test_inadmissible_best_score_skipped():
    # dose 0 scores best but is too toxic
    toxic = CellCounts(30, 20, 0, 0)
    fine = CellCounts(20, 2, 25, 3)
    assert select_optimal([toxic, fine], UtilitySpec(), GATES).selected == 1


def test_maximize_orientation():
    spec = UtilitySpec(100, 60, 40, 0, "maximize")
    lo, hi = CellCounts(20, 2, 25, 3), CellCounts(30, 2, 15, 3)
    assert select_optimal([lo, hi], spec, GATES).selected == 1
    assert select_optimal([lo, hi], UtilitySpec(), GATES).selected == 1


@pytest.mark.parametrize(
    "kwargs",
    [dict(u1=50), dict(u4=10), dict(orientation="sideways"), dict(u2=120)],
)
def test_utility_validation(kwargs):
    with pytest.raises(DomainError):
        UtilitySpec(**kwargs)


def test_gate_validation():
    with pytest.raises(DomainError):
        GateSpec(phi_t=1.0)


def test_truth_desirability_matches_cells():
    dose, cop = DoseTruth(0.4, 0.1), CopulaSpec(0.3)
    pi = cell_probabilities(dose, cop)
    u = UtilitySpec()
    assert desirability_of_truth(dose, cop, u) == pytest.approx(40 * pi[1] + 60 * pi[2] + 100 * pi[3])
    assert desirability_of_truth(dose, cop, TradeoffSpec()) == pytest.approx(0.4 - 0.1 * 2 / 3)
    table = CellCounts(10, 5, 30, 5)
    assert desirability(table, TradeoffSpec()) == pytest.approx(15 / 50 - (2 / 3) * 10 / 50)
