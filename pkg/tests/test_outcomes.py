import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats as sps

from seamless_trials.outcomes import (
    Cohort,
    ControlTruth,
    CopulaSpec,
    DoseTruth,
    ScenarioSpec,
    cell_probabilities,
    censor_at,
    draw_control_responses,
    draw_dose_outcome,
    draw_dose_outcomes,
    draw_survival_time,
    draw_survival_times,
    enroll_times,
)
from seamless_trials.stats import DomainError


def rng(seed=0):
    return np.random.default_rng(seed)


@pytest.mark.parametrize("rho", [0.0, 0.4, -0.6])
def test_marginals_calibrated(rho):
    dose = DoseTruth(0.37, 0.12)
    n = 1_000_000
    y_t, y_e = draw_dose_outcomes(dose, CopulaSpec(rho), n, rng(1))
    for got, p in ((y_t.mean(), dose.p_t), (y_e.mean(), dose.p_e)):
        assert abs(got - p) < 3 * np.sqrt(p * (1 - p) / n)


def test_copula_sign_symmetry():
    dose = DoseTruth(0.4, 0.3)
    pos = np.corrcoef(*draw_dose_outcomes(dose, CopulaSpec(0.5), 200_000, rng(2)))[0, 1]
    neg = np.corrcoef(*draw_dose_outcomes(dose, CopulaSpec(-0.5), 200_000, rng(2)))[0, 1]
    assert pos > 0.1 and neg < -0.1
    # magnitudes only match when both margins are 1/2
    half = DoseTruth(0.5, 0.5)
    pos = np.corrcoef(*draw_dose_outcomes(half, CopulaSpec(0.5), 200_000, rng(2)))[0, 1]
    neg = np.corrcoef(*draw_dose_outcomes(half, CopulaSpec(-0.5), 200_000, rng(2)))[0, 1]
    assert pos == pytest.approx(-neg, abs=0.01)


@pytest.mark.parametrize("rho", [0.0, 0.5, -0.3])
def test_cell_probabilities_match_simulation(rho):
    dose = DoseTruth(0.4, 0.25)
    pi = cell_probabilities(dose, CopulaSpec(rho))
    assert sum(pi) == pytest.approx(1.0)
    assert pi[0] + pi[1] == pytest.approx(dose.p_e)
    assert pi[1] + pi[3] == pytest.approx(dose.p_t)
    n = 400_000
    y_t, y_e = draw_dose_outcomes(dose, CopulaSpec(rho), n, rng(3))
    emp = [np.mean(y_e & ~y_t), np.mean(y_e & y_t), np.mean(~y_e & ~y_t), np.mean(~y_e & y_t)]
    for e, p in zip(emp, pi):
        assert abs(e - p) < 4 * np.sqrt(p * (1 - p) / n)


def test_single_draw_helpers():
    y_t, y_e = draw_dose_outcome(DoseTruth(1.0, 0.0), CopulaSpec(), rng())
    assert (y_t, y_e) == (False, True)
    assert draw_survival_time(True, ControlTruth(), 1.0, rng()) > 0


def test_control_responses_rate():
    y = draw_control_responses(ControlTruth(p_c=0.2), 500_000, rng(4))
    assert abs(y.mean() - 0.2) < 3 * np.sqrt(0.16 / 500_000)


@pytest.mark.parametrize("hr", [1.0, 0.64])
def test_survival_times_exponential_ks(hr):
    control = ControlTruth(0.2, 0.26, 0.26)
    t = draw_survival_times(np.zeros(100_000, bool), control, hr, rng(5))
    res = sps.kstest(t, "expon", args=(0, 1 / (0.26 * hr)))
    # asymptotic 1% critical value
    assert res.statistic < 1.628 / np.sqrt(t.size)


def test_responder_hazard_used():
    control = ControlTruth(0.2, lambda_resp=0.1, lambda_nonresp=0.5)
    y = np.array([True] * 50_000 + [False] * 50_000)
    t = draw_survival_times(y, control, 0.5, rng(6))
    assert t[:50_000].mean() == pytest.approx(1 / 0.05, rel=0.03)
    assert t[50_000:].mean() == pytest.approx(1 / 0.25, rel=0.03)


def test_enroll_times():
    t = enroll_times(5, 2.0, start=10.0)
    np.testing.assert_allclose(t, [10.5, 11.0, 11.5, 12.0, 12.5])
    with pytest.raises(DomainError):
        enroll_times(0, 2.0)
    with pytest.raises(DomainError):
        enroll_times(3, 0.0)


def test_censor_at_hand_example():
    c = Cohort(0, 1, [1.0, 2.0, 3.0, 9.0], [0, 0, 0, 0], [0, 1, 0, 0], [2.0, 10.0, 1.0, 1.0])
    s = censor_at(c, 8.0)
    # last patient enrolled after the cut; others follow up 7, 6, 5 months
    np.testing.assert_allclose(s.times, [2.0, 6.0, 1.0])
    np.testing.assert_array_equal(s.events, [True, False, True])
    s2 = censor_at(c.records(), 8.0)
    np.testing.assert_array_equal(s2.times, s.times)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**31), st.floats(0.5, 80), st.floats(0.0, 40))
def test_censoring_properties(seed, t_cut, shrink):
    g = rng(seed)
    n = 40
    enroll = np.sort(g.uniform(0, 30, n))
    raw = g.exponential(8, n)
    c = Cohort(0, 1, enroll, np.zeros(n, bool), np.zeros(n, bool), raw)
    s = censor_at(c, t_cut)
    keep = t_cut - enroll > 0
    assert np.all(s.times <= (t_cut - enroll[keep]) + 1e-12)
    earlier = max(t_cut - shrink, 1e-3)
    if np.any(earlier - enroll > 0):
        assert censor_at(c, earlier).n_events <= s.n_events


def test_cohort_record_round_trip():
    c = Cohort(2, 2, [1.0, 2.0], [True, False], [False, True], [3.0, 4.0])
    back = Cohort.from_records(c.records())
    assert back.arm == 2 and back.stage == 2
    for name in ("enroll", "y_t", "y_e", "event_time"):
        np.testing.assert_array_equal(getattr(back, name), getattr(c, name))
    assert c.n_resp == 1 and len(c) == 2


def test_scenario_validation_and_nulls():
    doses = (DoseTruth(0.2, 0.1, 1.0), DoseTruth(0.4, 0.1, 0.6))
    sc = ScenarioSpec(doses, optimal=1)
    assert sc.dose_is_null(0, "survival") and not sc.dose_is_null(1, "survival")
    assert sc.dose_is_null(0, "response") and not sc.dose_is_null(1, "response")
    with pytest.raises(DomainError):
        ScenarioSpec(doses[:1])
    with pytest.raises(DomainError):
        ScenarioSpec(doses, optimal=2)
    with pytest.raises(DomainError):
        DoseTruth(1.2, 0.1)
    with pytest.raises(DomainError):
        CopulaSpec(1.0)
