"""JSON run configuration.

One document describes both the design and the true scenario::

    {
      "design": "C", "n1": 50, "n2": 80, "alpha": 0.05,
      "doses": [{"p_e": 0.4, "p_t": 0.1, "hr": 0.64}, {"p_e": 0.45, "p_t": 0.33, "hr": 0.62}],
      "control": {"p_c": 0.2, "lambda_resp": 0.26, "lambda_nonresp": 0.26},
      "historical": {"p_c": 0.2, "hazard": 0.26},
      "gates": {"phi_t": 0.3, "phi_e": 0.3, "c_t": 0.1, "c_e": 0.1, "prior_a": 1, "prior_b": 1},
      "utility": {"u1": 0, "u2": 40, "u3": 60, "u4": 100, "orientation": "minimize"},
      "rho": 0.0, "accrual_rate": 2, "assess_time": 0, "followup_min": 12
    }

``tradeoff: {"w": ...}`` may replace ``utility``. Optional extras:
``scenario`` (label), ``reconstructed`` (informational flag on scenarios
whose per-dose values were filled in by hand), ``optimal`` (1-based dose number or null; derived
from the truth when absent), ``rho_dunnett`` and ``stage1_endpoint``.
Unknown keys are rejected.
"""
from __future__ import annotations

import json
from pathlib import Path

from .outcomes import ControlTruth, CopulaSpec, DoseTruth, HistoricalBenchmark, ScenarioSpec
from .selection import GateSpec, TradeoffSpec, UtilitySpec, desirability_of_truth
from .stats import BetaPrior
from .trial import ConfigError, DesignConfig

TOP_KEYS = {
    "design", "doses", "control", "historical", "n1", "n2", "alpha", "gates",
    "utility", "tradeoff", "rho", "accrual_rate", "assess_time", "followup_min",
    "scenario", "optimal", "rho_dunnett", "stage1_endpoint", "reconstructed",
}
REQUIRED = {"design", "doses", "n1", "n2"}
DOSE_KEYS = {"p_e", "p_t", "hr"}
CONTROL_KEYS = {"p_c", "lambda_resp", "lambda_nonresp"}
HISTORICAL_KEYS = {"p_c", "hazard"}
GATE_KEYS = {"phi_t", "phi_e", "c_t", "c_e", "prior_a", "prior_b"}
UTILITY_KEYS = {"u1", "u2", "u3", "u4", "orientation"}
TRADEOFF_KEYS = {"w"}


def _check_keys(obj, allowed, where, required=()):
    if not isinstance(obj, dict):
        raise ConfigError(f"{where} must be a JSON object")
    unknown = set(obj) - set(allowed)
    if unknown:
        raise ConfigError(f"unknown key(s) in {where}: {', '.join(sorted(unknown))}")
    missing = set(required) - set(obj)
    if missing:
        raise ConfigError(f"missing key(s) in {where}: {', '.join(sorted(missing))}")


def derive_optimal(scenario: ScenarioSpec, config: DesignConfig) -> int | None:
    """Best truly effective dose whose true rates clear both gate limits, if any."""
    gates = config.gates
    best, best_score = None, None
    sign = 1.0 if isinstance(config.utility, TradeoffSpec) or config.utility.orientation == "maximize" else -1.0
    for j, dose in enumerate(scenario.doses):
        if scenario.dose_is_null(j, config.endpoint):
            continue
        if not (dose.p_t < gates.phi_t and dose.p_e > gates.phi_e):
            continue
        score = sign * desirability_of_truth(dose, scenario.copula, config.utility)
        if best_score is None or score > best_score:
            best, best_score = j, score
    return best


def parse_config(doc: dict) -> tuple[DesignConfig, ScenarioSpec]:
    _check_keys(doc, TOP_KEYS, "config", REQUIRED)
    if not isinstance(doc.get("reconstructed", False), bool):
        raise ConfigError("'reconstructed' must be true or false")
    if "utility" in doc and "tradeoff" in doc:
        raise ConfigError("give either 'utility' or 'tradeoff', not both")
    try:
        doses = doc["doses"]
        if not isinstance(doses, list) or len(doses) < 2:
            raise ConfigError("'doses' must be a list of at least two objects")
        for i, d in enumerate(doses):
            _check_keys(d, DOSE_KEYS, f"doses[{i}]", {"p_e", "p_t"})
        dose_truths = [DoseTruth(d["p_e"], d["p_t"], d.get("hr", 1.0)) for d in doses]

        ctl = doc.get("control", {})
        _check_keys(ctl, CONTROL_KEYS, "control")
        control = ControlTruth(
            ctl.get("p_c", 0.2), ctl.get("lambda_resp", 0.26), ctl.get("lambda_nonresp", 0.26)
        )
        hist = doc.get("historical", {})
        _check_keys(hist, HISTORICAL_KEYS, "historical")
        historical = HistoricalBenchmark(
            hist.get("p_c", control.p_c), hist.get("hazard", control.lambda_nonresp)
        )

        g = doc.get("gates", {})
        _check_keys(g, GATE_KEYS, "gates")
        gates = GateSpec(
            g.get("phi_t", 0.3), g.get("phi_e", 0.3), g.get("c_t", 0.1), g.get("c_e", 0.1),
            BetaPrior(g.get("prior_a", 1.0), g.get("prior_b", 1.0)),
        )
        if "tradeoff" in doc:
            _check_keys(doc["tradeoff"], TRADEOFF_KEYS, "tradeoff", {"w"})
            utility = TradeoffSpec(doc["tradeoff"]["w"])
        else:
            u = doc.get("utility", {})
            _check_keys(u, UTILITY_KEYS, "utility")
            utility = UtilitySpec(
                u.get("u1", 0.0), u.get("u2", 40.0), u.get("u3", 60.0), u.get("u4", 100.0),
                u.get("orientation", "minimize"),
            )

        config = DesignConfig(
            design=doc["design"],
            n1=doc["n1"],
            n2=doc["n2"],
            alpha=doc.get("alpha", 0.05),
            gates=gates,
            utility=utility,
            accrual_rate=doc.get("accrual_rate", 2.0),
            assess_time=doc.get("assess_time", 0.0),
            followup_min=doc.get("followup_min", 12.0),
            rho_dunnett=doc.get("rho_dunnett"),
            stage1_endpoint=doc.get("stage1_endpoint"),
        )
        scenario = ScenarioSpec(
            doses=dose_truths,
            control=control,
            historical=historical,
            copula=CopulaSpec(doc.get("rho", 0.0)),
            name=str(doc.get("scenario", "")),
        )
    except ConfigError:
        raise
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc)) from exc

    if "optimal" in doc:
        opt = doc["optimal"]
        if opt is not None and (not isinstance(opt, int) or not 1 <= opt <= len(dose_truths)):
            raise ConfigError(f"'optimal' must be a dose number 1..{len(dose_truths)} or null")
        optimal = None if opt is None else opt - 1
    else:
        optimal = derive_optimal(scenario, config)
    scenario = ScenarioSpec(
        scenario.doses, scenario.control, scenario.historical, scenario.copula, optimal, scenario.name
    )
    return config, scenario


def load_config(path: str | Path) -> tuple[DesignConfig, ScenarioSpec]:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror}") from exc
    return parse_config(doc)


def to_document(config: DesignConfig, scenario: ScenarioSpec) -> dict:
    """Inverse of :func:`parse_config`."""
    doc = {
        "design": config.design,
        "scenario": scenario.name,
        "doses": [{"p_e": d.p_e, "p_t": d.p_t, "hr": d.hr} for d in scenario.doses],
        "optimal": None if scenario.optimal is None else scenario.optimal + 1,
        "control": {
            "p_c": scenario.control.p_c,
            "lambda_resp": scenario.control.lambda_resp,
            "lambda_nonresp": scenario.control.lambda_nonresp,
        },
        "historical": {"p_c": scenario.historical.p_c_hist, "hazard": scenario.historical.hazard_hist},
        "n1": config.n1,
        "n2": config.n2,
        "alpha": config.alpha,
        "gates": {
            "phi_t": config.gates.phi_t,
            "phi_e": config.gates.phi_e,
            "c_t": config.gates.c_t,
            "c_e": config.gates.c_e,
            "prior_a": config.gates.prior.a,
            "prior_b": config.gates.prior.b,
        },
        "rho": scenario.copula.rho,
        "accrual_rate": config.accrual_rate,
        "assess_time": config.assess_time,
        "followup_min": config.followup_min,
    }
    if isinstance(config.utility, TradeoffSpec):
        doc["tradeoff"] = {"w": config.utility.w}
    else:
        u = config.utility
        doc["utility"] = {"u1": u.u1, "u2": u.u2, "u3": u.u3, "u4": u.u4, "orientation": u.orientation}
    if config.rho_dunnett is not None:
        doc["rho_dunnett"] = config.rho_dunnett
    if config.stage1_endpoint is not None:
        doc["stage1_endpoint"] = config.stage1_endpoint
    return doc
