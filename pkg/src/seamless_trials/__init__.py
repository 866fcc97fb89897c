"""Simulation of seamless phase 2-3 dose-optimization trials (Designs A-D)."""
from ._backend import BACKEND
from .config import load_config, parse_config, to_document
from .oc import (
    OperatingCharacteristics,
    allocation_sweep,
    calibrate_n,
    compare_with_conventional,
    run_oc,
    simulate,
)
from .outcomes import ControlTruth, CopulaSpec, DoseTruth, HistoricalBenchmark, ScenarioSpec
from .selection import GateSpec, TradeoffSpec, UtilitySpec, select_optimal
from .trial import ConfigError, DesignConfig, run_conventional, run_trial

__all__ = [
    "BACKEND",
    "ConfigError",
    "ControlTruth",
    "CopulaSpec",
    "DesignConfig",
    "DoseTruth",
    "GateSpec",
    "HistoricalBenchmark",
    "OperatingCharacteristics",
    "ScenarioSpec",
    "TradeoffSpec",
    "UtilitySpec",
    "allocation_sweep",
    "calibrate_n",
    "compare_with_conventional",
    "load_config",
    "parse_config",
    "run_conventional",
    "run_oc",
    "run_trial",
    "select_optimal",
    "simulate",
    "to_document",
]
