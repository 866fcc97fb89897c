"""Reference scenarios and design settings.

Per-dose values for the non-null scenarios are reconstructions: optimal
doses carry the target response rate 0.4 and hazard ratio 0.64 against a
control with response rate 0.2 and hazard 0.26/month; the competing doses
were chosen so that stage-1 selection is imperfect (PCS a little above
80%). Null scenarios put every dose at response 0.2, toxicity 0.1, hazard
ratio 1.
"""
from __future__ import annotations

from .outcomes import ControlTruth, DoseTruth, HistoricalBenchmark, ScenarioSpec
from .trial import DesignConfig

RECONSTRUCTED = True

NULL_DOSE = DoseTruth(0.2, 0.1, 1.0)

_TWO_DOSE = {
    0: ((NULL_DOSE, NULL_DOSE), None),
    1: ((DoseTruth(0.40, 0.10, 0.64), DoseTruth(0.45, 0.33, 0.62)), 0),
    2: ((DoseTruth(0.25, 0.05, 0.85), DoseTruth(0.40, 0.10, 0.64)), 1),
}

_THREE_DOSE = {
    0: ((NULL_DOSE, NULL_DOSE, NULL_DOSE), None),
    1: ((DoseTruth(0.40, 0.10, 0.64), DoseTruth(0.45, 0.33, 0.62), DoseTruth(0.50, 0.45, 0.60)), 0),
    2: ((DoseTruth(0.28, 0.05, 0.82), DoseTruth(0.40, 0.10, 0.64), DoseTruth(0.45, 0.35, 0.62)), 1),
    3: ((DoseTruth(0.20, 0.05, 1.00), DoseTruth(0.30, 0.08, 0.80), DoseTruth(0.40, 0.10, 0.64)), 2),
}

# (n1, n2) per arm reaching about 80% generalized power
REFERENCE_SIZES = {
    ("A", 2): (50, 100),
    ("B", 2): (50, 115),
    ("C", 2): (50, 80),
    ("D", 2): (45, 30),
    ("A", 3): (80, 100),
    ("B", 3): (80, 110),
    ("C", 3): (90, 60),
    ("D", 3): (80, 20),
}


def scenario(n_doses: int, index: int, historical: HistoricalBenchmark | None = None) -> ScenarioSpec:
    table = _TWO_DOSE if n_doses == 2 else _THREE_DOSE
    if n_doses not in (2, 3) or index not in table:
        raise KeyError(f"no preset scenario {index} for {n_doses} doses")
    doses, optimal = table[index]
    return ScenarioSpec(
        doses=doses,
        control=ControlTruth(0.2, 0.26, 0.26),
        historical=historical or HistoricalBenchmark(0.2, 0.26),
        optimal=optimal,
        name=f"{n_doses}dose-s{index}",
    )


def design(letter: str, n_doses: int = 2, **overrides) -> DesignConfig:
    n1, n2 = REFERENCE_SIZES[(letter, n_doses)]
    kwargs = dict(n1=n1, n2=n2)
    kwargs.update(overrides)
    return DesignConfig(letter, **kwargs)


# historical benchmarks under population drift, keyed by (design, direction)
DRIFT = {
    ("B", "positive"): HistoricalBenchmark(0.05, 0.34),
    ("B", "negative"): HistoricalBenchmark(0.35, 0.22),
    ("D", "positive"): HistoricalBenchmark(0.17, 0.26),
    ("D", "negative"): HistoricalBenchmark(0.23, 0.26),
    ("B", "none"): HistoricalBenchmark(0.2, 0.26),
    ("D", "none"): HistoricalBenchmark(0.2, 0.26),
}

# conventional counterparts calibrated to the same 80% target (two-dose scenario 1)
CC_SIZES = {
    ("C", 2): (50, 120),
    ("D", 2): (45, 65),
}


def preset_documents() -> dict[str, dict]:
    """Every shipped configuration, keyed by file stem."""
    from .config import to_document

    docs = {}
    for (letter, n_doses), _ in REFERENCE_SIZES.items():
        table = _TWO_DOSE if n_doses == 2 else _THREE_DOSE
        for idx in table:
            docs[f"{letter}_{n_doses}dose_s{idx}"] = to_document(
                design(letter, n_doses), scenario(n_doses, idx)
            )
    for (letter, n_doses), (n1, n2) in CC_SIZES.items():
        docs[f"{letter}_{n_doses}dose_s1_cc"] = to_document(
            design(letter, n_doses, n1=n1, n2=n2), scenario(n_doses, 1)
        )
    for (letter, direction), hist in DRIFT.items():
        if direction == "none":
            continue
        for idx in (0, 1):
            docs[f"{letter}_2dose_s{idx}_drift_{direction}"] = to_document(
                design(letter, 2), scenario(2, idx, historical=hist)
            )
    for stem, doc in docs.items():
        if doc["optimal"] is not None:
            doc["reconstructed"] = True
    return docs
