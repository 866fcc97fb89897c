"""Regenerate configs/*.json from the presets."""
import json
import sys
from pathlib import Path

from seamless_trials.presets import preset_documents

out = Path(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).resolve().parents[1] / "configs")
out.mkdir(exist_ok=True)
for stem, doc in preset_documents().items():
    (out / f"{stem}.json").write_text(json.dumps(doc, indent=2) + "\n")
(out / "grid_C_2dose.json").write_text(json.dumps({"n1": [40, 50, 60], "n2": [70, 80, 90]}) + "\n")
(out / "grid_C_2dose_cc.json").write_text(json.dumps({"n1": [50], "n2": list(range(100, 145, 5))}) + "\n")
(out / "grid_D_2dose_cc.json").write_text(json.dumps({"n1": [45], "n2": list(range(50, 85, 5))}) + "\n")
print(f"wrote configs to {out}")
