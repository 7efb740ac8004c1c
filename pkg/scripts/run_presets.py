#!/usr/bin/env python3
"""Run the four simulator presets at desk-scale parameters.

Writes one report JSON per preset into ./reports/ (created if missing).
Reports are deterministic: exact amplitude arithmetic, no sampling.
"""

from __future__ import annotations

import json
import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from poswkit.cli import _simulate_preset  # noqa: E402

PRESETS = [
    {"preset": "collision", "m": 2, "lambda": 2, "queries": 3},
    {"preset": "collision", "m": 2, "lambda": 3, "queries": 3},
    {"preset": "grover", "m": 2, "lambda": 2, "queries": 3},
    {"preset": "path-growth", "m": 2, "lambda": 1, "rounds": 3, "width": 1},
    {"preset": "oracle-equivalence", "m": 1, "lambda": 1, "queries": 2},
    {"preset": "oracle-equivalence", "m": 2, "lambda": 1, "queries": 2},
]


def main() -> None:
    out_dir = pathlib.Path("reports")
    out_dir.mkdir(exist_ok=True)
    for i, spec in enumerate(PRESETS):
        report = _simulate_preset(spec)
        name = f"{spec['preset']}_{i}.json"
        (out_dir / name).write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
        print(f"wrote reports/{name}")
        if spec["preset"] == "collision":
            worst = max(r["collision_probability"] for r in report["rows"])
            print(f"  max recorded-collision probability: {worst:.6f}")
        if spec["preset"] == "oracle-equivalence":
            print(f"  total variation vs exhaustive reference: {report['total_variation']:.3e}")


if __name__ == "__main__":
    main()
