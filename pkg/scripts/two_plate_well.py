#!/usr/bin/env python3
"""Potential well of an atom between two identical thick magnetodielectric plates.

Two runs: the moderate-reflectivity case, where multiple reflections are
negligible and the potential is effectively the sum of two single-plate
potentials, and an artificially amplified near-perfect-reflectivity case at
smaller separation, where the full potential dips below the pair sum near the
midpoint (see the U vs U_noreflect columns).

Usage: python scripts/two_plate_well.py [outdir]
"""

import json
import sys
from pathlib import Path

from vdwlayers.cli import main

ATOM = {"transitions": [{"frequency": 1.0, "dipole_sq": 1.0}]}

CASES = {
    "moderate": {
        "material": {
            "electric": [{"plasma": 0.75, "transverse": 1.03, "damping": 0.001}],
            "magnetic": [{"plasma": 2.0, "transverse": 1.0, "damping": 0.001}],
        },
        "separation": 15.0,
        "z_min": 0.3,
        "z_max": 14.7,
    },
    "amplified": {
        "material": {
            "electric": [{"plasma": 0.75e5, "transverse": 1.03, "damping": 0.001}],
            "magnetic": [{"plasma": 2.0e5, "transverse": 1.0, "damping": 0.001}],
        },
        "separation": 6.0,
        "z_min": 0.3,
        "z_max": 5.7,
    },
}

if __name__ == "__main__":
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("out/two_plates")
    code = 0
    for name, case in CASES.items():
        subdir = out / name
        subdir.mkdir(parents=True, exist_ok=True)
        doc = {
            "label": f"two plates, {name} reflectivity",
            "atom": ATOM,
            "materials": {"plate": case["material"]},
            "geometry": {
                "kind": "two-plates",
                "material": "plate",
                "separation": case["separation"],
            },
            "scan": {
                "z_min": case["z_min"],
                "z_max": case["z_max"],
                "points": 97,
                "spacing": "linear",
            },
        }
        cfg = subdir / "config.json"
        cfg.write_text(json.dumps(doc, indent=2))
        code = max(code, main(["scan", "--config", str(cfg), "--out", str(subdir)]))
    raise SystemExit(code)
