#!/usr/bin/env python3
"""Potential of a two-level atom in front of a thick magnetodielectric plate.

Scans U(z) for a family of static permeabilities at fixed electric response
(electric resonance 1.03 with plasma 0.75, magnetic resonance at 1.0, losses
1e-3): the repulsive wall appears and grows as mu(0) increases.

Usage: python scripts/wall_scan.py [outdir]
"""

import json
import math
import sys
from pathlib import Path

from vdwlayers.cli import main

MU0_VALUES = (1.0, 2.0, 5.0, 10.0)


def build_config() -> dict:
    materials = {}
    for mu0 in MU0_VALUES:
        body = {"electric": [{"plasma": 0.75, "transverse": 1.03, "damping": 0.001}]}
        if mu0 > 1.0:
            body["magnetic"] = [
                {"plasma": math.sqrt(mu0 - 1.0), "transverse": 1.0, "damping": 0.001}
            ]
        materials[f"mu{mu0:g}"] = body
    return {
        "label": "thick-plate wall formation",
        "atom": {"transitions": [{"frequency": 1.0, "dipole_sq": 1.0}]},
        "materials": materials,
        "geometry": {"kind": "halfspace", "material": list(materials)},
        "scan": {"z_min": 0.05, "z_max": 50.0, "points": 120, "spacing": "log"},
    }


if __name__ == "__main__":
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("out/wall_scan")
    out.mkdir(parents=True, exist_ok=True)
    cfg = out / "config.json"
    cfg.write_text(json.dumps(build_config(), indent=2))
    raise SystemExit(main(["scan", "--config", str(cfg), "--out", str(out)]))
