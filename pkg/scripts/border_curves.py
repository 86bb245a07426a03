#!/usr/bin/env python3
"""Attraction/repulsion border in the (eps(0), mu(0)) plane.

Emits the thick-plate border (root of the long-distance coefficient) and the
thin-plate border (closed form) over a log grid of static permittivities.
Both approach slope 23/7 near the vacuum point; the strong-response asymptote
is mu/eps = 5.11 (thick) vs 7/3 (thin).

Usage: python scripts/border_curves.py [outdir]
"""

import json
import sys
from pathlib import Path

from vdwlayers.cli import main

BASE = {
    "atom": {"transitions": [{"frequency": 1.0, "dipole_sq": 1.0}]},
    "materials": {},
}

if __name__ == "__main__":
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("out/border")
    out.mkdir(parents=True, exist_ok=True)
    code = 0
    for kind in ("thick", "thin"):
        doc = dict(BASE)
        doc["label"] = f"{kind}-plate border"
        doc["border"] = {
            "plate_kind": kind,
            "eps_min": 1.0001,
            "eps_max": 100.0,
            "points": 60,
            "spacing": "log",
        }
        cfg = out / f"config_{kind}.json"
        cfg.write_text(json.dumps(doc, indent=2))
        code = max(code, main(["border", "--config", str(cfg), "--out", str(out)]))
    raise SystemExit(code)
