"""Acceptance suite: every criterion at its stated tolerance, one line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
PASS/FAIL lines.
"""

import dataclasses
import math

import numpy as np
import pytest
from scipy.optimize import brentq

import vdwlayers as v

from conftest import constant_material, fig2_material, material

ATOM = v.AtomModel.two_level()
WEAK_ELECTRIC = material(wpe=0.02, wte=1.03, wpm=2.0, wtm=1.0)


def _report(num: int, description: str, ok: bool, detail: str = "") -> None:
    print(f"[criterion {num:02d}] {'PASS' if ok else 'FAIL'}  {description}  {detail}")
    assert ok, f"criterion {num}: {description} {detail}"


def test_criterion_01_retarded_mirror_limit():
    z = 50.0
    got = v.potential_mirror(ATOM, z).value
    want = -3.0 * ATOM.alpha0 / (32.0 * math.pi**2 * z**4)
    rel = abs(got / want - 1.0)
    _report(1, "retarded limit at a conducting mirror within 2%", rel < 0.02,
            f"rel={rel:.2e}")


def test_criterion_02_nonretarded_mirror_limit():
    z = 1e-3
    got = v.potential_mirror(ATOM, z).value
    want = -ATOM.dipole_sq_total / (48.0 * math.pi * z**3)
    rel = abs(got / want - 1.0)
    _report(2, "nonretarded limit at a conducting mirror within 2%", rel < 0.02,
            f"rel={rel:.2e}")


def test_criterion_03_permeable_mirror_antisymmetry():
    worst = 0.0
    for z in np.geomspace(1e-3, 1e2, 11):
        att = v.potential_mirror(ATOM, z, "conducting").value
        rep = v.potential_mirror(ATOM, z, "permeable").value
        worst = max(worst, abs(rep + att))
    _report(3, "permeable mirror is the exact sign flip", worst == 0.0,
            f"max |U_rep + U_att| = {worst:.1e}")


def test_criterion_04_thick_strong_limit_border():
    z_root = v.strong_limit_impedance_root()
    (point,) = v.border_curve("thick", [100.0])
    ratio = point.mu0 / point.eps0
    ok = abs(z_root - 2.26) <= 0.01 and abs(ratio - 5.11) <= 0.02
    _report(4, "strong-limit border: Z = 2.26 +- 0.01 and ratio 5.11 +- 0.02 at eps0=100",
            ok, f"Z={z_root:.4f}, mu0/eps0={ratio:.4f}")


def test_criterion_05_weak_limit_border_ratio():
    chi_e = 1e-4
    (thick_pt,) = v.border_curve("thick", [1.0 + chi_e])
    thick_ratio = (thick_pt.mu0 - 1.0) / chi_e

    def thin_d5(chi_m: float) -> float:
        return v.thin_coefficients(ATOM, constant_material(1.0 + chi_e, 1.0 + chi_m), 1.0).d5

    thin_ratio = brentq(thin_d5, 1e-5, 1e-3, xtol=1e-14) / chi_e
    target = 23.0 / 7.0
    ok = (abs(thick_ratio / target - 1.0) < 0.005
          and abs(thin_ratio / target - 1.0) < 0.005)
    _report(5, "weak-limit border at chi_m/chi_e = 23/7 within 0.5% (thick and thin)",
            ok, f"thick={thick_ratio:.5f}, thin={thin_ratio:.5f}, target={target:.5f}")


def test_criterion_06_thin_strong_limit_border():
    ratio = v.thin_border_mu(1e3) / 1e3
    rel = abs(ratio / (7.0 / 3.0) - 1.0)
    _report(6, "thin strong-limit border ratio 7/3 within 0.5% at eps0 = 1e3",
            rel < 0.005, f"ratio={ratio:.5f}")


def test_criterion_07_asymptote_matching():
    m = fig2_material(mu0=5.0)
    c = v.thick_coefficients(ATOM, m)
    z = 100.0
    far = abs(v.potential_halfspace(ATOM, m, z).value * z**4 / c.c4 - 1.0)

    electric = material(wpe=0.75, wte=1.03, ge=0.001)
    ce = v.thick_coefficients(ATOM, electric)
    z = 1e-3
    near = abs(-v.potential_halfspace(ATOM, electric, z).value * z**3 / ce.c3 - 1.0)
    ok = far < 0.05 and near < 0.05
    _report(7, "power-law asymptotes match the potential within 5%", ok,
            f"|U z^4/C4 - 1|={far:.3f}, |-U z^3/C3 - 1|={near:.2e}")


def test_criterion_08_power_law_exponents():
    # Note: the stated exponent set lists -2 for the thick-plate short-range
    # magnetic potential; the implemented physics (and the cited table, which
    # tabulates forces) give U ~ 1/z there, so -1 is asserted for that slot.
    def slope(f, z1, z2):
        return math.log(abs(f(z2)) / abs(f(z1))) / math.log(z2 / z1)

    electric = material(wpe=0.75, wte=1.03, ge=0.001)
    magnetic = material(wpm=2.0, wtm=1.0, gm=0.001)
    d = 1e-8
    thick_e = lambda z: v.potential_halfspace(ATOM, electric, z).value
    thick_m = lambda z: v.potential_halfspace(ATOM, magnetic, z).value
    thin_e = lambda z: v.potential_thin_plate(ATOM, electric, d, z).value
    thin_m = lambda z: v.potential_thin_plate(ATOM, magnetic, d, z).value

    got = {
        "thick long": slope(thick_e, 100.0, 200.0),
        "thin long": slope(thin_e, 100.0, 200.0),
        "thick short electric": slope(thick_e, 1e-3, 2e-3),
        "thick short magnetic": slope(thick_m, 1e-3, 2e-3),
        "thin short electric": slope(thin_e, 1e-3, 2e-3),
        "thin short magnetic": slope(thin_m, 1e-3, 2e-3),
    }
    want = {
        "thick long": -4.0,
        "thin long": -5.0,
        "thick short electric": -3.0,
        "thick short magnetic": -1.0,
        "thin short electric": -4.0,
        "thin short magnetic": -2.0,
    }
    gaps = {k: abs(got[k] - want[k]) for k in want}
    ok = all(g < 0.05 for g in gaps.values())
    detail = ", ".join(f"{k}: {got[k]:+.3f}" for k in want)
    _report(8, "log-log slopes reproduce the power-law table within 0.05", ok, detail)


def test_criterion_09_wall_formulas():
    pot_thick = lambda z: v.potential_halfspace(ATOM, WEAK_ELECTRIC, z)
    numeric_thick = v.locate_wall(pot_thick, samples=40)
    _, closed_thick = v.wall_estimate("thick", ATOM, WEAK_ELECTRIC)

    d = 1e-5
    pot_thin = lambda z: v.potential_thin_plate(ATOM, WEAK_ELECTRIC, d, z)
    numeric_thin = v.locate_wall(pot_thin, samples=40)
    _, closed_thin = v.wall_estimate("thin", ATOM, WEAK_ELECTRIC, thickness=d)

    bound = v.thin_wall_height_bound(ATOM, WEAK_ELECTRIC)
    rel_thick = abs(numeric_thick.z_max / closed_thick.z_max - 1.0)
    rel_thin = abs(numeric_thin.z_max / closed_thin.z_max - 1.0)
    ok = rel_thick < 0.15 and rel_thin < 0.15 and numeric_thin.u_max < bound
    _report(9, "closed-form wall positions within 15%; thin wall below its height bound",
            ok, f"thick rel={rel_thick:.3f}, thin rel={rel_thin:.3f}, "
                f"U_max/bound={numeric_thin.u_max / bound:.2e}")


def test_criterion_10_thickness_limits():
    m = fig2_material(mu0=5.0)
    z = 1.0
    thick_gap = abs(
        v.potential_plate(ATOM, m, 1000.0 * z, z).value
        / v.potential_halfspace(ATOM, m, z).value - 1.0
    )
    n0 = v.static_summary(m).n0
    d = 1e-3 * z / n0
    thin_gap = abs(
        v.potential_plate(ATOM, m, d, z).value
        / v.potential_thin_plate(ATOM, m, d, z).value - 1.0
    )
    ok = thick_gap < 1e-3 and thin_gap < 5e-3
    _report(10, "plate reaches half-space (0.1%) and thin-plate (0.5%) limits", ok,
            f"thick gap={thick_gap:.1e}, thin gap={thin_gap:.1e}")


def test_criterion_11_additivity_identities():
    weak = v.MaterialModel(
        electric=[v.Resonance(0.0326, 1.03)],
        magnetic=[v.Resonance(0.0316, 1.0)],
    )  # chi(0) ~ 1e-3 in both channels
    report = v.additivity_check(ATOM, weak, 1.0)
    ok = report.first_order_residual < 0.01 and report.second_order_residual < 0.02
    _report(11, "additivity identities: residuals below 1% and 2%", ok,
            f"first={report.first_order_residual:.2e}, "
            f"second={report.second_order_residual:.2e}")


def test_criterion_12_two_plate_checks():
    m = fig2_material(mu0=5.0)
    s = 15.0
    sym = max(
        abs(v.potential_two_plates(ATOM, m, s, z).value
            - v.potential_two_plates(ATOM, m, s, s - z).value)
        / abs(v.potential_two_plates(ATOM, m, s, z).value)
        for z in (2.0, 5.0, 7.0)
    )
    mid = v.potential_two_plates(ATOM, m, s, s / 2.0).value
    mid_sum = v.potential_two_plates(ATOM, m, s, s / 2.0, multiple_reflections=False).value
    correction = abs(mid - mid_sum) / abs(mid_sum)

    strong = material(wpe=0.75e5, wte=1.03, ge=0.001, wpm=2.0e5, wtm=1.0, gm=0.001)
    s8 = 6.0
    lowered = all(
        v.potential_two_plates(ATOM, strong, s8, z).value
        < v.potential_two_plates(ATOM, strong, s8, z, multiple_reflections=False).value
        for z in (2.5, 3.0, 3.5)
    )
    ok = sym < 1e-6 and correction < 0.01 and lowered
    _report(12, "two plates: symmetric, small multiple-reflection correction, "
                "full potential below the pair sum near the midpoint", ok,
            f"sym={sym:.1e}, correction={correction:.2e}, lowered={lowered}")


def test_criterion_13_monotonicity_suite():
    checks = []
    h = 1e-4
    for eps0, mu0 in [(1.5, 1.2), (3.0, 5.0), (20.0, 40.0)]:
        c4 = lambda e, m_: v.thick_coefficients(ATOM, constant_material(e, m_)).c4
        checks.append(c4(eps0 + h, mu0) < c4(eps0 - h, mu0))
        checks.append(c4(eps0, mu0 + h) > c4(eps0, mu0 - h))
        d5 = lambda e, m_: v.thin_coefficients(ATOM, constant_material(e, m_), 1.0).d5
        checks.append(d5(eps0 + h, mu0) < d5(eps0 - h, mu0))
        checks.append(d5(eps0, mu0 + h) > d5(eps0, mu0 - h))
    for u in (0.3, 1.0, 4.0):
        eps = lambda g: fig2_material(ge=g).eps(u)
        mu = lambda g: fig2_material(gm=g).mu(u)
        checks.append(eps(0.01 + h) < eps(0.01 - h))
        checks.append(mu(0.01 + h) < mu(0.01 - h))
    for ge, gm in [(0.001, 0.001), (0.01, 0.02), (0.05, 0.05)]:
        coeff = lambda ge_, gm_: v.thick_coefficients(ATOM, fig2_material(ge=ge_, gm=gm_))
        checks.append(coeff(ge + h, gm).c3 < coeff(ge - h, gm).c3)
        checks.append(coeff(ge, gm + h).c3 == coeff(ge, gm - h).c3)
        checks.append(coeff(ge + h, gm).c1 < coeff(ge - h, gm).c1)
        checks.append(coeff(ge, gm + h).c1 < coeff(ge, gm - h).c1)
    ok = all(checks)
    _report(13, "all signed derivatives verified by central differences", ok,
            f"{sum(checks)}/{len(checks)} checks hold")


def test_criterion_14_substitution_mode_agreement():
    m = fig2_material(mu0=5.0)
    tol = 10.0 * v.DEFAULT_SPEC.rel_tol_outer
    worst = 0.0
    for z in (1e-3, 1.0, 1e2):
        vals = [
            v.potential_halfspace(ATOM, m, z,
                                  dataclasses.replace(v.DEFAULT_SPEC, mode=mode)).value
            for mode in v.MODES
        ]
        spread = (max(vals) - min(vals)) / abs(vals[0])
        worst = max(worst, spread)
    _report(14, "three substitution modes agree within 10x the quadrature tolerance",
            worst < tol, f"worst spread={worst:.2e}, allowance={tol:.1e}")
