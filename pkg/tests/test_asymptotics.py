import math

import numpy as np
import pytest

import vdwlayers as v

from conftest import constant_material, fig2_material, material


WEAK_ELECTRIC = dict(wpe=0.02, wte=1.03, wpm=2.0, wtm=1.0)


# ---------------------------------------------------------------- thick coefficients

def test_mirror_coefficients(atom):
    c = v.thick_coefficients(atom, v.CONDUCTING_MIRROR)
    assert c.c4 == pytest.approx(-3.0 * atom.alpha0 / (32.0 * math.pi**2), rel=1e-14)
    assert c.c3 == pytest.approx(atom.dipole_sq_total / (48.0 * math.pi), rel=1e-14)
    assert math.isinf(c.c1)
    rep = v.thick_coefficients(atom, v.PERMEABLE_MIRROR)
    assert rep.c4 == -c.c4
    assert rep.c3 == 0.0


def test_near_mirror_c3_approaches_lennard_jones(atom):
    c = v.thick_coefficients(atom, constant_material(eps0=1e12))
    assert c.c3 == pytest.approx(atom.dipole_sq_total / (48.0 * math.pi), rel=1e-5)


def test_pure_magnetic_has_no_cubic_term(atom):
    c = v.thick_coefficients(atom, material(wpm=2.0, wtm=1.0, gm=0.001))
    assert c.c3 == 0.0
    assert c.c1 > 0.0
    assert c.c4 > 0.0  # repulsive at long range


def test_pure_electric_attracts(atom):
    c = v.thick_coefficients(atom, material(wpe=0.75, wte=1.03, ge=0.001))
    assert c.c4 < 0.0 and c.c3 > 0.0 and c.c1 > 0.0


def test_c3_c1_against_weak_limit_closed_forms(atom):
    # lossless two-level closed forms, weak-electric regime
    m = material(**WEAK_ELECTRIC)
    c = v.thick_coefficients(atom, m)
    w10 = 1.0
    wpe, wte, wpm, wtm = 0.02, 1.03, 2.0, 1.0
    wsm = math.sqrt(wtm**2 + 0.5 * wpm**2)
    c3_closed = (wpe**2 / wte**2) * (wte / (w10 + wte)) / (96.0 * math.pi)
    c1_closed = (wpm**2 / (96.0 * math.pi)) * w10 * (2 * w10 + wsm + wtm) / (
        (w10 + wsm) * (w10 + wtm)
    )
    assert c.c3 == pytest.approx(c3_closed, rel=1e-3)
    assert c.c1 == pytest.approx(c1_closed, rel=1e-3)


def test_c4_absorption_independent(atom):
    lossless = v.thick_coefficients(atom, fig2_material(ge=0.0, gm=0.0))
    lossy = v.thick_coefficients(atom, fig2_material(ge=0.05, gm=0.05))
    assert lossy.c4 == lossless.c4  # depends on static response only


# ---------------------------------------------------------------- analytic limits

def test_weak_limit_form(atom):
    chi = 1e-3
    lim = v.thick_c4_limits(1.0 + chi, 1.0 + chi, atom.alpha0)
    expected = -(atom.alpha0 / (640.0 * math.pi**2)) * 16.0 * chi
    assert lim.weak == pytest.approx(expected, rel=1e-12)
    assert lim.weak < 0.0  # balanced response still attracts


def test_weak_limit_zero_crossing(atom):
    chi_e = 1e-4
    lim = v.thick_c4_limits(1.0 + chi_e, 1.0 + chi_e * 23.0 / 7.0, atom.alpha0)
    scale = (atom.alpha0 / (640.0 * math.pi**2)) * 23.0 * chi_e
    assert abs(lim.weak) < 1e-11 * scale


def test_strong_limit_impedance_root():
    z = v.strong_limit_impedance_root()
    assert z == pytest.approx(2.26, abs=0.01)
    assert z * z == pytest.approx(5.11, abs=0.02)


def test_weak_limit_matches_integral(atom):
    chi = 1e-4
    c = v.thick_coefficients(atom, constant_material(eps0=1 + 2 * chi, mu0=1 + chi))
    lim = v.thick_c4_limits(1 + 2 * chi, 1 + chi, atom.alpha0)
    assert c.c4 == pytest.approx(lim.weak, rel=1e-3)


def test_strong_limit_matches_integral(atom):
    c = v.thick_coefficients(atom, constant_material(eps0=4e4, mu0=1e5))
    lim = v.thick_c4_limits(4e4, 1e5, atom.alpha0)
    assert c.c4 == pytest.approx(lim.strong, rel=1e-2)


# ---------------------------------------------------------------- thin coefficients

def test_thin_vacuum_coefficients(atom):
    c = v.thin_coefficients(atom, v.VACUUM, 1.0)
    assert (c.d5, c.d4, c.d2) == (0.0, 0.0, 0.0)


def test_thin_coefficients_linear_in_thickness(atom):
    m = fig2_material()
    a = v.thin_coefficients(atom, m, 1.0)
    b = v.thin_coefficients(atom, m, 2.0)
    assert b.d5 == pytest.approx(2 * a.d5, rel=1e-12)
    assert b.d4 == pytest.approx(2 * a.d4, rel=1e-9)
    assert b.d2 == pytest.approx(2 * a.d2, rel=1e-9)


def test_thin_border_closed_form_zero_locus(atom):
    for eps0 in (1.0, 1.5, 4.0, 30.0):
        mu0 = v.thin_border_mu(eps0)
        c = v.thin_coefficients(atom, constant_material(eps0=eps0, mu0=mu0), 1.0)
        scale = abs(
            v.thin_coefficients(atom, constant_material(eps0=eps0, mu0=2 * mu0), 1.0).d5
        )
        assert abs(c.d5) < 1e-8 * max(scale, 1e-30)


def test_thin_border_endpoints():
    assert v.thin_border_mu(1.0) == pytest.approx(1.0, rel=1e-13)
    assert v.thin_border_mu(1e3) / 1e3 == pytest.approx(7.0 / 3.0, rel=5e-3)


def test_d4_d2_against_weak_limit_closed_forms(atom):
    m = material(**WEAK_ELECTRIC)
    d = 1.0
    c = v.thin_coefficients(atom, m, d)
    w10 = 1.0
    wpe, wte, wpm, wtm = 0.02, 1.03, 2.0, 1.0
    wlm = math.sqrt(wtm**2 + wpm**2)
    d4_closed = d * (wpe**2 / wte**2) * (wte / (w10 + wte)) / (32.0 * math.pi)
    d2_closed = (d * wpm**2 / (96.0 * math.pi)) * w10 * (4 * w10 + 3 * wlm + wtm) / (
        2.0 * (w10 + wlm) * (w10 + wtm)
    )
    assert c.d4 == pytest.approx(d4_closed, rel=1e-3)
    assert c.d2 == pytest.approx(d2_closed, rel=1e-3)


# ---------------------------------------------------------------- border curve

def test_border_thick_at_large_eps(atom):
    (point,) = v.border_curve("thick", [100.0])
    assert point.mu0 is not None
    assert point.mu0 / point.eps0 == pytest.approx(5.11, abs=0.02)


def test_border_weak_limit_slope():
    chi_e = 1e-4
    (thick_pt,) = v.border_curve("thick", [1.0 + chi_e])
    assert (thick_pt.mu0 - 1.0) / chi_e == pytest.approx(23.0 / 7.0, rel=5e-3)
    thin_mu = v.thin_border_mu(1.0 + chi_e)
    assert (thin_mu - 1.0) / chi_e == pytest.approx(23.0 / 7.0, rel=5e-3)


def test_border_thin_passes_through_vacuum_point():
    (point,) = v.border_curve("thin", [1.0])
    assert point.mu0 == pytest.approx(1.0, abs=1e-12)


def test_border_thick_monotone(atom):
    points = v.border_curve("thick", [1.5, 3.0, 10.0])
    mus = [p.mu0 for p in points]
    assert all(m is not None for m in mus)
    assert mus[0] < mus[1] < mus[2]


# ---------------------------------------------------------------- monotonicity

def test_c4_static_monotonicity(atom):
    h = 1e-4
    for eps0, mu0 in [(1.5, 1.2), (3.0, 5.0), (20.0, 40.0)]:
        up = v.thick_coefficients(atom, constant_material(eps0 + h, mu0)).c4
        dn = v.thick_coefficients(atom, constant_material(eps0 - h, mu0)).c4
        assert up < dn  # dC4/deps0 < 0
        up = v.thick_coefficients(atom, constant_material(eps0, mu0 + h)).c4
        dn = v.thick_coefficients(atom, constant_material(eps0, mu0 - h)).c4
        assert up > dn  # dC4/dmu0 > 0


def test_d5_static_monotonicity(atom):
    h = 1e-4
    for eps0, mu0 in [(1.5, 1.2), (3.0, 5.0), (20.0, 40.0)]:
        up = v.thin_coefficients(atom, constant_material(eps0 + h, mu0), 1.0).d5
        dn = v.thin_coefficients(atom, constant_material(eps0 - h, mu0), 1.0).d5
        assert up < dn
        up = v.thin_coefficients(atom, constant_material(eps0, mu0 + h), 1.0).d5
        dn = v.thin_coefficients(atom, constant_material(eps0, mu0 - h), 1.0).d5
        assert up > dn


def test_absorption_derivatives_of_short_range_coefficients(atom):
    h = 1e-4
    for ge, gm in [(0.001, 0.001), (0.01, 0.02), (0.05, 0.05)]:
        c3_up = v.thick_coefficients(atom, fig2_material(ge=ge + h, gm=gm)).c3
        c3_dn = v.thick_coefficients(atom, fig2_material(ge=ge - h, gm=gm)).c3
        assert c3_up < c3_dn  # dC3/dgamma_e < 0
        c3_mup = v.thick_coefficients(atom, fig2_material(ge=ge, gm=gm + h)).c3
        c3_mdn = v.thick_coefficients(atom, fig2_material(ge=ge, gm=gm - h)).c3
        assert c3_mup == c3_mdn  # magnetic loss does not enter C3
        c1_up = v.thick_coefficients(atom, fig2_material(ge=ge + h, gm=gm)).c1
        c1_dn = v.thick_coefficients(atom, fig2_material(ge=ge - h, gm=gm)).c1
        assert c1_up < c1_dn
        c1_mup = v.thick_coefficients(atom, fig2_material(ge=ge, gm=gm + h)).c1
        c1_mdn = v.thick_coefficients(atom, fig2_material(ge=ge, gm=gm - h)).c1
        assert c1_mup < c1_mdn


# ---------------------------------------------------------------- asymptote matching

def test_thick_asymptotes_match_potential(atom):
    m = fig2_material()
    c = v.thick_coefficients(atom, m)
    gaps = []
    for z in (25.0, 50.0, 100.0):
        u = v.potential_halfspace(atom, m, z).value
        gaps.append(abs(u * z**4 / c.c4 - 1.0))
    assert gaps[-1] < 0.05
    assert gaps[0] > gaps[-1]

    electric = material(wpe=0.75, wte=1.03, ge=0.001)
    ce = v.thick_coefficients(atom, electric)
    u = v.potential_halfspace(atom, electric, 1e-3).value
    assert abs(-u * 1e-9 / ce.c3 - 1.0) < 0.05


def test_thin_asymptotes_match_potential(atom):
    m = fig2_material()
    d = 1e-6
    c = v.thin_coefficients(atom, m, d)
    z = 100.0
    u = v.potential_thin_plate(atom, m, d, z).value
    assert u * z**5 / c.d5 == pytest.approx(1.0, abs=0.05)
    z = 1e-3
    u = v.potential_thin_plate(atom, m, d, z).value
    expected = -c.d4 / z**4 + c.d2 / z**2
    assert u == pytest.approx(expected, rel=0.05)


def test_table_exponents(atom):
    # fitted log-log slopes of |U| in the extreme regimes
    def slope(f, z1, z2):
        u1, u2 = abs(f(z1)), abs(f(z2))
        return math.log(u2 / u1) / math.log(z2 / z1)

    electric = material(wpe=0.75, wte=1.03, ge=0.001)
    magnetic = material(wpm=2.0, wtm=1.0, gm=0.001)
    d = 1e-8

    thick_e = lambda z: v.potential_halfspace(atom, electric, z).value
    thick_m = lambda z: v.potential_halfspace(atom, magnetic, z).value
    thin_e = lambda z: v.potential_thin_plate(atom, electric, d, z).value
    thin_m = lambda z: v.potential_thin_plate(atom, magnetic, d, z).value

    assert slope(thick_e, 100.0, 200.0) == pytest.approx(-4.0, abs=0.05)
    assert slope(thin_e, 100.0, 200.0) == pytest.approx(-5.0, abs=0.05)
    assert slope(thick_e, 1e-3, 2e-3) == pytest.approx(-3.0, abs=0.05)
    assert slope(thick_m, 1e-3, 2e-3) == pytest.approx(-1.0, abs=0.05)
    assert slope(thin_e, 1e-3, 2e-3) == pytest.approx(-4.0, abs=0.05)
    assert slope(thin_m, 1e-3, 2e-3) == pytest.approx(-2.0, abs=0.05)


def test_long_range_absorption_insensitive(atom):
    z = 100.0
    lossless = v.potential_halfspace(atom, fig2_material(ge=0.001, gm=0.001), z).value
    lossy = v.potential_halfspace(atom, fig2_material(ge=0.05, gm=0.05), z).value
    assert lossy == pytest.approx(lossless, rel=0.01)


# ---------------------------------------------------------------- wall estimates

def test_wall_estimate_generic_vs_closed_form(atom):
    m = material(**WEAK_ELECTRIC)
    generic, closed = v.wall_estimate("thick", atom, m)
    assert generic.method == "coefficient-ratio"
    assert closed.method == "two-level-closed-form"
    assert generic.z_max == pytest.approx(closed.z_max, rel=0.02)
    assert generic.u_max == pytest.approx(closed.u_max, rel=0.02)
    assert closed.consistency < 0.1  # wall sits deep in the short-distance range

    generic_t, closed_t = v.wall_estimate("thin", atom, m, thickness=1e-5)
    assert generic_t.z_max == pytest.approx(closed_t.z_max, rel=0.02)
    assert generic_t.u_max == pytest.approx(closed_t.u_max, rel=0.02)


def test_wall_estimate_requires_electric_response(atom):
    with pytest.raises(v.NoWallError):
        v.wall_estimate("thick", atom, material(wpm=2.0, wtm=1.0))
    with pytest.raises(v.NoWallError):
        v.wall_estimate("thin", atom, material(wpm=2.0, wtm=1.0), thickness=1e-3)


def test_thin_wall_height_obeys_bound(atom):
    m = material(**WEAK_ELECTRIC)
    _, closed = v.wall_estimate("thin", atom, m, thickness=1e-5)
    bound = v.thin_wall_height_bound(atom, m)
    n0 = v.static_summary(m).n0
    assert n0 * 1e-5 / closed.z_max < 0.01  # genuinely thin
    assert closed.u_max < 0.1 * bound


# ---------------------------------------------------------------- numeric wall

def test_locate_wall_pure_electric_returns_none(atom):
    m = material(wpe=0.75, wte=1.03, ge=0.001)
    pot = lambda z: v.potential_halfspace(atom, m, z)
    assert v.locate_wall(pot, samples=24) is None


def test_locate_wall_fig2(atom):
    m = fig2_material(mu0=5.0)
    pot = lambda z: v.potential_halfspace(atom, m, z)
    wall = v.locate_wall(pot, samples=40)
    assert wall is not None
    assert wall.u_max > 0.0
    assert 1.0 < wall.z_max < 3.0


def test_locate_wall_matches_short_distance_formula(atom):
    m = material(**WEAK_ELECTRIC)
    pot = lambda z: v.potential_halfspace(atom, m, z)
    wall = v.locate_wall(pot, samples=40)
    _, closed = v.wall_estimate("thick", atom, m)
    assert wall is not None
    assert wall.z_max == pytest.approx(closed.z_max, rel=0.15)

    d = 1e-5
    pot_thin = lambda z: v.potential_thin_plate(atom, m, d, z)
    wall_thin = v.locate_wall(pot_thin, samples=40)
    _, closed_thin = v.wall_estimate("thin", atom, m, thickness=d)
    assert wall_thin is not None
    assert wall_thin.z_max == pytest.approx(closed_thin.z_max, rel=0.15)
