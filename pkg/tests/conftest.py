import math

import numpy as np
import pytest

import vdwlayers as v


@pytest.fixture(scope="session")
def atom():
    return v.AtomModel.two_level()


def material(wpe=0.0, wte=1.0, ge=0.0, wpm=0.0, wtm=1.0, gm=0.0):
    electric = [v.Resonance(wpe, wte, ge)] if wpe else []
    magnetic = [v.Resonance(wpm, wtm, gm)] if wpm else []
    return v.MaterialModel(electric=electric, magnetic=magnetic)


def fig2_material(mu0=5.0, ge=0.001, gm=0.001, wtm=1.0):
    """Two-level-atom plate parameters used throughout: electric resonance at
    1.03 with plasma 0.75; magnetic resonance strength set by the target mu(0)."""
    wpm = wtm * math.sqrt(mu0 - 1.0) if mu0 > 1.0 else 0.0
    return material(wpe=0.75, wte=1.03, ge=ge, wpm=wpm, wtm=wtm, gm=gm)


def constant_material(eps0=1.0, mu0=1.0, knee=1e8):
    """Nearly dispersion-free medium: response constant for u << knee."""
    electric = [v.Resonance(knee * math.sqrt(eps0 - 1.0), knee)] if eps0 > 1.0 else []
    magnetic = [v.Resonance(knee * math.sqrt(mu0 - 1.0), knee)] if mu0 > 1.0 else []
    return v.MaterialModel(electric=electric, magnetic=magnetic)


def halfspace_stack(mat, z):
    return v.LayerStack(
        layers=(v.Layer(mat, math.inf), v.Layer(v.VACUUM, math.inf)),
        atom_layer=1,
        atom_position=z,
    )


def brute_force_2d(kernel, z, n=2000, u_scale=1.0):
    """Independent trapezoid oracle for int_0^inf du int_u^inf db F(u, b).

    Both semi-infinite directions are mapped onto the unit square by the same
    rational transform the adaptive engine uses; the trapezoid rule is applied
    on an (n+1) x (n+1) grid with the decayed outer boundary set to zero.
    """
    su = min(u_scale, 0.5 / z)
    sb = 0.5 / z
    t = np.linspace(0.0, 1.0, n + 1)
    r = np.linspace(0.0, 1.0, n + 1)
    f = np.zeros((n + 1, n + 1))
    tt = t[:-1]
    uu = su * tt / (1.0 - tt)
    ju = su / (1.0 - tt) ** 2
    block = 200
    for lo in range(0, n, block):
        hi = min(lo + block, n)
        u_col = uu[lo:hi][:, None]
        rr = r[None, :-1]
        b = u_col + sb * rr / (1.0 - rr)
        jb = sb / (1.0 - rr) ** 2
        with np.errstate(invalid="ignore"):
            vals = kernel(np.broadcast_to(u_col, b.shape), b) * ju[lo:hi][:, None] * jb
        f[lo:hi, :-1] = np.nan_to_num(vals, nan=0.0)  # only the measure-zero corner
    trapz = getattr(np, "trapezoid", np.trapz)
    return trapz(trapz(f, r, axis=1), t)
