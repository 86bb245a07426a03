"""Ground-state atom-surface potentials for the supported planar geometries.

Every potential is the double integral over imaginary frequency u and the
vacuum axial wavenumber b of

    (1 / 8 pi^2) * alpha(iu) * e^{-2 b z} * [u^2 r_s/D_s - (2 b^2 - u^2) r_p/D_p]

summed over the walls on both sides of the atom, with geometry entering only
through the reflection coefficients.  For atoms in an interior layer the two
wall terms are integrated separately, which makes the left/right split exact
bookkeeping rather than an approximation.  Position-independent bulk terms
are omitted throughout, so an all-vacuum scene gives exactly zero.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .materials import (
    AtomModel,
    MaterialModel,
    Medium,
    PerfectMirror,
    promote_near_mirror,
    static_summary,
)
from .quadrature import IntegralResult, QuadratureSpec, integrate_nested, integrate_semi_infinite
from .stack import LayerStack, reflection_coefficients

__all__ = [
    "PotentialResult",
    "potential_mirror",
    "potential_halfspace",
    "potential_plate",
    "potential_thin_plate",
    "potential_two_plates",
    "potential_multilayer",
]

_PREF = 1.0 / (8.0 * math.pi**2)


@dataclass(frozen=True)
class PotentialResult:
    """Potential in reduced energy units with quadrature bookkeeping.

    ``left``/``right`` are the contributions of the sub-stacks on either side
    of the atom; they sum to ``value`` exactly.
    """

    value: float
    error: float
    left: float
    right: float
    converged: bool
    evaluations: int


def _u_scale(atom: AtomModel, *materials: Medium) -> float:
    freqs = [t.frequency for t in atom.transitions]
    for m in materials:
        if isinstance(m, MaterialModel):
            freqs.extend(m.resonance_frequencies())
    return min(freqs)


def _require_positive(name: str, value: float) -> None:
    if not value > 0.0:
        raise ValueError(f"{name} must be > 0, got {value}")


def potential_mirror(atom: AtomModel, z: float, kind: str = "conducting",
                     spec: QuadratureSpec | None = None) -> PotentialResult:
    """Potential in front of a perfectly reflecting plate, as a single 1-D integral.

    ``kind="conducting"`` gives the attractive Casimir-Polder result;
    ``kind="permeable"`` its exact sign flip.
    """
    _require_positive("z", z)
    if kind not in ("conducting", "permeable"):
        raise ValueError(f"kind must be 'conducting' or 'permeable', got {kind!r}")

    def f(u):
        uz = u * z
        return atom.alpha(u) * np.exp(-2.0 * uz) * (1.0 + 2.0 * uz + 2.0 * uz * uz)

    res = integrate_semi_infinite(f, 0.0, spec=spec, scale=min(_u_scale(atom), 0.5 / z))
    pref = 1.0 / (16.0 * math.pi**2 * z**3)
    sign = -1.0 if kind == "conducting" else 1.0
    value = sign * pref * res.value
    return PotentialResult(value, pref * res.error, value, 0.0, res.converged, res.evaluations)


def _halfspace_refl(material: Medium):
    if isinstance(material, PerfectMirror):
        r_s, r_p = material.r_s, material.r_p

        def refl(u, b):
            shape = np.broadcast(u, b).shape
            return np.full(shape, r_s), np.full(shape, r_p)

        return refl

    def refl(u, b):
        e = material.eps(u)
        m = material.mu(u)
        b_m = np.sqrt(u * u * (e * m - 1.0) + b * b)
        return (m * b - b_m) / (m * b + b_m), (e * b - b_m) / (e * b + b_m)

    return refl


def _plate_refl(material: Medium, d: float):
    if isinstance(material, PerfectMirror):
        return _halfspace_refl(material)  # fully reflecting at any thickness

    def refl(u, b):
        e = material.eps(u)
        m = material.mu(u)
        bm2 = u * u * (e * m - 1.0) + b * b
        b_m = np.sqrt(bm2)
        th = np.tanh(b_m * d)
        r_s = (m * m * b * b - bm2) * th / (2.0 * m * b * b_m + (m * m * b * b + bm2) * th)
        r_p = (e * e * b * b - bm2) * th / (2.0 * e * b * b_m + (e * e * b * b + bm2) * th)
        return r_s, r_p

    return refl


def _wall_kernel(atom: AtomModel, refl, z: float, dfun=None):
    def kernel(u, b):
        r_s, r_p = refl(u, b)
        if dfun is not None:
            d_s, d_p = dfun(u, b)
            r_s = r_s / d_s
            r_p = r_p / d_p
        bracket = u * u * r_s - (2.0 * b * b - u * u) * r_p
        return _PREF * atom.alpha(u) * np.exp(-2.0 * b * z) * bracket

    return kernel


def _one_wall(atom, refl, z, spec, u_scale, dfun=None) -> IntegralResult:
    return integrate_nested(
        _wall_kernel(atom, refl, z, dfun), z=z, spec=spec, u_scale=u_scale
    )


def potential_halfspace(atom: AtomModel, material: Medium, z: float,
                        spec: QuadratureSpec | None = None,
                        promote: bool = True) -> PotentialResult:
    """Potential in front of a semi-infinite magnetodielectric half-space."""
    _require_positive("z", z)
    mat = promote_near_mirror(material) if promote else material
    if isinstance(mat, PerfectMirror):
        return potential_mirror(atom, z, mat.kind, spec)
    res = _one_wall(atom, _halfspace_refl(mat), z, spec, _u_scale(atom, mat))
    return PotentialResult(res.value, res.error, res.value, 0.0, res.converged, res.evaluations)


def potential_plate(atom: AtomModel, material: Medium, thickness: float, z: float,
                    spec: QuadratureSpec | None = None,
                    promote: bool = True) -> PotentialResult:
    """Potential in front of a plate of finite thickness."""
    _require_positive("z", z)
    _require_positive("thickness", thickness)
    mat = promote_near_mirror(material) if promote else material
    if isinstance(mat, PerfectMirror):
        return potential_mirror(atom, z, mat.kind, spec)
    res = _one_wall(atom, _plate_refl(mat, thickness), z, spec, _u_scale(atom, mat))
    return PotentialResult(res.value, res.error, res.value, 0.0, res.converged, res.evaluations)


def potential_thin_plate(atom: AtomModel, material: MaterialModel, thickness: float, z: float,
                         spec: QuadratureSpec | None = None) -> PotentialResult:
    """Thin-plate potential, exactly linear in the thickness.

    Valid for n(0) * thickness << z; a warning (not an error) is emitted when
    n(0) * thickness / z > 0.1.
    """
    _require_positive("z", z)
    _require_positive("thickness", thickness)
    if isinstance(material, PerfectMirror):
        raise TypeError("the thin-plate linearization is undefined for a perfect mirror")
    n0 = static_summary(material).n0
    if n0 * thickness / z > 0.1:
        warnings.warn(
            f"thin-plate linearization used outside its regime: "
            f"n(0) d / z = {n0 * thickness / z:.3g} > 0.1",
            stacklevel=2,
        )
    d = thickness

    def kernel(u, b):
        e = material.eps(u)
        m = material.mu(u)
        bm2 = u * u * (e * m - 1.0) + b * b
        bracket = u * u * (m * m * b * b - bm2) / (2.0 * m * b) - (2.0 * b * b - u * u) * (
            e * e * b * b - bm2
        ) / (2.0 * e * b)
        return _PREF * d * atom.alpha(u) * np.exp(-2.0 * b * z) * bracket

    res = integrate_nested(kernel, z=z, spec=spec, u_scale=_u_scale(atom, material))
    return PotentialResult(res.value, res.error, res.value, 0.0, res.converged, res.evaluations)


def potential_two_plates(atom: AtomModel, material: Medium, separation: float, z: float,
                         spec: QuadratureSpec | None = None,
                         multiple_reflections: bool = True,
                         promote: bool = True) -> PotentialResult:
    """Potential of an atom between two identical infinitely thick plates.

    With ``multiple_reflections=False`` the cavity denominators are forced to
    one, which reduces the result to the sum of two single-plate potentials
    and exposes the multiple-reflection correction by comparison.
    """
    _require_positive("separation", separation)
    if not 0.0 < z < separation:
        raise ValueError(f"need 0 < z < separation, got z={z}, separation={separation}")
    mat = promote_near_mirror(material) if promote else material
    refl = _halfspace_refl(mat)
    s = separation

    dfun = None
    if multiple_reflections:
        def dfun(u, b):
            r_s, r_p = refl(u, b)
            fac = np.exp(-2.0 * b * s)
            return 1.0 - r_s * r_s * fac, 1.0 - r_p * r_p * fac

    u_scale = _u_scale(atom, mat)
    left = _one_wall(atom, refl, z, spec, u_scale, dfun)
    right = _one_wall(atom, refl, s - z, spec, u_scale, dfun)
    return PotentialResult(
        left.value + right.value,
        left.error + right.error,
        left.value,
        right.value,
        left.converged and right.converged,
        left.evaluations + right.evaluations,
    )


def _stack_wall_kernel(atom: AtomModel, stack: LayerStack, z: float, side: str):
    def kernel(u, b):
        u_arr = np.asarray(u, dtype=float)
        b_arr = np.asarray(b, dtype=float)
        q = np.sqrt(np.maximum(b_arr * b_arr - u_arr * u_arr, 0.0))
        refl = reflection_coefficients(stack, u_arr, q)
        if side == "left":
            r_s, r_p = refl.r_s_minus, refl.r_p_minus
        else:
            r_s, r_p = refl.r_s_plus, refl.r_p_plus
        r_s = r_s / refl.d_s
        r_p = r_p / refl.d_p
        bracket = u_arr * u_arr * r_s - (2.0 * b_arr * b_arr - u_arr * u_arr) * r_p
        return _PREF * atom.alpha(u_arr) * np.exp(-2.0 * b_arr * z) * bracket

    return kernel


def potential_multilayer(stack: LayerStack, atom: AtomModel,
                         spec: QuadratureSpec | None = None) -> PotentialResult:
    """Potential of an atom inside an arbitrary planar multilayer stack.

    The atom layer must be vacuum.  For an interior atom layer the result is
    the exact sum of a left-wall and a right-wall term; for an atom in an
    outer layer only the inward-facing term exists.
    """
    j = stack.atom_layer
    n = stack.n
    u_scale = _u_scale(atom, *(layer.material for layer in stack.layers))

    d_j = stack.layers[j].thickness
    z_left = z_right = None
    if j == 0:
        z_right = stack.atom_position
    elif j == n:
        z_left = stack.atom_position
    else:
        z_left = stack.atom_position
        z_right = d_j - stack.atom_position

    zero = IntegralResult(0.0, 0.0, 0, True)
    left = zero
    right = zero
    if z_left is not None:
        left = integrate_nested(
            _stack_wall_kernel(atom, stack, z_left, "left"), z=z_left, spec=spec, u_scale=u_scale
        )
    if z_right is not None:
        right = integrate_nested(
            _stack_wall_kernel(atom, stack, z_right, "right"), z=z_right, spec=spec,
            u_scale=u_scale,
        )
    return PotentialResult(
        left.value + right.value,
        left.error + right.error,
        left.value,
        right.value,
        left.converged and right.converged,
        left.evaluations + right.evaluations,
    )
