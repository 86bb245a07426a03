"""Planar multilayer geometry and generalized reflection coefficients.

A stack is an ordered list of layers, index 0..n from left to right; the two
outer layers are semi-infinite.  The atom sits in a vacuum layer j.  The
reflection coefficients r^sigma_{j-}, r^sigma_{j+} describe reflection of s/p
polarized components by the entire sub-stack on either side of the atom layer,
built by an iterative two-term recursion from the outer seeds r_{0-} = r_{n+}
= 0 inward.  Everything is evaluated at imaginary frequency, where all
quantities are real.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .materials import Medium, PerfectMirror

__all__ = [
    "Layer",
    "LayerStack",
    "ReflectionSet",
    "axial_wavenumber",
    "reflection_coefficients",
    "duality_swap",
]


@dataclass(frozen=True)
class Layer:
    """One layer: its medium and thickness (math.inf for the outer layers)."""

    material: Medium
    thickness: float

    def __post_init__(self) -> None:
        if not (self.thickness > 0.0):
            raise ValueError(f"layer thickness must be > 0, got {self.thickness}")


@dataclass(frozen=True)
class LayerStack:
    """Ordered layers with the atom's location.

    ``atom_position`` is the distance from the atom layer's left boundary;
    for the leftmost layer (index 0, which has no left boundary) it is the
    distance from its right boundary.
    """

    layers: tuple[Layer, ...]
    atom_layer: int
    atom_position: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "layers", tuple(self.layers))
        layers = self.layers
        if len(layers) < 2:
            raise ValueError("a stack needs at least two layers")
        if not math.isinf(layers[0].thickness) or not math.isinf(layers[-1].thickness):
            raise ValueError("the first and last layer must be semi-infinite")
        for layer in layers[1:-1]:
            if math.isinf(layer.thickness):
                raise ValueError("only the outer layers may be semi-infinite")
        j = self.atom_layer
        if not 0 <= j < len(layers):
            raise ValueError(f"atom_layer {j} out of range")
        mat = layers[j].material
        if isinstance(mat, PerfectMirror) or not mat.is_vacuum:
            raise ValueError("the atom layer must be vacuum")
        z = self.atom_position
        if not z > 0.0:
            raise ValueError(f"atom_position must be > 0, got {z}")
        d_j = layers[j].thickness
        if 0 < j < len(layers) - 1 and not z < d_j:
            raise ValueError(f"atom_position {z} must lie inside the layer (thickness {d_j})")

    @property
    def n(self) -> int:
        return len(self.layers) - 1


@dataclass(frozen=True)
class ReflectionSet:
    """Generalized reflection coefficients and cavity denominators at one (u, q).

    ``d_s = 1 - r_s_minus * r_s_plus * exp(-2 b d_j)`` resums the multiple
    reflections between the two sub-stacks flanking the atom (``d_p``
    likewise); both equal 1 when the atom sits in an outer layer.
    """

    r_s_minus: float
    r_s_plus: float
    r_p_minus: float
    r_p_plus: float
    d_s: float
    d_p: float


def _check_nondegenerate(u, q) -> None:
    if np.any((np.asarray(u, float) == 0.0) & (np.asarray(q, float) == 0.0)):
        raise ValueError("(u, q) = (0, 0) is a degenerate point")


def _axial(material, u, q):
    # hypot form avoids under/overflow of u^2 for extreme u
    return np.hypot(u * np.sqrt(material.eps(u) * material.mu(u)), q)


def axial_wavenumber(material, u, q):
    """Imaginary-axis z-component of the wave vector, sqrt(u^2 eps mu + q^2)."""
    _check_nondegenerate(u, q)
    b = _axial(material, np.asarray(u, float), np.asarray(q, float))
    return float(b) if np.ndim(b) == 0 else b


def _interface_step(a_prev, a_here, fac, r_prev):
    # One recursion step: reflection at the current layer's outer boundary,
    # given the accumulated reflection behind the neighbouring layer.
    num = (a_prev - a_here) + (a_prev + a_here) * fac * r_prev
    den = (a_prev + a_here) + (a_prev - a_here) * fac * r_prev
    return num / den


def _side_reflection(layers, seq, u, q):
    """(r_s, r_p) of the sub-stack walked along ``seq`` (outermost -> atom layer)."""
    shape = np.broadcast(u, q).shape
    if len(seq) < 2:
        return np.zeros(shape), np.zeros(shape)

    # A perfect mirror hides everything beyond it: seed the walk right there.
    mirror_pos = None
    for pos in range(len(seq) - 2, -1, -1):
        if isinstance(layers[seq[pos]].material, PerfectMirror):
            mirror_pos = pos
            break
    if mirror_pos is not None:
        mirror = layers[seq[mirror_pos]].material
        r_s = np.full(shape, mirror.r_s)
        r_p = np.full(shape, mirror.r_p)
        start = mirror_pos + 2
    else:
        r_s = np.zeros(shape)
        r_p = np.zeros(shape)
        start = 1

    for i in range(start, len(seq)):
        prev = layers[seq[i - 1]]
        here = layers[seq[i]]
        b_prev = _axial(prev.material, u, q)
        b_here = _axial(here.material, u, q)
        # exp underflow to 0 is exact in the thick-layer limit
        fac = np.exp(-2.0 * b_prev * prev.thickness) if math.isfinite(prev.thickness) else 0.0
        r_s = _interface_step(prev.material.mu(u) / b_prev, here.material.mu(u) / b_here, fac, r_s)
        r_p = _interface_step(prev.material.eps(u) / b_prev, here.material.eps(u) / b_here, fac, r_p)
    return r_s, r_p


def reflection_coefficients(stack: LayerStack, u, q) -> ReflectionSet:
    """Reflection coefficients of the sub-stacks on both sides of the atom layer.

    ``u`` and ``q`` may be floats or broadcastable arrays; (0, 0) is rejected.
    """
    _check_nondegenerate(u, q)
    u = np.asarray(u, dtype=float)
    q = np.asarray(q, dtype=float)
    j = stack.atom_layer
    n = stack.n
    r_s_m, r_p_m = _side_reflection(stack.layers, list(range(0, j + 1)), u, q)
    r_s_p, r_p_p = _side_reflection(stack.layers, list(range(n, j - 1, -1)), u, q)

    d_j = stack.layers[j].thickness
    if math.isfinite(d_j):
        b = np.hypot(u, q)  # atom layer is vacuum
        fac = np.exp(-2.0 * b * d_j)
    else:
        fac = 0.0
    d_s = 1.0 - r_s_m * r_s_p * fac
    d_p = 1.0 - r_p_m * r_p_p * fac

    if np.ndim(u) == 0 and np.ndim(q) == 0:
        return ReflectionSet(
            float(r_s_m), float(r_s_p), float(r_p_m), float(r_p_p), float(d_s), float(d_p)
        )
    return ReflectionSet(r_s_m, r_s_p, r_p_m, r_p_p, d_s, d_p)


def duality_swap(stack: LayerStack) -> LayerStack:
    """Exchange electric and magnetic response in every layer."""
    return LayerStack(
        layers=tuple(Layer(layer.material.swapped(), layer.thickness) for layer in stack.layers),
        atom_layer=stack.atom_layer,
        atom_position=stack.atom_position,
    )
