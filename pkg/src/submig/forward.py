"""Born-approximation synthesis of multistatic scattering parameters.

Two generators share one disk quadrature:

* ``born`` integrates the product of exact 2-D incident fields,
  ``-(i/4) H0(kb |a - x|)``, over each object;
* ``farfield`` replaces each field by its plane-wave form, giving
  ``A * integral exp(-i kb (theta_m + theta_n) . x) dx``.

Both are linear in the object contrast and complex-symmetric in (n, m).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import ResolutionError, SingularityError
from .scene import DiskObject, Medium, Scene
from .specfun import hankel1_0


@dataclass(frozen=True)
class QuadratureSpec:
    subdivisions: int = 32
    scheme: str = "cell-midpoint"

    def __post_init__(self):
        if self.subdivisions < 4:
            raise ValueError("subdivisions must be >= 4")
        if self.scheme != "cell-midpoint":
            raise ValueError(f"unknown quadrature scheme {self.scheme!r}")


def contrast(obj: DiskObject, medium: Medium) -> complex:
    eb = medium.permittivity
    return complex((obj.permittivity - eb) / eb,
                   (obj.conductivity - medium.conductivity) / (medium.angular_frequency * eb))


def disk_quadrature(obj: DiskObject, quad: QuadratureSpec = QuadratureSpec()):
    """Midpoint nodes inside ``obj`` and the common cell weight.

    The bounding box is split into ``(2 * subdivisions)**2`` square cells of
    side ``radius / subdivisions``; cells whose centre falls in the disk are kept.
    """
    n = quad.subdivisions
    h = obj.radius / n
    offsets = (np.arange(-n, n) + 0.5) * h
    ox, oy = np.meshgrid(offsets, offsets)
    inside = ox**2 + oy**2 < obj.radius**2
    if not inside.any():
        raise ResolutionError("object is smaller than one quadrature cell")
    nodes = np.column_stack([ox[inside] + obj.center[0], oy[inside] + obj.center[1]])
    return nodes, h * h


def incident_field(a, x, kb: complex):
    """z-component of the incident field, ``-(i/4) H0^(1)(kb |a - x|)``.

    ``a`` and ``x`` broadcast as arrays of 2-D points.
    """
    r = np.linalg.norm(np.asarray(a, dtype=float) - np.asarray(x, dtype=float), axis=-1)
    if np.any(r == 0):
        raise SingularityError("incident field evaluated at the source point")
    return -0.25j * hankel1_0(kb * r)


def born_prefactor(medium: Medium) -> complex:
    """-i k0^2 / (4 omega mu_b)."""
    wn = medium.wavenumbers
    return -1j * wn.k0**2 / (4.0 * medium.angular_frequency * medium.permeability)


def farfield_amplitude(medium: Medium, radius: float, contrast_value: complex) -> complex:
    """A = -k0^2 e^{2iR kb} O_D / (32 R kb omega mu_b pi)."""
    wn = medium.wavenumbers
    kb = wn.kb
    return (-wn.k0**2 * np.exp(2j * radius * kb) * contrast_value
            / (32.0 * radius * kb * medium.angular_frequency * medium.permeability * math.pi))


def _born_fields(scene: Scene, obj: DiskObject, quad: QuadratureSpec, rows=None):
    nodes, weight = disk_quadrature(obj, quad)
    pos = scene.array.positions if rows is None else scene.array.positions[rows]
    fields = incident_field(pos[:, None, :], nodes[None, :, :], scene.wavenumbers.kb)
    return fields, weight


def _farfield_fields(scene: Scene, obj: DiskObject, quad: QuadratureSpec, rows=None):
    nodes, weight = disk_quadrature(obj, quad)
    theta = scene.array.directions if rows is None else scene.array.directions[rows]
    return np.exp(-1j * scene.wavenumbers.kb * (theta @ nodes.T)), weight


def _symmetric_gram(F: np.ndarray) -> np.ndarray:
    # BLAS may accumulate (i, j) and (j, i) in different orders; mirror one triangle.
    G = F @ F.T
    upper = np.triu(G, 1)
    return upper + upper.T + np.diag(np.diag(G))


def born_matrix(scene: Scene, quad: QuadratureSpec = QuadratureSpec()) -> np.ndarray:
    """Full N x N Born data, diagonal included."""
    n = scene.array.count
    K = np.zeros((n, n), dtype=complex)
    pref = born_prefactor(scene.medium)
    for obj in scene.objects:
        E, w = _born_fields(scene, obj, quad)
        K += (pref * contrast(obj, scene.medium) * w) * _symmetric_gram(E)
    return K


def farfield_matrix(scene: Scene, quad: QuadratureSpec = QuadratureSpec()) -> np.ndarray:
    n = scene.array.count
    K = np.zeros((n, n), dtype=complex)
    R = scene.array.radius
    for obj in scene.objects:
        P, w = _farfield_fields(scene, obj, quad)
        A = farfield_amplitude(scene.medium, R, contrast(obj, scene.medium))
        K += (A * w) * _symmetric_gram(P)
    return K


def born_sparam(n: int, m: int, scene: Scene, quad: QuadratureSpec = QuadratureSpec()) -> complex:
    """Single Born entry S(n, m) (0-based antenna indices)."""
    total = 0j
    pref = born_prefactor(scene.medium)
    for obj in scene.objects:
        E, w = _born_fields(scene, obj, quad, rows=[n, m])
        total += pref * contrast(obj, scene.medium) * w * np.sum(E[0] * E[1])
    return complex(total)


def farfield_sparam(n: int, m: int, scene: Scene, quad: QuadratureSpec = QuadratureSpec()) -> complex:
    total = 0j
    R = scene.array.radius
    for obj in scene.objects:
        P, w = _farfield_fields(scene, obj, quad, rows=[n, m])
        A = farfield_amplitude(scene.medium, R, contrast(obj, scene.medium))
        total += A * w * np.sum(P[0] * P[1])
    return complex(total)


GENERATORS = {"born": born_matrix, "farfield": farfield_matrix}
