"""Closed-form Bessel-series structure of the imaging function.

With plane-wave data S(n, m) = A * int_D exp(-i kb (theta_m + theta_n) . x) dx
and plane-wave test vectors, replacing U_1 V_1^* by K(C) / tau_1 gives

    F(z, C) = |Phi1(z) + Phi2(z) + Phi3(z, C)|

    Phi1 =  (N A / tau_1) int_D G(kb, z - x)^2 dx
    Phi2 = -(A / tau_1)   int_D G(2 kb, z - x) dx
    Phi3 =  (C / tau_1)   G(2 kb, z)

where G(k, d) = J_0(k|d|) + (1/N) sum_n sum_{s != 0} i^s J_s(k|d|) e^{is(theta_n - phi_d)}
is the normalised Jacobi-Anger sum, truncated at |s| <= L. Every term here is
evaluated from Bessel series, never from the plane-wave exponentials the
imaging pipeline uses, so the two routes check each other.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .forward import QuadratureSpec, contrast, disk_quadrature, farfield_amplitude
from .scene import Scene
from .specfun import SeriesParams, epsilon_sum, jacobi_anger

FARFIELD_THRESHOLD = 2.5  # ten times the nominal 0.25


@dataclass(frozen=True)
class SeriesDecomposition:
    phi1: complex
    phi2: complex
    phi3: complex
    at: tuple

    @property
    def total(self) -> float:
        return abs(self.phi1 + self.phi2 + self.phi3)


def _normalised_sum(scene: Scene, k: complex, d, L: int):
    angles = scene.array.angles
    return jacobi_anger(angles, k, d, L) / len(angles)


def phi_terms(points, scene: Scene, C: complex, tau1: float,
              params: SeriesParams = SeriesParams(),
              quad: QuadratureSpec = QuadratureSpec()):
    """Vectorised Phi1, Phi2, Phi3 at each row of ``points``; three (P,) arrays."""
    if not tau1 > 0:
        raise ValueError("tau1 must be positive")
    if not scene.objects:
        raise ValueError("the decomposition needs at least one object")
    points = np.atleast_2d(np.asarray(points, dtype=float))
    kb = scene.wavenumbers.kb
    L = params.truncation_L
    n = scene.array.count
    R = scene.array.radius
    phi1 = np.zeros(len(points), dtype=complex)
    phi2 = np.zeros(len(points), dtype=complex)
    for obj in scene.objects:
        nodes, w = disk_quadrature(obj, quad)
        A = farfield_amplitude(scene.medium, R, contrast(obj, scene.medium))
        for i, z in enumerate(points):
            d = z[None, :] - nodes
            g1 = _normalised_sum(scene, kb, d, L)
            g2 = _normalised_sum(scene, 2 * kb, d, L)
            phi1[i] += (n * A / tau1) * w * np.sum(g1 * g1)
            phi2[i] -= (A / tau1) * w * np.sum(g2)
    phi3 = (complex(C) / tau1) * _normalised_sum(scene, 2 * kb, points, L)
    return phi1, phi2, phi3


def phi_decomposition(z, scene: Scene, C: complex, tau1: float,
                      params: SeriesParams = SeriesParams(),
                      quad: QuadratureSpec = QuadratureSpec()) -> SeriesDecomposition:
    p1, p2, p3 = phi_terms(np.asarray(z, dtype=float)[None, :], scene, C, tau1, params, quad)
    return SeriesDecomposition(complex(p1[0]), complex(p2[0]), complex(p3[0]), tuple(map(float, z)))


def series_map(points, scene: Scene, C: complex, tau1: float,
               params: SeriesParams = SeriesParams(),
               quad: QuadratureSpec = QuadratureSpec()) -> np.ndarray:
    """|Phi1 + Phi2 + Phi3| at each point."""
    p1, p2, p3 = phi_terms(points, scene, C, tau1, params, quad)
    return np.abs(p1 + p2 + p3)


def zero_c_map(points, scene: Scene, params: SeriesParams = SeriesParams(),
               quad: QuadratureSpec = QuadratureSpec()) -> np.ndarray:
    """Normalised C = 0 image

    ``N/((N-1)|D|) int_D G(kb, z-x)^2 dx - 1/((N-1)|D|) int_D G(2kb, z-x) dx``,

    returned as a magnitude; equals 1 at the centre of a vanishing object.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    kb = scene.wavenumbers.kb
    L = params.truncation_L
    n = scene.array.count
    area = sum(obj.area for obj in scene.objects)
    out = np.zeros(len(points), dtype=complex)
    for obj in scene.objects:
        nodes, w = disk_quadrature(obj, quad)
        # rescale weights so the quadrature reproduces the exact disk area
        w = obj.area / len(nodes)
        for i, z in enumerate(points):
            d = z[None, :] - nodes
            g1 = _normalised_sum(scene, kb, d, L)
            g2 = _normalised_sum(scene, 2 * kb, d, L)
            out[i] += w * (n * np.sum(g1 * g1) - np.sum(g2))
    return np.abs(out / ((n - 1) * area))


def table1(angles, xs, Ls, phi: float = 0.0) -> np.ndarray:
    """|E(x, L)| for every (x, L) pair; rows follow ``xs``, columns ``Ls``."""
    out = np.empty((len(xs), len(Ls)))
    for i, x in enumerate(xs):
        for j, L in enumerate(Ls):
            out[i, j] = abs(epsilon_sum(angles, x, phi, int(L)))
    return out


@dataclass(frozen=True)
class FarFieldReport:
    min_product: float  # min_n |kb| |z - a_n|
    threshold: float
    ok: bool

    def to_dict(self) -> dict:
        return {"min_product": self.min_product, "threshold": self.threshold, "ok": self.ok}


def farfield_condition(z, scene: Scene, threshold: float = FARFIELD_THRESHOLD) -> FarFieldReport:
    """Distance of ``z`` from the antennas in units of 1/|kb|."""
    z = np.asarray(z, dtype=float)
    dist = np.linalg.norm(scene.array.positions - z[None, :], axis=1)
    prod = float(abs(scene.wavenumbers.kb) * dist.min())
    return FarFieldReport(prod, threshold, prod >= threshold)

