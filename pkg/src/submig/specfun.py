"""Bessel/Hankel kernels and truncated Jacobi-Anger sums.

Integer-order Bessel and Hankel values come from ``scipy.special`` (AMOS);
this module adds range checks, the far-field Hankel form and the angular
series built on top of them. All functions broadcast over numpy arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .exceptions import DomainError, SingularityError

MAX_ORDER = 200
MAX_ARGUMENT = 500.0


@dataclass(frozen=True)
class SeriesParams:
    truncation_L: int = 60
    tolerance: float = 1e-10

    def __post_init__(self):
        if int(self.truncation_L) != self.truncation_L or self.truncation_L < 1:
            raise ValueError("truncation_L must be an integer >= 1")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")


def default_truncation(kb: complex, d_max: float) -> int:
    """Truncation order large enough for arguments up to ``2 |kb| d_max``."""
    return max(30, math.ceil(2.0 * abs(kb) * d_max) + 20)


def _check_domain(order, z):
    if np.any(np.abs(order) > MAX_ORDER):
        raise DomainError(f"Bessel order exceeds {MAX_ORDER}")
    if np.any(np.abs(z) > MAX_ARGUMENT):
        raise DomainError(f"Bessel argument exceeds {MAX_ARGUMENT}")


def bessel_j(order, z):
    """Bessel function of the first kind J_s(z) for integer s and complex z."""
    order = np.asarray(order)
    z = np.asarray(z, dtype=complex)
    if not np.all(np.mod(order, 1) == 0):
        raise DomainError("only integer orders are supported")
    _check_domain(order, z)
    return special.jv(order, z)


def bessel_y0(z):
    z = np.asarray(z, dtype=complex)
    _check_domain(0, z)
    if np.any(z == 0):
        raise SingularityError("Y0 is singular at z = 0")
    return special.yv(0, z)


def hankel1_0(z):
    """H0^(1)(z) = J0(z) + i Y0(z)."""
    z = np.asarray(z, dtype=complex)
    if np.any(z == 0):
        raise SingularityError("H0^(1) is singular at z = 0")
    _check_domain(0, z)
    return special.hankel1(0, z)


def hankel1_0_farfield(kb: complex, a, z):
    """Plane-wave form of H0^(1)(kb |z - a|) used in the imaging analysis.

    Returns ``(1 + i) exp(i kb |a|) / sqrt(kb pi |a|) * exp(-i kb theta . z)``
    with ``theta = a / |a|``; ``z`` may be an array of points (..., 2).
    """
    a = np.asarray(a, dtype=float)
    z = np.asarray(z, dtype=float)
    r = float(np.hypot(a[0], a[1]))
    if r == 0:
        raise ValueError("antenna position must not be the origin")
    theta = a / r
    amp = (1 + 1j) * np.exp(1j * kb * r) / np.sqrt(complex(kb * math.pi * r))
    return amp * np.exp(-1j * kb * (z @ theta))


def _angular_weights(angles, phi, L):
    """sum_n exp(i s (theta_n - phi)) for s = -L..L, shape (..., 2L+1)."""
    s = np.arange(-L, L + 1)
    # sum over antennas once, then rotate by the evaluation angle
    per_order = np.exp(1j * np.outer(s, np.asarray(angles, dtype=float))).sum(axis=1)
    phi = np.asarray(phi, dtype=float)
    return per_order * np.exp(-1j * s * phi[..., None])


def _series_terms(x, angles, phi, L):
    s = np.arange(-L, L + 1)
    x = np.asarray(x, dtype=complex)
    js = bessel_j(s, x[..., None])
    return (1j ** s) * js * _angular_weights(angles, phi, L), s


def epsilon_sum(angles, x, phi, L: int):
    """Truncated antenna-sum correction

    ``sum_n sum_{0<|s|<=L} i^s J_s(x) exp(i s (theta_n - phi))``.

    ``x`` and ``phi`` broadcast against each other.
    """
    if L < 1:
        raise ValueError("L must be >= 1")
    terms, s = _series_terms(x, angles, phi, L)
    terms = terms[..., s != 0]
    return terms.sum(axis=-1)


def jacobi_anger(angles, kb: complex, d, L: int):
    """Truncated Jacobi-Anger form of ``sum_n exp(i kb theta_n . d)``.

    Parameters
    ----------
    angles : array_like, shape (N,)
        Antenna polar angles theta_n.
    kb : complex
        Wavenumber multiplying the displacement.
    d : array_like, shape (..., 2)
        Displacement vectors.
    L : int
        Largest |s| kept in the series.

    Returns
    -------
    complex or ndarray
        ``N J_0(kb|d|) + sum_n sum_{0<|s|<=L} i^s J_s(kb|d|) e^{is(theta_n - phi_d)}``.
    """
    d = np.asarray(d, dtype=float)
    rho = np.hypot(d[..., 0], d[..., 1])
    phi = np.arctan2(d[..., 1], d[..., 0])
    n = len(np.atleast_1d(angles))
    x = kb * rho
    head = n * bessel_j(0, x)
    if L < 1:
        return head
    return head + epsilon_sum(angles, x, phi, L)


def plane_wave_sum(angles, kb: complex, d):
    """Direct ``sum_n exp(i kb theta_n . d)``; the brute-force counterpart of jacobi_anger."""
    angles = np.asarray(angles, dtype=float)
    theta = np.column_stack([np.cos(angles), np.sin(angles)])
    d = np.asarray(d, dtype=float)
    return np.exp(1j * kb * (d @ theta.T)).sum(axis=-1)
