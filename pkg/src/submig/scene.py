"""Media, antenna arrays, disk objects and imaging grids.

Everything here is immutable once constructed; numpy arrays held by the
dataclasses are flagged read-only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

VACUUM_PERMITTIVITY = 8.854e-12  # F/m
BACKGROUND_PERMEABILITY = 4e-7 * math.pi  # H/m
ANTENNA_GUARD = 1e-4  # m, minimum distance from any antenna
LOSS_RATIO_THRESHOLD = 5.0  # omega * eps_b / sigma_b must exceed this


def _frozen(a, dtype=float) -> np.ndarray:
    arr = np.array(a, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Wavenumbers:
    k0: float
    kb: complex


@dataclass(frozen=True)
class Medium:
    """Homogeneous background medium at a single frequency.

    Parameters
    ----------
    permittivity : float
        Absolute permittivity in F/m.
    conductivity : float
        Conductivity in S/m.
    frequency : float
        Operating frequency in Hz.
    """

    permittivity: float
    conductivity: float
    frequency: float
    permeability: float = field(default=BACKGROUND_PERMEABILITY)

    def __post_init__(self):
        if not self.permittivity > 0:
            raise ValueError("permittivity must be positive")
        if not self.conductivity >= 0:
            raise ValueError("conductivity must be non-negative")
        if not self.frequency > 0:
            raise ValueError("frequency must be positive")
        if self.permeability != BACKGROUND_PERMEABILITY:
            raise ValueError("permeability is fixed at 4*pi*1e-7 H/m")

    @classmethod
    def from_relative(cls, eps_rel: float, conductivity: float, frequency: float) -> "Medium":
        return cls(eps_rel * VACUUM_PERMITTIVITY, conductivity, frequency)

    @property
    def angular_frequency(self) -> float:
        return 2.0 * math.pi * self.frequency

    @property
    def relative_permittivity(self) -> float:
        return self.permittivity / VACUUM_PERMITTIVITY

    @property
    def wavenumbers(self) -> Wavenumbers:
        return wavenumbers(self)

    @property
    def wavelength(self) -> float:
        return 2.0 * math.pi / self.wavenumbers.kb.real


def wavenumbers(medium: Medium) -> Wavenumbers:
    """Lossless and lossy background wavenumbers.

    ``kb`` is the principal square root of ``omega^2 mu (eps - i sigma/omega)``,
    which always has a positive real part here because the radicand has a
    positive real part.
    """
    w = medium.angular_frequency
    mu = medium.permeability
    k0 = w * math.sqrt(medium.permittivity * mu)
    radicand = w * w * mu * complex(medium.permittivity, -medium.conductivity / w)
    kb = complex(np.sqrt(np.complex128(radicand)))
    return Wavenumbers(k0=k0, kb=kb)


@dataclass(frozen=True)
class AntennaArray:
    """Antennas on a circle of radius ``radius`` centred at the origin.

    ``positions`` has shape (N, 2); ``angles[n]`` is the polar angle of
    ``positions[n]``.
    """

    positions: np.ndarray
    angles: np.ndarray

    def __post_init__(self):
        pos = _frozen(self.positions)
        ang = _frozen(self.angles)
        if pos.ndim != 2 or pos.shape[1] != 2 or pos.shape[0] != ang.shape[0]:
            raise ValueError("positions must be (N, 2) with one angle per antenna")
        radii = np.hypot(pos[:, 0], pos[:, 1])
        if radii[0] <= 0 or np.any(np.abs(radii - radii[0]) > 1e-12 * radii[0]):
            raise ValueError("antennas must lie on a common circle about the origin")
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "angles", ang)

    @classmethod
    def from_angles(cls, angles: Sequence[float], radius: float) -> "AntennaArray":
        ang = np.asarray(angles, dtype=float)
        pos = radius * np.column_stack([np.cos(ang), np.sin(ang)])
        return cls(pos, ang)

    @property
    def count(self) -> int:
        return self.positions.shape[0]

    @property
    def radius(self) -> float:
        return float(np.hypot(*self.positions[0]))

    @property
    def directions(self) -> np.ndarray:
        """Unit vectors a_n / R, shape (N, 2)."""
        return np.column_stack([np.cos(self.angles), np.sin(self.angles)])


def uniform_array(n: int, radius: float) -> AntennaArray:
    """N antennas at angles 3*pi/2 - 2*pi*(n-1)/N, n = 1..N."""
    if n < 3:
        raise ValueError("at least 3 antennas are required for imaging")
    if not radius > 0:
        raise ValueError("radius must be positive")
    angles = 1.5 * math.pi - 2.0 * math.pi * np.arange(n) / n
    return AntennaArray.from_angles(angles, radius)


@dataclass(frozen=True)
class DiskObject:
    center: tuple
    radius: float
    permittivity: float
    conductivity: float

    def __post_init__(self):
        c = tuple(float(v) for v in self.center)
        if len(c) != 2:
            raise ValueError("center must be a 2-D point")
        object.__setattr__(self, "center", c)
        if not self.radius > 0:
            raise ValueError("object radius must be positive")
        if not self.permittivity > 0 or self.conductivity < 0:
            raise ValueError("invalid object material parameters")

    @classmethod
    def from_relative(cls, center, radius, eps_rel, conductivity) -> "DiskObject":
        return cls(tuple(center), radius, eps_rel * VACUUM_PERMITTIVITY, conductivity)

    @property
    def diameter(self) -> float:
        return 2.0 * self.radius

    @property
    def area(self) -> float:
        return math.pi * self.radius**2

    def contains(self, points) -> np.ndarray:
        p = np.atleast_2d(points)
        return np.hypot(p[:, 0] - self.center[0], p[:, 1] - self.center[1]) <= self.radius


@dataclass(frozen=True)
class ImagingGrid:
    """Cell-centred rectangular grid over ``(x_min, x_max) x (y_min, y_max)``.

    Points are enumerated row-major: y is the slow index, x the fast one, so
    ``points.reshape(n_y, n_x, 2)`` recovers the image layout.
    """

    x_min: float
    x_max: float
    y_min: float
    y_max: float
    n_x: int
    n_y: int

    def __post_init__(self):
        if self.n_x < 1 or self.n_y < 1:
            raise ValueError("grid needs at least one point per axis")
        if not (self.x_max > self.x_min and self.y_max > self.y_min):
            raise ValueError("grid extents must be increasing")

    @classmethod
    def square(cls, half_width: float, n: int) -> "ImagingGrid":
        return cls(-half_width, half_width, -half_width, half_width, n, n)

    @property
    def spacing(self) -> tuple:
        return ((self.x_max - self.x_min) / self.n_x, (self.y_max - self.y_min) / self.n_y)

    @property
    def x(self) -> np.ndarray:
        hx = self.spacing[0]
        return self.x_min + hx * (np.arange(self.n_x) + 0.5)

    @property
    def y(self) -> np.ndarray:
        hy = self.spacing[1]
        return self.y_min + hy * (np.arange(self.n_y) + 0.5)

    @property
    def shape(self) -> tuple:
        return (self.n_y, self.n_x)

    @property
    def points(self) -> np.ndarray:
        xx, yy = np.meshgrid(self.x, self.y)
        return np.column_stack([xx.ravel(), yy.ravel()])

    def contains_disk(self, obj: DiskObject) -> bool:
        cx, cy = obj.center
        r = obj.radius
        return (self.x_min < cx - r and cx + r < self.x_max
                and self.y_min < cy - r and cy + r < self.y_max)


@dataclass(frozen=True)
class Scene:
    medium: Medium
    array: AntennaArray
    objects: tuple
    grid: ImagingGrid

    def __post_init__(self):
        objects = tuple(self.objects)
        object.__setattr__(self, "objects", objects)
        for i, obj in enumerate(objects):
            if not self.grid.contains_disk(obj):
                raise ValueError(f"object {i} does not lie strictly inside the region of interest")
            pts = _disk_extreme_points(obj)
            if _min_antenna_distance(self.array, pts) < ANTENNA_GUARD:
                raise ValueError(f"object {i} is too close to an antenna")
        # the preset square ROI has corners beyond R; only the antenna guard is enforced
        pts = self.grid.points
        if _min_antenna_distance(self.array, pts) < ANTENNA_GUARD:
            raise ValueError("grid points are too close to an antenna")

    @property
    def wavenumbers(self) -> Wavenumbers:
        return wavenumbers(self.medium)

    def with_objects(self, objects) -> "Scene":
        return Scene(self.medium, self.array, tuple(objects), self.grid)

    def with_grid(self, grid: ImagingGrid) -> "Scene":
        return Scene(self.medium, self.array, self.objects, grid)


def _disk_extreme_points(obj: DiskObject) -> np.ndarray:
    # Closest approach of a disk to any antenna is along the ray from the origin.
    t = np.linspace(0.0, 2.0 * math.pi, 64, endpoint=False)
    return np.column_stack([obj.center[0] + obj.radius * np.cos(t),
                            obj.center[1] + obj.radius * np.sin(t)])


def _min_antenna_distance(array: AntennaArray, points: np.ndarray) -> float:
    d = np.linalg.norm(points[:, None, :] - array.positions[None, :, :], axis=-1)
    return float(d.min())


@dataclass(frozen=True)
class ObjectValidity:
    index: int
    lhs: float  # sqrt(eps_a/eps_0) * diam(D)
    rhs: float  # sqrt(eps_b/eps_0) * wavelength
    ok: bool


@dataclass(frozen=True)
class BornReport:
    objects: tuple
    loss_ratio: float  # omega * eps_b / sigma_b (inf when lossless)
    loss_ok: bool

    @property
    def ok(self) -> bool:
        return self.loss_ok and all(o.ok for o in self.objects)

    def to_dict(self) -> dict:
        return {
            "loss_ratio": self.loss_ratio if math.isfinite(self.loss_ratio) else None,
            "loss_ok": self.loss_ok,
            "objects": [
                {"index": o.index, "lhs": o.lhs, "rhs": o.rhs, "ok": o.ok} for o in self.objects
            ],
        }


def validate_born(scene: Scene) -> BornReport:
    """Check the small-object and low-loss conditions for the Born model.

    Never raises: a failing check only shows up in the report.
    """
    medium = scene.medium
    rhs = math.sqrt(medium.relative_permittivity) * medium.wavelength
    checks = []
    for i, obj in enumerate(scene.objects):
        lhs = math.sqrt(obj.permittivity / VACUUM_PERMITTIVITY) * obj.diameter
        checks.append(ObjectValidity(i, lhs, rhs, lhs < rhs))
    if medium.conductivity == 0:
        ratio = math.inf
    else:
        ratio = medium.angular_frequency * medium.permittivity / medium.conductivity
    return BornReport(tuple(checks), ratio, ratio > LOSS_RATIO_THRESHOLD)
