"""Subspace-migration imaging.

For a search point z, the unit test vector W(z) stacks the incident fields
from every antenna (``mode="exact"``) or their plane-wave forms
(``mode="farfield"``). With the SVD of K(C) = sum tau_n U_n V_n^*, the image is

    F(z, C) = | sum_{n <= M} <W(z), U_n> <W(z), conj(V_n)> |,   <a, b> = a^* b.

:class:`SubspaceMigration` wraps the pipeline as a scikit-learn estimator:
``fit`` takes the measured N x N matrix, ``score_samples`` evaluates F at
search points.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .exceptions import SingularityError
from .scene import ANTENNA_GUARD, ImagingGrid, Scene
from .smatrix import ScatteringMatrix, SvdFactors, mask_diagonal, select_rank, svd
from .specfun import hankel1_0

TEST_VECTOR_MODES = ("exact", "farfield")


def test_vectors(points, positions, kb: complex, mode: str = "exact") -> np.ndarray:
    """Unit test vectors for many search points, shape (P, N)."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    positions = np.asarray(positions, dtype=float)
    if mode == "exact":
        r = np.linalg.norm(points[:, None, :] - positions[None, :, :], axis=-1)
        if np.any(r < ANTENNA_GUARD):
            raise SingularityError("search point coincides with an antenna")
        W = -0.25j * hankel1_0(kb * r)
    elif mode == "farfield":
        radius = np.hypot(positions[:, 0], positions[:, 1])
        theta = positions / radius[:, None]
        W = np.exp(-1j * kb * (points @ theta.T))
    else:
        raise ValueError(f"unknown test-vector mode {mode!r}")
    return W / np.linalg.norm(W, axis=1, keepdims=True)


def test_vector(z, scene: Scene, mode: str = "exact") -> np.ndarray:
    return test_vectors(z, scene.array.positions, scene.wavenumbers.kb, mode)[0]


# keep pytest from collecting these when imported into test modules
test_vectors.__test__ = False
test_vector.__test__ = False


def migration_values(W: np.ndarray, factors: SvdFactors, rank: int) -> np.ndarray:
    """|sum_{n<=M} (W^* U_n)(W^* conj(V_n))| for each row of W."""
    U = factors.left_vectors[:, :rank]
    V = factors.right_vectors[:, :rank]
    Wh = W.conj()
    return np.abs(np.sum((Wh @ U) * (Wh @ V.conj()), axis=1))


def imaging_value(z, factors: SvdFactors, rank: int, scene: Scene, mode: str = "exact") -> float:
    W = test_vectors(z, scene.array.positions, scene.wavenumbers.kb, mode)
    return float(migration_values(W, factors, rank)[0])


@dataclass(frozen=True)
class ImagingMap:
    grid: ImagingGrid
    values: np.ndarray  # shape grid.shape, row-major like grid.points
    constant_used: complex
    rank_used: int

    def __post_init__(self):
        v = np.array(self.values, dtype=float).reshape(self.grid.shape)
        if not np.all(np.isfinite(v)) or np.any(v < 0):
            raise ValueError("imaging values must be finite and non-negative")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def argmax(self) -> np.ndarray:
        return self.grid.points[int(np.argmax(self.values))]


class SubspaceMigration(BaseEstimator):
    """Subspace migration with a constant-valued diagonal.

    Parameters
    ----------
    positions : array_like, shape (N, 2)
        Antenna positions in metres.
    wavenumber : complex
        Background wavenumber kb.
    constant : complex, default=0
        Value C written onto the diagonal of the data before the SVD.
    rank : {"gap", "absgap", "threshold"} or int, default="gap"
        Signal-subspace selection; see :func:`submig.smatrix.select_rank`.
    threshold : float, default=0.1
        Relative level used when ``rank="threshold"``.
    mode : {"exact", "farfield"}, default="exact"
        Test-vector model.

    Attributes
    ----------
    matrix_ : ScatteringMatrix
        K(C) after diagonal substitution.
    factors_ : SvdFactors
    singular_values_ : ndarray
    rank_ : int
    """

    def __init__(self, positions=None, wavenumber=1.0, constant=0.0, rank="gap",
                 threshold=0.1, mode="exact"):
        self.positions = positions
        self.wavenumber = wavenumber
        self.constant = constant
        self.rank = rank
        self.threshold = threshold
        self.mode = mode

    @classmethod
    def from_scene(cls, scene: Scene, **params) -> "SubspaceMigration":
        return cls(positions=scene.array.positions, wavenumber=scene.wavenumbers.kb, **params)

    def fit(self, X, y=None):
        """Substitute the diagonal, decompose and choose the rank.

        ``X`` is the N x N scattering matrix (array or ScatteringMatrix).
        """
        if self.mode not in TEST_VECTOR_MODES:
            raise ValueError(f"unknown test-vector mode {self.mode!r}")
        if not isinstance(X, ScatteringMatrix):
            X = ScatteringMatrix(np.asarray(X, dtype=complex))
        n = X.size
        positions = np.asarray(self.positions, dtype=float)
        if positions.shape != (n, 2):
            raise ValueError(f"positions shape {positions.shape} does not match a {n}x{n} matrix")
        C = complex(self.constant)
        if not np.isfinite(C):
            raise ValueError("constant must be finite")
        self.matrix_ = mask_diagonal(X, C)
        self.factors_ = svd(self.matrix_)
        self.singular_values_ = self.factors_.singular_values
        self.rank_ = select_rank(self.factors_, self.rank, self.threshold)
        self.n_antennas_ = n
        return self

    def score_samples(self, Z) -> np.ndarray:
        """Imaging function F(z, C) at each row of ``Z`` (shape (P, 2))."""
        check_is_fitted(self, "factors_")
        Z = check_array(Z, dtype=float)
        if Z.shape[1] != 2:
            raise ValueError("search points must be 2-D")
        W = test_vectors(Z, self.positions, complex(self.wavenumber), self.mode)
        return migration_values(W, self.factors_, self.rank_)

    def transform(self, Z) -> np.ndarray:
        return self.score_samples(Z)[:, None]

    def image(self, grid: ImagingGrid) -> ImagingMap:
        values = self.score_samples(grid.points)
        return ImagingMap(grid, values.reshape(grid.shape), complex(self.constant), self.rank_)


def imaging_map(scene: Scene, K: ScatteringMatrix, C: complex = 0.0, strategy="gap",
                mode: str = "exact", threshold: float = 0.1) -> ImagingMap:
    est = SubspaceMigration.from_scene(scene, constant=C, rank=strategy,
                                       threshold=threshold, mode=mode).fit(K)
    return est.image(scene.grid)


@dataclass(frozen=True)
class Peaks:
    points: np.ndarray  # (k, 2)
    values: np.ndarray
    complete: bool  # False when fewer maxima than requested were found


def _local_maxima(values: np.ndarray) -> np.ndarray:
    """Flat indices of cells >= all 8 neighbours."""
    v = np.asarray(values, dtype=float)
    padded = np.pad(v, 1, mode="constant", constant_values=-np.inf)
    ny, nx = v.shape
    is_max = np.ones_like(v, dtype=bool)
    for dy in (-1, 0, 1):
        for dx in (-1, 0, 1):
            if dy == 0 and dx == 0:
                continue
            is_max &= v >= padded[1 + dy:1 + dy + ny, 1 + dx:1 + dx + nx]
    return np.flatnonzero(is_max)


def peak_extract(image: ImagingMap, count: int, min_separation: float) -> Peaks:
    """Greedy pick of local maxima, highest first, at least ``min_separation`` apart.

    Ties keep row-major order.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    flat = image.values.ravel()
    candidates = _local_maxima(image.values)
    order = candidates[np.argsort(-flat[candidates], kind="stable")]
    pts = image.grid.points
    chosen = []
    for idx in order:
        p = pts[idx]
        if all(np.hypot(*(p - pts[c])) >= min_separation for c in chosen):
            chosen.append(idx)
            if len(chosen) == count:
                break
    chosen = np.array(chosen, dtype=int)
    return Peaks(pts[chosen].reshape(-1, 2), flat[chosen], len(chosen) == count)


def contrast_ratio(image: ImagingMap, centers, radius: float = 0.02) -> float:
    """Global peak divided by the largest value farther than ``radius`` from every centre."""
    pts = image.grid.points
    vals = image.values.ravel()
    far = np.ones(len(pts), dtype=bool)
    for c in np.atleast_2d(centers):
        far &= np.hypot(pts[:, 0] - c[0], pts[:, 1] - c[1]) > radius
    if not far.any():
        raise ValueError("no grid points outside the exclusion disks")
    return float(vals.max() / vals[far].max())
