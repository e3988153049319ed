import math

import numpy as np
import pytest
from sklearn.base import clone

from submig.exceptions import NoSignalError, SingularityError
from submig.forward import QuadratureSpec
from submig.imaging import (ImagingMap, SubspaceMigration, _local_maxima, contrast_ratio,
                            imaging_map, imaging_value, migration_values, peak_extract,
                            test_vector, test_vectors)
from submig.scene import DiskObject, ImagingGrid
from submig.smatrix import ScatteringMatrix, assemble, svd

X1 = np.array([0.01, 0.03])
X2 = np.array([-0.04, -0.02])
CELL = 0.00125


def test_test_vectors_unit_norm(example1, rng):
    Z = rng.uniform(-0.08, 0.08, (50, 2))
    for mode in ("exact", "farfield"):
        W = test_vectors(Z, example1.array.positions, example1.wavenumbers.kb, mode)
        np.testing.assert_allclose(np.linalg.norm(W, axis=1), 1.0, atol=1e-12)


def test_farfield_vector_at_origin(example1):
    W = test_vector(np.zeros(2), example1, "farfield")
    np.testing.assert_allclose(W, 1 / 4.0, atol=1e-15)


def test_modes_nearly_parallel(example1):
    inner = abs(np.vdot(test_vector(X1, example1, "exact"), test_vector(X1, example1, "farfield")))
    assert inner > 0.97


def test_test_vector_singular_at_antenna(example1):
    with pytest.raises(SingularityError):
        test_vector(example1.array.positions[3], example1, "exact")
    with pytest.raises(ValueError):
        test_vector(X1, example1, "dipole")


def test_rank_one_self_projection(example1):
    w0 = test_vector(X1, example1, "exact")
    K = 2.5 * np.outer(w0, w0)
    f = svd(K)
    assert imaging_value(X1, f, 1, example1, "exact") == pytest.approx(1.0, abs=1e-10)
    # bilinear-form oracle: U1 V1^* = K / tau1
    z = np.array([-0.02, 0.05])
    w = test_vector(z, example1, "exact")
    oracle = abs(w.conj() @ (K / f.singular_values[0]) @ w.conj())
    assert imaging_value(z, f, 1, example1, "exact") == pytest.approx(oracle, abs=1e-10)


def test_rank_one_orthogonal_point(example1):
    w0 = test_vector(X1, example1, "exact")
    e = np.zeros(16, complex)
    e[0] = 1
    w1 = e - np.vdot(w0, e) * w0
    w1 /= np.linalg.norm(w1)
    K = np.outer(w0, w0)
    f = svd(K)
    assert migration_values(w1[None, :], f, 1)[0] < 1e-10


def test_values_bounded_by_rank(example2, born2, rng):
    Z = rng.uniform(-0.08, 0.08, (200, 2))
    for M in (1, 2, 5):
        est = SubspaceMigration.from_scene(example2, constant=0.01j, rank=M).fit(born2)
        assert np.all(est.score_samples(Z) <= M + 1e-12)


def test_scale_invariance(example1, born1, rng):
    Z = rng.uniform(-0.08, 0.08, (300, 2))
    base = SubspaceMigration.from_scene(example1, constant=0.0).fit(born1).score_samples(Z)
    c = 3.7e4 * np.exp(0.9j)
    scaled = ScatteringMatrix(c * born1.entries)
    other = SubspaceMigration.from_scene(example1, constant=0.0).fit(scaled).score_samples(Z)
    assert np.max(np.abs(base - other)) < 1e-10


def test_estimator_params_and_clone(example1, born1):
    est = SubspaceMigration.from_scene(example1, constant=0.01, rank=2, mode="farfield")
    params = est.get_params()
    assert params["constant"] == 0.01 and params["rank"] == 2 and params["mode"] == "farfield"
    twin = clone(est)
    assert not hasattr(twin, "factors_")
    est.fit(born1)
    assert est.rank_ == 2 and est.n_antennas_ == 16
    assert est.transform(X1[None, :]).shape == (1, 1)


def test_estimator_requires_fit(example1):
    from sklearn.exceptions import NotFittedError

    with pytest.raises(NotFittedError):
        SubspaceMigration.from_scene(example1).score_samples(X1[None, :])


def test_estimator_shape_checks(example1, born1):
    est = SubspaceMigration(positions=example1.array.positions[:8], wavenumber=94.0)
    with pytest.raises(ValueError):
        est.fit(born1)
    with pytest.raises(ValueError):
        SubspaceMigration.from_scene(example1, mode="bad").fit(born1)


def test_zero_data_has_no_signal(example1):
    with pytest.raises(NoSignalError):
        imaging_map(example1, ScatteringMatrix(np.zeros((16, 16))), 0.0)


def test_example1_localisation(example1, born1):
    image = imaging_map(example1, born1, 0.0)
    assert np.linalg.norm(image.argmax - X1) <= CELL
    assert image.values.shape == (128, 128) and image.rank_used == 1


def test_example1_artifact_at_real_constant(example1, born1):
    image = imaging_map(example1, born1, 0.1)
    vmax = image.values.max()
    pts = image.grid.points
    idx = _local_maxima(image.values)
    far = np.hypot(*(pts[idx] - X1).T) > 0.02
    assert np.any(image.values.ravel()[idx][far] >= 0.5 * vmax)


def test_example2_peaks(example2, born2):
    image = imaging_map(example2, born2, 0.0)
    peaks = peak_extract(image, 2, 0.02)
    assert peaks.complete
    found = sorted(peaks.points.tolist(), key=lambda p: p[0])
    assert np.linalg.norm(np.array(found[0]) - X2) <= CELL
    assert np.linalg.norm(np.array(found[1]) - X1) <= CELL


def test_rotation_covariance_of_argmax(example1):
    step = -2 * math.pi / 16
    rot = np.array([[math.cos(step), -math.sin(step)], [math.sin(step), math.cos(step)]])
    obj = example1.objects[0]
    moved = DiskObject(tuple(rot @ X1), obj.radius, obj.permittivity, obj.conductivity)
    q = QuadratureSpec(16)
    a = imaging_map(example1, assemble(example1, "farfield", q), 0.0, mode="farfield")
    scene2 = example1.with_objects([moved])
    b = imaging_map(scene2, assemble(scene2, "farfield", q), 0.0, mode="farfield")
    assert np.linalg.norm(rot @ a.argmax - b.argmax) <= math.sqrt(2) * CELL


def _map(values):
    v = np.asarray(values, dtype=float)
    grid = ImagingGrid(0.0, 1.0, 0.0, 1.0, v.shape[1], v.shape[0])
    return ImagingMap(grid, v, 0j, 1)


def test_peak_extract_single_bump():
    g = ImagingGrid(-1, 1, -1, 1, 41, 41)
    pts = g.points
    c = np.array([0.3, -0.2])
    image = ImagingMap(g, np.exp(-np.sum((pts - c) ** 2, axis=1) / 0.05).reshape(41, 41), 0j, 1)
    peaks = peak_extract(image, 1, 0.1)
    np.testing.assert_allclose(peaks.points[0], image.argmax)
    assert np.linalg.norm(peaks.points[0] - c) < 0.05


def test_peak_extract_flat_map_row_major():
    image = _map(np.ones((4, 5)))
    peaks = peak_extract(image, 2, 0.0)
    np.testing.assert_allclose(peaks.points, image.grid.points[[0, 1]])


def test_peak_extract_incomplete_flag():
    v = np.zeros((5, 5))
    v[2, 2] = 1.0
    image = _map(v)
    peaks = peak_extract(image, 3, 10.0)
    assert not peaks.complete and len(peaks.points) == 1
    with pytest.raises(ValueError):
        peak_extract(image, 0, 0.1)


def test_imaging_map_validates_values():
    with pytest.raises(ValueError):
        _map([[1.0, -1.0]])
    with pytest.raises(ValueError):
        _map([[1.0, np.inf]])


def test_contrast_ratio_simple():
    v = np.full((5, 5), 0.25)
    v[2, 2] = 1.0
    image = _map(v)
    assert contrast_ratio(image, [image.grid.points[12]], radius=0.15) == pytest.approx(4.0)
    with pytest.raises(ValueError):
        contrast_ratio(image, [[0.5, 0.5]], radius=10.0)


def test_map_deterministic(example1, born1):
    a = imaging_map(example1, born1, 0.001j).values
    b = imaging_map(example1, born1, 0.001j).values
    assert np.array_equal(a, b)
