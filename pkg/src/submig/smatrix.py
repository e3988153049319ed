"""Scattering matrices, constant-diagonal substitution, SVD and rank choice."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .exceptions import MatrixFormatError, NoSignalError, NumericalError
from .forward import GENERATORS, QuadratureSpec
from .scene import Scene


@dataclass(frozen=True)
class ScatteringMatrix:
    """N x N complex data matrix plus provenance of its diagonal.

    ``diagonal_policy`` is ``"measured"`` or ``"constant"``; in the latter
    case every diagonal entry equals ``constant`` exactly.
    """

    entries: np.ndarray
    diagonal_policy: str = "measured"
    constant: complex | None = None
    source: str = "external"

    def __post_init__(self):
        K = np.array(self.entries, dtype=complex)
        if K.ndim != 2 or K.shape[0] != K.shape[1]:
            raise ValueError("scattering matrix must be square")
        if self.diagonal_policy not in ("measured", "constant"):
            raise ValueError(f"unknown diagonal policy {self.diagonal_policy!r}")
        if self.diagonal_policy == "constant" and self.constant is None:
            raise ValueError("constant diagonal policy requires a constant")
        K.setflags(write=False)
        object.__setattr__(self, "entries", K)

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    def off_diagonal(self) -> np.ndarray:
        """Copy of the entries with the diagonal zeroed."""
        K = self.entries.copy()
        np.fill_diagonal(K, 0)
        return K


def assemble(scene: Scene, source: str = "born", quad: QuadratureSpec = QuadratureSpec()) -> ScatteringMatrix:
    try:
        generator = GENERATORS[source]
    except KeyError:
        raise ValueError(f"unknown data source {source!r}") from None
    return ScatteringMatrix(generator(scene, quad), "measured", None, source)


def mask_diagonal(K: ScatteringMatrix, C: complex) -> ScatteringMatrix:
    """Replace every diagonal entry by ``C``; off-diagonal entries are untouched."""
    entries = np.array(K.entries)
    np.fill_diagonal(entries, complex(C))
    return ScatteringMatrix(entries, "constant", complex(C), K.source)


@dataclass(frozen=True)
class SvdFactors:
    singular_values: np.ndarray
    left_vectors: np.ndarray  # columns U_n
    right_vectors: np.ndarray  # columns V_n

    def reconstruct(self, rank: int | None = None) -> np.ndarray:
        r = len(self.singular_values) if rank is None else rank
        U = self.left_vectors[:, :r]
        V = self.right_vectors[:, :r]
        return (U * self.singular_values[:r]) @ V.conj().T


def svd(K) -> SvdFactors:
    """Singular value decomposition K = sum_n tau_n U_n V_n^*, tau descending.

    Accepts a ``ScatteringMatrix`` or a plain square array.
    """
    entries = K.entries if isinstance(K, ScatteringMatrix) else np.asarray(K, dtype=complex)
    if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
        raise ValueError("svd expects a square matrix")
    if not np.all(np.isfinite(entries)):
        raise NumericalError("scattering matrix has non-finite entries")
    try:
        U, s, Vh = np.linalg.svd(entries)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"SVD did not converge: {exc}") from exc
    return SvdFactors(s, U, Vh.conj().T)


RANK_STRATEGIES = ("gap", "absgap", "threshold")


def select_rank(factors: SvdFactors, strategy="gap", threshold: float = 0.1) -> int:
    """Number M of singular values treated as signal.

    Parameters
    ----------
    factors : SvdFactors
    strategy : {"gap", "absgap", "threshold"} or int
        ``"gap"`` picks the largest drop of the spectrum on a log scale,
        i.e. argmax of tau_n / tau_{n+1} over n <= N/2. ``"absgap"`` uses the
        raw differences tau_n - tau_{n+1} over the same range. ``"threshold"``
        counts tau_n >= threshold * tau_1. An integer pins M (clamped to [1, N]).
    threshold : float
        Relative level for the ``"threshold"`` strategy.
    """
    tau = np.asarray(factors.singular_values, dtype=float)
    n = len(tau)
    if not tau[0] > 0:
        raise NoSignalError("all singular values vanish; nothing to image")
    if isinstance(strategy, (int, np.integer)) and not isinstance(strategy, bool):
        return int(min(max(strategy, 1), n))
    if strategy == "threshold":
        return int(np.count_nonzero(tau >= threshold * tau[0]))
    last = max(1, min(n // 2, n - 1))
    if strategy == "gap":
        floored = np.maximum(tau, tau[0] * 1e-14)
        drops = np.log(floored[:last]) - np.log(floored[1:last + 1])
    elif strategy == "absgap":
        drops = tau[:last] - tau[1:last + 1]
    else:
        raise ValueError(f"unknown rank strategy {strategy!r}")
    return int(np.argmax(drops)) + 1


# --- file formats ----------------------------------------------------------
# CSV rows are "row,col,re,im" with 1-based antenna indices; floats use repr(),
# which round-trips binary64 exactly.

CSV_HEADER = ("row", "col", "re", "im")


def write_csv(K, path) -> None:
    entries = K.entries if isinstance(K, ScatteringMatrix) else np.asarray(K, dtype=complex)
    n = entries.shape[0]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for i in range(n):
            for j in range(n):
                v = entries[i, j]
                w.writerow([i + 1, j + 1, repr(float(v.real)), repr(float(v.imag))])


def read_csv(path) -> ScatteringMatrix:
    """Load a matrix written as "row,col,re,im" lines (header optional)."""
    values = {}
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not cell.strip() for cell in row):
                continue
            if lineno == 1 and tuple(c.strip().lower() for c in row) == CSV_HEADER:
                continue
            if len(row) != 4:
                raise MatrixFormatError(f"line {lineno}: expected 4 fields, got {len(row)}")
            try:
                i, j = int(row[0]), int(row[1])
                re, im = float(row[2]), float(row[3])
            except ValueError:
                raise MatrixFormatError(f"line {lineno}: cannot parse {row!r}") from None
            if i < 1 or j < 1:
                raise MatrixFormatError(f"line {lineno}: indices are 1-based")
            if not (math.isfinite(re) and math.isfinite(im)):
                raise MatrixFormatError(f"line {lineno}: non-finite value")
            if (i, j) in values:
                raise MatrixFormatError(f"line {lineno}: duplicate entry ({i}, {j})")
            values[(i, j)] = complex(re, im)
    if not values:
        raise MatrixFormatError("no matrix entries found")
    n = max(max(i, j) for i, j in values)
    if len(values) != n * n:
        missing = next((i, j) for i in range(1, n + 1) for j in range(1, n + 1)
                       if (i, j) not in values)
        raise MatrixFormatError(f"matrix is not square/complete: entry {missing} missing")
    K = np.empty((n, n), dtype=complex)
    for (i, j), v in values.items():
        K[i - 1, j - 1] = v
    return ScatteringMatrix(K, "measured", None, "external")


def to_json(K: ScatteringMatrix) -> dict:
    return {
        "size": K.size,
        "source": K.source,
        "diagonal_policy": K.diagonal_policy,
        "constant": None if K.constant is None else [K.constant.real, K.constant.imag],
        "re": K.entries.real.tolist(),
        "im": K.entries.imag.tolist(),
    }


def from_json(data: dict) -> ScatteringMatrix:
    try:
        K = np.array(data["re"], dtype=float) + 1j * np.array(data["im"], dtype=float)
    except (KeyError, ValueError, TypeError) as exc:
        raise MatrixFormatError(f"bad matrix JSON: {exc}") from None
    if K.ndim != 2 or K.shape[0] != K.shape[1]:
        raise MatrixFormatError("matrix JSON is not square")
    if not np.all(np.isfinite(K)):
        raise MatrixFormatError("matrix JSON has non-finite values")
    c = data.get("constant")
    policy = data.get("diagonal_policy", "measured")
    return ScatteringMatrix(K, policy, None if c is None else complex(*c),
                            data.get("source", "external"))


def write_json(K: ScatteringMatrix, path) -> None:
    Path(path).write_text(json.dumps(to_json(K)))


def read_json(path) -> ScatteringMatrix:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise MatrixFormatError(f"invalid JSON: {exc}") from None
    return from_json(data)


def read_matrix(path) -> ScatteringMatrix:
    """Dispatch on extension: ``.json`` or CSV otherwise."""
    try:
        if str(path).lower().endswith(".json"):
            return read_json(path)
        return read_csv(path)
    except OSError as exc:
        raise MatrixFormatError(f"cannot read matrix {path}: {exc}") from exc
