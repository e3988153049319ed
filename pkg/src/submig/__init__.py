"""Subspace migration imaging with a constant-valued scattering-matrix diagonal."""

from .exceptions import (ConfigError, DomainError, MatrixFormatError, NoSignalError,
                         NumericalError, ResolutionError, SingularityError, SubmigError)
from .forward import QuadratureSpec, born_matrix, contrast, farfield_matrix
from .imaging import ImagingMap, SubspaceMigration, imaging_map, peak_extract
from .scene import (AntennaArray, DiskObject, ImagingGrid, Medium, Scene, uniform_array,
                    validate_born, wavenumbers)
from .smatrix import ScatteringMatrix, SvdFactors, assemble, mask_diagonal, select_rank, svd
from .specfun import SeriesParams

__version__ = "0.1.0"

__all__ = [
    "AntennaArray", "ConfigError", "DiskObject", "DomainError", "ImagingGrid", "ImagingMap",
    "MatrixFormatError", "Medium", "NoSignalError", "NumericalError", "QuadratureSpec",
    "ResolutionError", "Scene", "ScatteringMatrix", "SeriesParams", "SingularityError",
    "SubmigError", "SubspaceMigration", "SvdFactors", "assemble", "born_matrix", "contrast",
    "farfield_matrix", "imaging_map", "mask_diagonal", "peak_extract", "select_rank", "svd",
    "uniform_array", "validate_born", "wavenumbers",
]
