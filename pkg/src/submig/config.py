"""Run configuration: key = value text files and built-in presets.

Format::

    # comment
    preset = example1          # optional base, later keys override it
    frequency_hz = 1e9
    eps_b_rel = 20
    sigma_b = 0.2
    n_antennas = 16
    radius_m = 0.09
    x_min = -0.08              # also x_max, y_min, y_max
    grid = 128
    c_re = 0
    c_im = 0.001
    rank = auto                # auto | gap | absgap | INT
    source = born              # born | farfield | external:PATH
    mode = auto                # auto | exact | farfield
    truncation_l = 60
    subdivisions = 32
    out_dir = runs/example1

    [object]                   # one block per disk; repeated blocks add objects
    center_x = 0.01
    center_y = 0.03
    radius = 0.01
    eps_rel = 55
    sigma = 1.2
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .exceptions import ConfigError
from .forward import QuadratureSpec
from .scene import DiskObject, ImagingGrid, Medium, Scene, uniform_array
from .specfun import SeriesParams, default_truncation


@dataclass(frozen=True)
class ObjectSpec:
    center_x: float
    center_y: float
    radius: float
    eps_rel: float
    sigma: float

    def build(self) -> DiskObject:
        return DiskObject.from_relative((self.center_x, self.center_y), self.radius,
                                        self.eps_rel, self.sigma)


@dataclass(frozen=True)
class RunConfig:
    frequency_hz: float = 1e9
    eps_b_rel: float = 20.0
    sigma_b: float = 0.2
    n_antennas: int = 16
    radius_m: float = 0.09
    objects: tuple = ()
    x_min: float = -0.08
    x_max: float = 0.08
    y_min: float = -0.08
    y_max: float = 0.08
    grid: int = 128
    constant: complex = 0j
    rank: object = "gap"
    source: str = "born"
    external_path: str | None = None
    mode: str = "auto"
    truncation_l: int | None = None
    subdivisions: int = 32
    out_dir: str | None = None
    preset: str | None = None
    peak_count: int | None = None
    min_separation: float = 0.02

    def __post_init__(self):
        if not np.isfinite(complex(self.constant)):
            raise ConfigError("constant C must be finite")
        if self.source not in ("born", "farfield", "external"):
            raise ConfigError(f"unknown source {self.source!r}")
        if self.source == "external" and not self.external_path:
            raise ConfigError("external source needs a matrix path")
        if self.mode not in ("auto", "exact", "farfield"):
            raise ConfigError(f"unknown test-vector mode {self.mode!r}")
        if not (isinstance(self.rank, int) or self.rank in ("gap", "absgap", "threshold")):
            raise ConfigError(f"unknown rank strategy {self.rank!r}")

    def replace(self, **changes) -> "RunConfig":
        return dataclasses.replace(self, **changes)

    @property
    def test_vector_mode(self) -> str:
        if self.mode != "auto":
            return self.mode
        return "farfield" if self.source == "farfield" else "exact"

    @property
    def quadrature(self) -> QuadratureSpec:
        return QuadratureSpec(self.subdivisions)

    def scene(self) -> Scene:
        try:
            medium = Medium.from_relative(self.eps_b_rel, self.sigma_b, self.frequency_hz)
            array = uniform_array(self.n_antennas, self.radius_m)
            grid = ImagingGrid(self.x_min, self.x_max, self.y_min, self.y_max, self.grid, self.grid)
            return Scene(medium, array, tuple(o.build() for o in self.objects), grid)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def series_params(self) -> SeriesParams:
        if self.truncation_l is not None:
            return SeriesParams(self.truncation_l)
        diag = float(np.hypot(self.x_max - self.x_min, self.y_max - self.y_min))
        kb = self.scene().wavenumbers.kb
        return SeriesParams(default_truncation(kb, diag))


D1 = ObjectSpec(0.01, 0.03, 0.01, 55.0, 1.2)
D2 = ObjectSpec(-0.04, -0.02, 0.01, 45.0, 1.0)
# The centre of the large object is a free choice; radius and material are fixed.
D_LARGE = ObjectSpec(0.01, 0.03, 0.048, 15.0, 0.5)

PRESETS = {
    "example1": RunConfig(objects=(D1,), preset="example1"),
    "example2": RunConfig(objects=(D1, D2), preset="example2"),
    "example3": RunConfig(objects=(D_LARGE,), preset="example3"),
    "table1": RunConfig(preset="table1"),
}

SWEEP_CONSTANTS = (0j, 0.01 + 0j, 0.1 + 0j, 0.001j, 0.01j, 0.1j)


def preset(name: str) -> RunConfig:
    try:
        return PRESETS[name]
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None


_FLOAT_KEYS = {"frequency_hz", "eps_b_rel", "sigma_b", "radius_m", "x_min", "x_max",
               "y_min", "y_max", "min_separation"}
_INT_KEYS = {"n_antennas", "grid", "subdivisions", "peak_count"}
_OBJECT_KEYS = {f.name for f in dataclasses.fields(ObjectSpec)}


def parse_rank(text: str):
    t = text.strip().lower()
    if t in ("auto", "gap"):
        return "gap"
    if t in ("absgap", "threshold"):
        return t
    try:
        return int(t)
    except ValueError:
        raise ConfigError(f"bad rank value {text!r}") from None


def parse_source(text: str) -> dict:
    t = text.strip()
    if t.startswith("external:"):
        return {"source": "external", "external_path": t.split(":", 1)[1]}
    if t in ("born", "farfield"):
        return {"source": t}
    raise ConfigError(f"bad source {text!r}")


def parse_config_text(text: str) -> RunConfig:
    base = RunConfig()
    values: dict = {}
    objects: list = []
    current: dict | None = None
    c_re = c_im = None

    def close_object(lineno):
        if current is None:
            return
        missing = _OBJECT_KEYS - current.keys()
        if missing:
            raise ConfigError(f"object block ending at line {lineno} lacks {sorted(missing)}")
        objects.append(ObjectSpec(**current))

    lineno = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.lower() == "[object]":
            close_object(lineno)
            current = {}
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, val = (s.strip() for s in line.split("=", 1))
        key = key.lower()
        try:
            if current is not None and key in _OBJECT_KEYS:
                current[key] = float(val)
            elif key == "preset":
                base = preset(val)
            elif key in _FLOAT_KEYS:
                values[key] = float(val)
            elif key in _INT_KEYS:
                values[key] = int(val)
            elif key == "c_re":
                c_re = float(val)
            elif key == "c_im":
                c_im = float(val)
            elif key == "rank":
                values["rank"] = parse_rank(val)
            elif key == "source":
                values.update(parse_source(val))
            elif key == "mode":
                values["mode"] = val.lower()
            elif key == "truncation_l":
                values["truncation_l"] = int(val)
            elif key == "out_dir":
                values["out_dir"] = val
            else:
                raise ConfigError(f"line {lineno}: unknown key {key!r}")
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"line {lineno}: bad value for {key!r}: {val!r}") from None
    close_object(lineno + 1)
    if objects:
        values["objects"] = tuple(objects)
    if c_re is not None or c_im is not None:
        values["constant"] = complex(c_re or 0.0, c_im or 0.0)
    return base.replace(**values)


def load_config(path) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config_text(text)
