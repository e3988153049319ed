"""Command-line experiment runner.

    submig run --preset example1 [--c-re F --c-im F] [--rank auto|INT]
               [--source born|farfield|external:PATH] [--grid INT]
               [--trunc-l INT] [--out DIR]
    submig run --config PATH
    submig sweep --preset example1 --c-list 0,0.01,0.1,0.001j,0.01j,0.1j --out DIR

Exit codes: 0 success, 2 configuration error, 3 numerical error.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path


from . import output
from .config import SWEEP_CONSTANTS, RunConfig, load_config, parse_rank, parse_source, preset
from .exceptions import ConfigError, MatrixFormatError, NumericalError, SubmigError
from .imaging import SubspaceMigration, contrast_ratio, peak_extract
from .scene import validate_born
from .smatrix import ScatteringMatrix, assemble, read_matrix, write_csv
from .theory import farfield_condition, table1

logger = logging.getLogger(__name__)

TABLE1_XS = (0.1, 0.3, 0.5, 0.7, 1.0)
TABLE1_LS = (1, 3, 5, 10, 15)


@dataclass
class RunSummary:
    constant: complex
    singular_values: list
    rank: int
    peaks: list
    contrast: float | None
    farfield: list
    born: dict
    source: str
    mode: str
    preset: str | None = None
    files: list = field(default_factory=list)
    timings: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        # timings are kept out so that summary.json is reproducible byte for byte
        return {
            "preset": self.preset,
            "constant": [self.constant.real, self.constant.imag],
            "singular_values": self.singular_values,
            "rank": self.rank,
            "peaks": self.peaks,
            "contrast": self.contrast,
            "farfield_condition": self.farfield,
            "born_validity": self.born,
            "source": self.source,
            "test_vector_mode": self.mode,
            "files": self.files,
        }


def import_matrix(path) -> ScatteringMatrix:
    """Load externally measured data; the diagonal is treated as measured."""
    K = read_matrix(path)
    return ScatteringMatrix(K.entries, "measured", None, "external")


def synthesize(config: RunConfig) -> ScatteringMatrix:
    scene = config.scene()
    if config.source == "external":
        K = import_matrix(config.external_path)
        if K.size != scene.array.count:
            raise ConfigError(f"matrix is {K.size}x{K.size} but the array has "
                              f"{scene.array.count} antennas")
        return K
    return assemble(scene, config.source, config.quadrature)


def image_data(config: RunConfig, K: ScatteringMatrix) -> RunSummary:
    """Everything in ``run`` after data synthesis; writes files if ``out_dir`` is set."""
    t0 = time.perf_counter()
    scene = config.scene()
    mode = config.test_vector_mode
    est = SubspaceMigration.from_scene(scene, constant=config.constant, rank=config.rank,
                                       mode=mode).fit(K)
    image = est.image(scene.grid)
    t_map = time.perf_counter() - t0

    count = config.peak_count or len(scene.objects) or est.rank_
    peaks = peak_extract(image, count, config.min_separation)
    centers = [o.center for o in scene.objects]
    contrast = None
    if centers:
        try:
            contrast = contrast_ratio(image, centers, config.min_separation)
        except ValueError:
            contrast = None
    summary = RunSummary(
        constant=complex(config.constant),
        singular_values=[float(s) for s in est.singular_values_],
        rank=int(est.rank_),
        peaks=[{"x": float(p[0]), "y": float(p[1]), "value": float(v)}
               for p, v in zip(peaks.points, peaks.values)],
        contrast=contrast,
        farfield=[farfield_condition(p, scene).to_dict() for p in peaks.points],
        born=validate_born(scene).to_dict(),
        source=K.source,
        mode=mode,
        preset=config.preset,
        timings={"imaging_s": t_map},
    )
    if config.out_dir:
        out = Path(config.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        output.write_map_csv(image, out / "map.csv")
        output.write_pgm(image.values, out / "map.pgm")
        write_csv(K, out / "matrix.csv")
        output.write_json({"singular_values": summary.singular_values}, out / "singular_values.json")
        summary.files = ["map.csv", "map.pgm", "matrix.csv", "singular_values.json",
                         "summary.json", "timings.json"]
        output.write_json(summary.to_dict(), out / "summary.json")
        output.write_json(summary.timings, out / "timings.json")
    return summary


def run_table1(out_dir=None, phi: float = 0.0, n_antennas: int = 16) -> dict:
    from .scene import uniform_array

    angles = uniform_array(n_antennas, 1.0).angles
    tab = table1(angles, TABLE1_XS, TABLE1_LS, phi)
    result = {"xs": list(TABLE1_XS), "Ls": list(TABLE1_LS), "phi": phi,
              "values": tab.tolist(), "max": float(tab.max())}
    if out_dir:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        output.write_table_csv(tab, TABLE1_XS, TABLE1_LS, out / "table1.csv")
        output.write_json(result, out / "summary.json")
    return result


def run(config: RunConfig):
    """Synthesize (or load) data, image it and write the run artefacts."""
    if config.preset == "table1":
        return run_table1(config.out_dir, n_antennas=config.n_antennas)
    t0 = time.perf_counter()
    K = synthesize(config)
    t_data = time.perf_counter() - t0
    summary = image_data(config, K)
    summary.timings["data_s"] = t_data
    if config.out_dir:
        output.write_json(summary.timings, Path(config.out_dir) / "timings.json")
    return summary


def sweep_constant(config: RunConfig, constants, parallel: bool = False) -> list:
    """One run per constant on a single shared data set.

    When ``config.out_dir`` is set, run ``i`` goes to ``out_dir/c{i:02d}`` and
    ``contrast.csv`` tabulates contrast against |C|.
    """
    constants = [complex(c) for c in constants]
    if not constants:
        raise ValueError("need at least one constant")
    K = synthesize(config)
    base = Path(config.out_dir) if config.out_dir else None

    def one(i_c):
        i, c = i_c
        sub = str(base / f"c{i:02d}") if base else None
        return image_data(config.replace(constant=c, out_dir=sub), K)

    jobs = list(enumerate(constants))
    if parallel:
        with ThreadPoolExecutor() as pool:
            summaries = list(pool.map(one, jobs))
    else:
        summaries = [one(j) for j in jobs]
    if base:
        lines = ["c_re,c_im,abs_c,rank,contrast"]
        for s in summaries:
            c = s.constant
            lines.append(",".join([format(c.real, ".17g"), format(c.imag, ".17g"),
                                   format(abs(c), ".17g"), str(s.rank),
                                   "" if s.contrast is None else format(s.contrast, ".17g")]))
        (base / "contrast.csv").write_text("\n".join(lines) + "\n")
    return summaries


def _parse_constant_list(text: str) -> list:
    try:
        return [complex(t.strip().replace("i", "j")) for t in text.split(",") if t.strip()]
    except ValueError:
        raise ConfigError(f"bad constant list {text!r}") from None


def _config_from_args(args) -> RunConfig:
    if args.config:
        config = load_config(args.config)
    elif args.preset:
        config = preset(args.preset)
    else:
        raise ConfigError("give --config or --preset")
    changes = {}
    if args.c_re is not None or args.c_im is not None:
        c = complex(config.constant)
        changes["constant"] = complex(c.real if args.c_re is None else args.c_re,
                                      c.imag if args.c_im is None else args.c_im)
    if args.rank is not None:
        changes["rank"] = parse_rank(args.rank)
    if args.source is not None:
        changes.update(parse_source(args.source))
    if args.mode is not None:
        changes["mode"] = args.mode
    if args.grid is not None:
        changes["grid"] = args.grid
    if args.trunc_l is not None:
        changes["truncation_l"] = args.trunc_l
    if args.subdivisions is not None:
        changes["subdivisions"] = args.subdivisions
    if args.out is not None:
        changes["out_dir"] = args.out
    return config.replace(**changes)


def _add_common(p):
    src = p.add_mutually_exclusive_group()
    src.add_argument("--config", help="key = value configuration file")
    src.add_argument("--preset", choices=["example1", "example2", "example3", "table1"])
    p.add_argument("--c-re", type=float)
    p.add_argument("--c-im", type=float)
    p.add_argument("--rank", help="auto | gap | absgap | INT")
    p.add_argument("--source", help="born | farfield | external:PATH")
    p.add_argument("--mode", choices=["auto", "exact", "farfield"])
    p.add_argument("--grid", type=int)
    p.add_argument("--trunc-l", type=int)
    p.add_argument("--subdivisions", type=int)
    p.add_argument("--out")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="submig", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="image one configuration")
    _add_common(p_run)
    p_sweep = sub.add_parser("sweep", help="image one data set for several constants C")
    _add_common(p_sweep)
    p_sweep.add_argument("--c-list", default=None,
                         help="comma-separated complex constants (default: 0,0.01,0.1,0.001j,0.01j,0.1j)")
    p_sweep.add_argument("--parallel", action="store_true")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        config = _config_from_args(args)
        if args.command == "run":
            result = run(config)
            if isinstance(result, RunSummary):
                for p in result.peaks:
                    print(f"peak ({p['x']:+.5f}, {p['y']:+.5f})  F = {p['value']:.6g}")
                print(f"rank M = {result.rank}; tau_1 = {result.singular_values[0]:.6g}")
            else:
                print(f"max |E(x, L)| = {result['max']:.3e}")
        else:
            constants = (_parse_constant_list(args.c_list) if args.c_list
                         else list(SWEEP_CONSTANTS))
            for s in sweep_constant(config, constants, parallel=args.parallel):
                contrast = "n/a" if s.contrast is None else f"{s.contrast:.4g}"
                print(f"C = {s.constant!s:>12}  M = {s.rank:2d}  contrast = {contrast}")
    except (ConfigError, MatrixFormatError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3
    except SubmigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
