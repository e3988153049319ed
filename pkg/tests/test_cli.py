import json

import numpy as np
import pytest

from submig.cli import import_matrix, main, run, sweep_constant
from submig.config import preset
from submig.output import pgm_from_csv, read_map_csv, render_pgm
from submig.smatrix import read_csv, write_csv

COARSE = dict(grid=48)


def _run_dir(tmp_path, name, **changes):
    out = tmp_path / name
    run(preset("example1").replace(out_dir=str(out), **COARSE, **changes))
    return out


def test_run_writes_all_files(tmp_path):
    out = _run_dir(tmp_path, "a")
    summary = json.loads((out / "summary.json").read_text())
    for f in summary["files"]:
        assert (out / f).exists()
    sv = json.loads((out / "singular_values.json").read_text())["singular_values"]
    assert sv == summary["singular_values"]
    assert summary["rank"] == 1 and summary["born_validity"]["objects"][0]["ok"]
    assert (out / "map.csv").read_text().splitlines()[0] == "x,y,value"


def test_run_byte_identical(tmp_path):
    a, b = _run_dir(tmp_path, "a"), _run_dir(tmp_path, "b")
    for f in ("map.csv", "map.pgm", "matrix.csv", "singular_values.json", "summary.json"):
        assert (a / f).read_bytes() == (b / f).read_bytes(), f


def test_pgm_is_function_of_csv(tmp_path):
    out = _run_dir(tmp_path, "a")
    pgm_from_csv(out / "map.csv", tmp_path / "again.pgm")
    assert (tmp_path / "again.pgm").read_bytes() == (out / "map.pgm").read_bytes()


def test_pgm_layout():
    v = np.array([[0.0, 1.0], [2.0, 3.0]])
    data = render_pgm(v)
    header = b"P5\n2 2\n65535\n"
    assert data.startswith(header)
    pix = np.frombuffer(data[len(header):], dtype=">u2").reshape(2, 2)
    # top row of the image is the largest y
    assert pix[0].tolist() == [43690, 65535] and pix[1].tolist() == [0, 21845]


def test_map_csv_round_trip(tmp_path):
    out = _run_dir(tmp_path, "a")
    v = read_map_csv(out / "map.csv")
    assert v.shape == (48, 48) and np.all(v >= 0)


def test_table1_preset(tmp_path):
    out = tmp_path / "t"
    result = run(preset("table1").replace(out_dir=str(out)))
    assert result["max"] <= 1e-12
    lines = (out / "table1.csv").read_text().splitlines()
    assert lines[0] == "x,L=1,L=3,L=5,L=10,L=15" and len(lines) == 6


def test_sweep_shares_data(tmp_path):
    cfg = preset("example1").replace(out_dir=str(tmp_path / "s"), **COARSE)
    summaries = sweep_constant(cfg, [0, 0.1])
    k0 = read_csv(tmp_path / "s" / "c00" / "matrix.csv")
    k1 = read_csv(tmp_path / "s" / "c01" / "matrix.csv")
    assert np.array_equal(k0.entries, k1.entries)
    assert summaries[0].contrast > summaries[1].contrast
    rows = (tmp_path / "s" / "contrast.csv").read_text().splitlines()
    assert rows[0] == "c_re,c_im,abs_c,rank,contrast" and len(rows) == 3


def test_single_sweep_matches_run(tmp_path):
    single = sweep_constant(preset("example1").replace(**COARSE), [0])[0]
    direct = run(preset("example1").replace(**COARSE))
    assert single.to_dict() == direct.to_dict()


def test_parallel_sweep_matches_sequential():
    cfg = preset("example1").replace(**COARSE)
    seq = [s.to_dict() for s in sweep_constant(cfg, [0, 0.01j, 0.1])]
    par = [s.to_dict() for s in sweep_constant(cfg, [0, 0.01j, 0.1], parallel=True)]
    assert seq == par


def test_sweep_needs_constants():
    with pytest.raises(ValueError):
        sweep_constant(preset("example1"), [])


def test_external_matrix_round_trip(tmp_path):
    out = _run_dir(tmp_path, "a")
    ext = tmp_path / "b"
    code = main(["run", "--preset", "example1", "--grid", "48",
                 "--source", f"external:{out / 'matrix.csv'}", "--out", str(ext)])
    assert code == 0
    assert (ext / "map.csv").read_bytes() == (out / "map.csv").read_bytes()
    assert import_matrix(out / "matrix.csv").source == "external"


def test_main_exit_codes(tmp_path, capsys):
    assert main(["run", "--preset", "example1", "--grid", "32", "--out", str(tmp_path / "o")]) == 0
    assert "peak" in capsys.readouterr().out
    assert main(["run"]) == 2
    bad = tmp_path / "bad.cfg"
    bad.write_text("grid = lots\n")
    assert main(["run", "--config", str(bad)]) == 2
    missing = tmp_path / "missing.csv"
    assert main(["run", "--preset", "example1", "--source", f"external:{missing}"]) == 2
    empty = tmp_path / "zero.csv"
    write_csv(np.zeros((16, 16)), empty)
    assert main(["run", "--preset", "example1", "--grid", "16", "--source", f"external:{empty}"]) == 3


def test_main_wrong_size_matrix(tmp_path):
    small = tmp_path / "k.csv"
    write_csv(np.eye(4), small)
    assert main(["run", "--preset", "example1", "--source", f"external:{small}"]) == 2


def test_main_sweep(tmp_path, capsys):
    code = main(["sweep", "--preset", "example1", "--grid", "32", "--c-list", "0,0.1i",
                 "--out", str(tmp_path / "s")])
    assert code == 0
    assert capsys.readouterr().out.count("C =") == 2
    assert main(["sweep", "--preset", "example1", "--c-list", "zero"]) == 2
