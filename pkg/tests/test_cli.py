import subprocess
import sys

import numpy as np
import pytest

import fastcdf as fc
from fastcdf.cli import main


def run(*argv):
    return main([str(a) for a in argv])


@pytest.fixture()
def sample_csv(tmp_path, jit_warm):
    path = tmp_path / "s.csv"
    assert run("gen", "--n", 400, "--dim", 2, "--seed", 1, "--out", path) == 0
    return path


def test_gen_is_byte_identical(tmp_path):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    run("gen", "--n", 50, "--dim", 3, "--seed", 9, "--out", a)
    run("gen", "--n", 50, "--dim", 3, "--seed", 9, "--out", b)
    assert a.read_bytes() == b.read_bytes()


def test_ecdf_fastsum_vs_naive_exact(tmp_path, sample_csv):
    fast = tmp_path / "fast.csv"
    ref = tmp_path / "naive.csv"
    assert run("ecdf", "--method", "fastsum", "--input", sample_csv,
               "--grid", "16,16", "--out", fast) == 0
    assert run("ecdf", "--method", "naive", "--input", sample_csv,
               "--grid", "16,16", "--out", ref) == 0
    assert run("compare", "--a", fast, "--b", ref, "--exact") == 0


def test_ecdf_rerun_byte_identical(tmp_path, sample_csv):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    for out in (a, b):
        run("ecdf", "--method", "fastsum", "--input", sample_csv,
            "--grid", "8,8", "--out", out)
    assert a.read_bytes() == b.read_bytes()


def test_kde_dnc_vs_naive_tolerance(tmp_path, sample_csv):
    a = tmp_path / "dnc.csv"
    b = tmp_path / "naive.csv"
    assert run("kde", "--kernel", "laplacian", "--bandwidth", "0.1,0.1",
               "--method", "dnc", "--input", sample_csv, "--at-points",
               "--out", a) == 0
    assert run("kde", "--kernel", "laplacian", "--bandwidth", "0.1",
               "--method", "naive", "--input", sample_csv, "--at-points",
               "--out", b) == 0
    assert run("compare", "--a", a, "--b", b, "--tol", "1e-13") == 0


def test_compare_breach_exits_one(tmp_path):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    fc.write_result_csv(np.array([[0.0]]), np.array([1.0]), a)
    fc.write_result_csv(np.array([[0.0]]), np.array([1.5]), b)
    assert run("compare", "--a", a, "--b", b, "--tol", "0.1") == 1
    assert run("compare", "--a", a, "--b", b, "--tol", "1.0") == 0


def test_dnc_with_grid_is_usage_error(tmp_path, sample_csv):
    with pytest.raises(SystemExit) as exc:
        run("ecdf", "--method", "dnc", "--input", sample_csv,
            "--grid", "10,10", "--out", tmp_path / "x.csv")
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        run("kde", "--method", "dnc", "--input", sample_csv,
            "--grid", "10,10", "--out", tmp_path / "x.csv")
    assert exc.value.code == 2


def test_unknown_flag_is_usage_error(tmp_path):
    with pytest.raises(SystemExit) as exc:
        run("gen", "--n", 5, "--dim", 1, "--frobnicate", "--out",
            tmp_path / "x.csv")
    assert exc.value.code == 2


def test_missing_input_is_runtime_error(tmp_path):
    assert run("ecdf", "--method", "naive", "--input",
               tmp_path / "absent.csv", "--out", tmp_path / "x.csv") == 3


def test_kde_interp_outputs_at_points(tmp_path, sample_csv):
    out = tmp_path / "ki.csv"
    assert run("kde", "--method", "fastsum", "--input", sample_csv,
               "--grid", "24,24", "--interp", "--out", out) == 0
    coords, vals = fc.read_result_csv(out)
    sample = fc.read_sample_csv(sample_csv)
    np.testing.assert_allclose(coords, sample.points)
    assert vals.shape == (sample.count,)


def test_ecdf_delta_flag(tmp_path, sample_csv):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    assert run("ecdf", "--method", "naive", "--input", sample_csv,
               "--at-points", "--delta=-1,-1", "--out", a) == 0
    assert run("ecdf", "--method", "dnc", "--input", sample_csv,
               "--at-points", "--out", b) == 0
    assert run("compare", "--a", a, "--b", b, "--exact") == 0


def test_bench_schema_and_figure(tmp_path, jit_warm):
    out = tmp_path / "bench.csv"
    assert run("bench", "--task", "ecdf", "--methods", "fastsum,dnc",
               "--dims", "2", "--sizes", "200,400", "--repeats", 2,
               "--out", out) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "task,method,dim,n,repeat,seconds"
    assert len(lines) == 1 + 2 * 2 * 2
    fields = lines[1].split(",")
    assert fields[0] == "ecdf" and fields[1] in ("fastsum", "dnc")
    assert (tmp_path / "bench.svg").exists()


def test_plot_writes_svg(tmp_path, jit_warm):
    bench = tmp_path / "b.csv"
    run("bench", "--task", "ecdf", "--methods", "fastsum", "--dims", "2",
        "--sizes", "200,400", "--repeats", 1, "--out", bench)
    fig = tmp_path / "fig.svg"
    assert run("plot", "--input", bench, "--x", "n", "--y", "seconds",
               "--group-by", "method", "--out", fig) == 0
    assert fig.read_bytes().lstrip().startswith(b"<?xml")


def test_console_script_entry_point(tmp_path):
    out = tmp_path / "s.csv"
    proc = subprocess.run(
        [sys.executable, "-m", "fastcdf.cli", "gen", "--n", "10",
         "--dim", "1", "--seed", "3", "--out", str(out)],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert out.exists()
