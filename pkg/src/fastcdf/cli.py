"""Command-line front end: data generation, method dispatch, comparison,
benchmark ladders and plotting.

Exit codes: 0 success, 1 comparison breach, 2 usage error, 3 runtime error.
All CSV outputs are byte-identical for fixed seeds and flags; figures are
rendered with matplotlib next to the delimited output.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from . import core, dnc, fastsum, interp, kernels, naive

_USAGE_EXIT = 2
_RUNTIME_EXIT = 3


def _parse_int_list(text: str) -> list[int]:
    return [int(v) for v in text.split(",") if v.strip()]


def _parse_float_list(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def _parse_delta(text: str, dim: int) -> core.DeltaVector:
    vals = [int(v) for v in text.replace("+", "").split(",") if v.strip()]
    if len(vals) == 1:
        vals = vals * dim
    return core.DeltaVector(tuple(vals))


def _bandwidth(text: str, dim: int) -> core.Bandwidth:
    vals = _parse_float_list(text)
    if len(vals) == 1:
        vals = vals * dim
    if len(vals) != dim:
        raise core.ParameterError(
            f"bandwidth needs 1 or {dim} entries, got {len(vals)}"
        )
    return core.Bandwidth.diag(vals)


def _grid_for(sample: core.Sample, spec: str | None,
              n_target: int | None = None) -> core.RectilinearGrid:
    if spec is not None:
        counts = _parse_int_list(spec)
        if len(counts) == 1:
            counts = counts * sample.dim
    else:
        # default evaluation budget: M approximately equal to N
        n_target = n_target or sample.count
        per_dim = max(2, round(n_target ** (1.0 / sample.dim)))
        counts = [per_dim] * sample.dim
    return core.build_grid_auto(sample, counts)


def _cmd_gen(args) -> int:
    sample = core.generate_gaussian_sample(args.n, args.dim, args.seed)
    core.write_sample_csv(sample, args.out)
    print(f"wrote {args.n} x {args.dim} gaussian sample (seed {args.seed}) "
          f"to {args.out}")
    return 0


def _cmd_ecdf(args, parser) -> int:
    sample = core.read_sample_csv(args.input)
    if args.method == "dnc":
        if args.grid is not None:
            parser.error("--method dnc evaluates at the sample points only; "
                         "drop --grid and pass --at-points")
        delta = _parse_delta(args.delta, sample.dim) if args.delta else None
        if delta is not None and any(s != -1 for s in delta.signs):
            parser.error("--method dnc computes the strict-dominance ECDF "
                         "(delta all -1); other deltas are not supported")
        res = dnc.ecdf_dnc(sample)
        coords = sample.points
    else:
        delta = (_parse_delta(args.delta, sample.dim) if args.delta
                 else core.DeltaVector.ones(sample.dim))
        if args.method == "fastsum":
            if args.at_points:
                parser.error("--method fastsum evaluates on a grid; use "
                             "--grid (optionally with --interp under kde)")
            grid = _grid_for(sample, args.grid)
            res = fastsum.ecdf_fastsum(sample, grid, delta)
            coords = grid.lattice()
        else:  # naive
            if args.at_points:
                coords = sample.points
            else:
                grid = _grid_for(sample, args.grid)
                coords = grid.lattice()
            res = naive.ecdf_naive(sample, coords, delta)
    fastsum.write_result_csv(coords, res.values, args.out)
    print(f"ecdf/{args.method}: {res.values.size} values in "
          f"{res.metadata['runtime_seconds']:.4f}s -> {args.out}")
    return 0


def _cmd_kde(args, parser) -> int:
    sample = core.read_sample_csv(args.input)
    kernel = kernels.parse_kernel_spec(args.kernel)
    bandwidth = _bandwidth(args.bandwidth, sample.dim)
    if args.method == "dnc":
        if args.grid is not None:
            parser.error("--method dnc evaluates at the sample points only; "
                         "drop --grid and pass --at-points")
        res = dnc.kde_dnc(sample, kernel, bandwidth)
        coords = sample.points
    elif args.method == "fastsum":
        if args.at_points and not args.interp:
            parser.error("--method fastsum evaluates on a grid; add --interp "
                         "to carry the values to the sample points")
        grid = _grid_for(sample, args.grid)
        res = fastsum.kde_fastsum(sample, grid, kernel, bandwidth)
        coords = grid.lattice()
        if args.interp:
            res = interp.multilinear_interp(grid, res, sample.points)
            coords = sample.points
    else:  # naive
        coords = sample.points if args.at_points else \
            _grid_for(sample, args.grid).lattice()
        res = naive.kde_naive(sample, coords, kernel, bandwidth)
    fastsum.write_result_csv(coords, res.values, args.out)
    print(f"kde/{args.method} [{kernel}]: {res.values.size} values in "
          f"{res.metadata['runtime_seconds']:.4f}s -> {args.out}")
    return 0


def _cmd_compare(args) -> int:
    _, va = fastsum.read_result_csv(args.a)
    _, vb = fastsum.read_result_csv(args.b)
    if va.shape != vb.shape:
        raise core.ShapeError(
            f"result sizes differ: {va.shape} vs {vb.shape}"
        )
    gap = float(np.max(np.abs(va - vb))) if va.size else 0.0
    tol = 0.0 if args.exact or args.tol is None else args.tol
    print(f"max abs gap: {gap:.6e} (tolerance {tol:g})")
    return 0 if gap <= tol else 1


def _bench_call(task, method, sample, grid, kernel, bandwidth):
    if task == "ecdf":
        if method == "naive":
            return naive.ecdf_naive(sample, grid.lattice())
        if method == "fastsum":
            return fastsum.ecdf_fastsum(sample, grid)
        return dnc.ecdf_dnc(sample)
    if method == "naive":
        return naive.kde_naive(sample, grid.lattice(), kernel, bandwidth)
    if method == "fastsum":
        return fastsum.kde_fastsum(sample, grid, kernel, bandwidth)
    return dnc.kde_dnc(sample, kernel, bandwidth)


def _cmd_bench(args) -> int:
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    dims = _parse_int_list(args.dims)
    sizes = _parse_int_list(args.sizes)
    kernel = kernels.parse_kernel_spec(args.kernel)
    rows = []
    for d in dims:
        # warm any jitted paths on a small instance before timing
        warm = core.generate_gaussian_sample(max(64, 2 ** d), d, args.seed)
        warm_grid = _grid_for(warm, None)
        bw = _bandwidth(args.bandwidth, d)
        for m in methods:
            _bench_call(args.task, m, warm, warm_grid, kernel, bw)
        for n in sizes:
            sample = core.generate_gaussian_sample(n, d, args.seed)
            grid = _grid_for(sample, None, n)
            for m in methods:
                for rep in range(args.repeats):
                    t0 = time.perf_counter()
                    _bench_call(args.task, m, sample, grid, kernel, bw)
                    dt = time.perf_counter() - t0
                    rows.append((args.task, m, d, n, rep, dt))
                med = float(np.median([r[5] for r in rows
                                       if r[1] == m and r[2] == d and r[3] == n]))
                print(f"{args.task} {m} d={d} n={n}: median {med:.4f}s")
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write("task,method,dim,n,repeat,seconds\n")
        for task, m, d, n, rep, dt in rows:
            fh.write(f"{task},{m},{d},{n},{rep},{dt:.17g}\n")
    fig_path = Path(args.out).with_suffix(".svg")
    _render_bench_figure(rows, fig_path)
    print(f"wrote {len(rows)} timings to {args.out} and figure to {fig_path}")
    return 0


def _render_bench_figure(rows, path) -> None:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    series = {}
    for task, m, d, n, _rep, dt in rows:
        series.setdefault((m, d), {}).setdefault(n, []).append(dt)
    for (m, d), by_n in sorted(series.items()):
        ns = sorted(by_n)
        med = [float(np.median(by_n[n])) for n in ns]
        ax.plot(ns, med, marker="o", label=f"{m} d={d}")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("n")
    ax.set_ylabel("seconds (median)")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def _cmd_plot(args) -> int:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    with open(args.input, "r", encoding="utf-8") as fh:
        names = [c.strip() for c in fh.readline().split(",")]
        body = [line.strip().split(",") for line in fh if line.strip()]
    if args.x not in names or args.y not in names:
        raise core.ParameterError(
            f"columns {args.x!r}/{args.y!r} not in {names}"
        )
    xi, yi = names.index(args.x), names.index(args.y)
    gi = names.index(args.group_by) if args.group_by else None
    series = {}
    for row in body:
        key = row[gi] if gi is not None else ""
        series.setdefault(key, {}).setdefault(float(row[xi]), []).append(
            float(row[yi]))
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for key in sorted(series):
        xs = sorted(series[key])
        ys = [float(np.median(series[key][x])) for x in xs]
        ax.plot(xs, ys, marker="o", label=key or args.y)
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel(args.x)
    ax.set_ylabel(args.y)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(args.out)
    plt.close(fig)
    print(f"wrote figure to {args.out}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fastcdf",
        description="Fast exact multivariate ECDF/ESF and KDE",
    )
    parser.add_argument("--threads", type=int, default=1,
                        help="internal parallelism (default 1 for "
                             "reproducible timing; current algorithms are "
                             "single-threaded)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a seeded gaussian sample CSV")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("ecdf", help="empirical CDF at a grid or the points")
    p.add_argument("--method", choices=("naive", "fastsum", "dnc"),
                   required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--grid", help="knot counts M1,...,Md (default ~N^(1/d))")
    p.add_argument("--at-points", action="store_true",
                   help="evaluate at the sample points")
    p.add_argument("--delta", help="per-dimension signs; use the = form for "
                                   "leading minus, e.g. --delta=-1,+1")
    p.add_argument("--out", required=True)

    p = sub.add_parser("kde", help="kernel density estimate")
    p.add_argument("--kernel", default="laplacian",
                   help="kernel spec, e.g. laplacian, uniform, matern:2, "
                        "matern32-additive, polyexp:a=1;b=1,1")
    p.add_argument("--bandwidth", default="0.1",
                   help="h or h1,...,hd (default 0.1 per dimension)")
    p.add_argument("--method", choices=("naive", "fastsum", "dnc"),
                   required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--grid", help="knot counts M1,...,Md (default ~N^(1/d))")
    p.add_argument("--at-points", action="store_true")
    p.add_argument("--interp", action="store_true",
                   help="after fastsum on the grid, interpolate to the "
                        "sample points")
    p.add_argument("--out", required=True)

    p = sub.add_parser("compare", help="max-abs gap between two result CSVs")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--exact", action="store_true")
    g.add_argument("--tol", type=float)

    p = sub.add_parser("bench", help="timing ladder, CSV + figure")
    p.add_argument("--task", choices=("ecdf", "kde"), required=True)
    p.add_argument("--methods", required=True,
                   help="comma list of naive,fastsum,dnc")
    p.add_argument("--dims", required=True, help="comma list of dimensions")
    p.add_argument("--sizes", required=True, help="comma list of N values")
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--kernel", default="laplacian")
    p.add_argument("--bandwidth", default="0.1")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("plot", help="log-log line plot of a CSV column pair")
    p.add_argument("--input", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--group-by", dest="group_by")
    p.add_argument("--out", required=True)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "gen":
            return _cmd_gen(args)
        if args.command == "ecdf":
            return _cmd_ecdf(args, parser)
        if args.command == "kde":
            return _cmd_kde(args, parser)
        if args.command == "compare":
            return _cmd_compare(args)
        if args.command == "bench":
            return _cmd_bench(args)
        if args.command == "plot":
            return _cmd_plot(args)
        parser.error(f"unknown command {args.command!r}")
    except (core.ParameterError, core.ValidationError, core.TieError,
            core.OverflowGuardError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _RUNTIME_EXIT
    return 0


if __name__ == "__main__":
    sys.exit(main())
