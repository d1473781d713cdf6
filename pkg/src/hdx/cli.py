"""Command-line front end: generate, analyze, sweep, overlap.

Exit codes: 0 success, 2 usage or model-spec error, 3 generator abort after
retries, 4 exact certification required but above the size cap.
"""

from __future__ import annotations

import argparse
import csv
import math
import os
import sys
from pathlib import Path

import numpy as np

from .complexes import SimplicialComplex, read_complex, to_mfl_json
from .errors import (AbortedGreedy, DimensionError, DivisibilityError,
                     ExactnessUnavailable, HdxError)
from .f2 import DEFAULT_CAP
from .models import (DEFAULT_SEED, ModelSpec, SweepSpec, gen_steiner_W,
                     generate, threshold_sweep)
from .overlap import affine_overlap, uniform_placement
from .reports import (analyze_complex, expansion_csv_row, jsonable,
                      sweep_to_csv, sweep_to_json, to_json)

EXIT_OK = 0
EXIT_SPEC = 2
EXIT_ABORT = 3
EXIT_EXACTNESS = 4

_EPILOG = """\
exit codes:
  0  success
  2  usage error or invalid model specification
  3  generator aborted after retries
  4  --require-exact set but the instance exceeds the exhaustive cap

The default seed is %d; the HDX_SEED environment variable overrides it.
""" % DEFAULT_SEED


def _default_seed() -> int:
    return int(os.environ.get("HDX_SEED", DEFAULT_SEED))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hdx",
        description="Construct, randomise and certify high-dimensional expanders.",
        epilog=_EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a random complex (MFL-JSON)")
    g.add_argument("--model", required=True, choices=["er", "lm", "y", "w"])
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--d", type=int, default=1)
    g.add_argument("--p", type=float, help="cell probability (er, lm)")
    g.add_argument("--k", type=int, help="number of copies (y, w)")
    g.add_argument("--delta0", type=float, default=0.1,
                   help="greedy stopping exponent offset (w)")
    g.add_argument("--seed", type=int, default=None)
    g.add_argument("--out", "-o", required=True)
    g.set_defaults(func=cmd_gen)

    a = sub.add_parser("analyze", help="expansion + spectral report for a complex")
    a.add_argument("input", help="MFL-JSON complex file")
    a.add_argument("--out", "-o", help="report path (default: stdout)")
    a.add_argument("--format", choices=["json", "csv"], default="json")
    a.add_argument("--skip-f2", action="store_true")
    a.add_argument("--skip-spectral", action="store_true")
    a.add_argument("--skip-garland", action="store_true")
    a.add_argument("--cap", type=int, default=DEFAULT_CAP,
                   help="exhaustive-search cap on cells per dimension")
    a.add_argument("--require-exact", action="store_true",
                   help="fail (exit 4) instead of sampling above the cap")
    a.add_argument("--epsilon", type=float, default=0.0,
                   help="threshold for the spectral-expander verdict")
    a.add_argument("--seed", type=int, default=None)
    a.set_defaults(func=cmd_analyze)

    s = sub.add_parser("sweep", help="threshold sweep over a parameter grid")
    s.add_argument("--model", required=True, choices=["er", "lm", "y", "w"])
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--d", type=int, default=1)
    s.add_argument("--grid", help="comma-separated grid values")
    s.add_argument("--grid-start", type=float)
    s.add_argument("--grid-stop", type=float)
    s.add_argument("--grid-count", type=int, default=9)
    s.add_argument("--trials", type=int, default=20)
    s.add_argument("--predicate", choices=["connected", "homologically-connected"],
                   default=None, help="default: connected for er, "
                   "homologically-connected otherwise")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--format", choices=["csv", "json"], default="csv")
    s.add_argument("--out", "-o", required=True)
    s.add_argument("--svg", help="optional figure path (svg or png)")
    s.add_argument("--dump-complexes", metavar="DIR",
                   help="also write every generated complex there (MFL-JSON)")
    s.set_defaults(func=cmd_sweep)

    o = sub.add_parser("overlap", help="geometric overlap of a placed complex")
    o.add_argument("input", nargs="?", help="MFL-JSON complex file")
    o.add_argument("--placement", help="CSV of vertex,x,y[,z] rows")
    o.add_argument("--random-points", type=int, metavar="N",
                   help="uniform placement; without an input complex this "
                        "analyses the complete complex on N vertices")
    o.add_argument("--d", type=int, default=2,
                   help="dimension for --random-points without input")
    o.add_argument("--resolution", type=int, default=256)
    o.add_argument("--method", choices=["grid", "sampled"], default="grid")
    o.add_argument("--samples", type=int, default=4096)
    o.add_argument("--no-centroids", action="store_true")
    o.add_argument("--seed", type=int, default=None)
    o.add_argument("--out", "-o", help="JSON output (default: stdout)")
    o.set_defaults(func=cmd_overlap)
    return parser


def _resolve_seed(args) -> int:
    return args.seed if args.seed is not None else _default_seed()


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_gen(args) -> int:
    seed = _resolve_seed(args)
    try:
        spec = ModelSpec(model=args.model, n=args.n, d=args.d, p=args.p,
                         k=args.k, delta0=args.delta0, seed=seed)
    except (ValueError, DivisibilityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SPEC
    try:
        if spec.model == "w":
            X, uncovered = gen_steiner_W(spec)
            for i, u in enumerate(uncovered):
                print(f"copy {i}: uncovered (d-1)-cells = {u}")
        else:
            X = generate(spec)
    except DivisibilityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SPEC
    except AbortedGreedy as exc:
        print(f"error: generator aborted: {exc}", file=sys.stderr)
        return EXIT_ABORT
    Path(args.out).write_text(to_mfl_json(X))
    for i in range(X.dim + 1):
        print(f"dim {i}: {X.n_cells(i)} cells")
    print(f"wrote {args.out}")
    return EXIT_OK


def cmd_analyze(args) -> int:
    X = read_complex(args.input)
    try:
        report = analyze_complex(
            X, with_f2=not args.skip_f2,
            with_spectral=not args.skip_spectral,
            with_garland=not args.skip_garland,
            cap=args.cap, require_exact=args.require_exact,
            epsilon=args.epsilon, seed=_resolve_seed(args))
    except ExactnessUnavailable as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EXACTNESS
    if args.format == "json":
        _write(to_json(report), args.out)
    else:
        header, row = expansion_csv_row(report)
        _write(",".join(header) + "\n" + ",".join(map(str, row)) + "\n",
               args.out)
    if args.out:
        print(f"wrote {args.out}")
    return EXIT_OK


def _parse_grid(args) -> list[float]:
    if args.grid:
        return [float(v) for v in args.grid.split(",") if v.strip()]
    if args.grid_start is None or args.grid_stop is None:
        raise ValueError("provide --grid or --grid-start/--grid-stop")
    step = ((args.grid_stop - args.grid_start) / max(1, args.grid_count - 1))
    return [args.grid_start + i * step for i in range(args.grid_count)]


def cmd_sweep(args) -> int:
    seed = _resolve_seed(args)
    try:
        grid = _parse_grid(args)
        is_prob = args.model in ("er", "lm")
        template = ModelSpec(
            model=args.model, n=args.n, d=args.d,
            p=grid[0] if is_prob else None,
            k=int(grid[0]) if not is_prob else None, seed=seed)
        predicate = args.predicate or (
            "connected" if args.model == "er" else "homologically-connected")
        spec = SweepSpec(template=template, grid=grid, trials=args.trials,
                         predicate=predicate)
    except (ValueError, DivisibilityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SPEC
    if args.dump_complexes:
        Path(args.dump_complexes).mkdir(parents=True, exist_ok=True)
    result = threshold_sweep(spec, workers=args.workers,
                             log=lambda m: print(m, file=sys.stderr),
                             dump_dir=args.dump_complexes)
    text = sweep_to_csv(result) if args.format == "csv" else sweep_to_json(result)
    Path(args.out).write_text(text)
    print(f"wrote {args.out}")
    if args.svg:
        from .plotting import render_sweep_figure
        threshold = args.d * math.log(args.n) / args.n if is_prob else None
        render_sweep_figure(result, args.svg, threshold=threshold,
                            title=f"{args.model} n={args.n} d={args.d}")
        print(f"wrote {args.svg}")
    return EXIT_OK


def _read_placement(path: str, n: int) -> np.ndarray:
    rows = {}
    with open(path, newline="") as fh:
        for rec in csv.reader(fh):
            if not rec or rec[0].strip().startswith("#"):
                continue
            rows[int(rec[0])] = [float(v) for v in rec[1:]]
    dims = {len(v) for v in rows.values()}
    if len(dims) != 1:
        raise DimensionError("placement rows have mixed dimensions")
    d = dims.pop()
    out = np.zeros((n, d))
    for v in range(n):
        if v not in rows:
            raise DimensionError(f"placement is missing vertex {v}")
        out[v] = rows[v]
    return out


def cmd_overlap(args) -> int:
    seed = _resolve_seed(args)
    try:
        if args.input:
            X = read_complex(args.input)
            if args.placement:
                pts = _read_placement(args.placement, X.n_vertices)
            else:
                pts = uniform_placement(X.n_vertices, X.dim, seed)
        else:
            if args.random_points is None:
                print("error: need an input complex or --random-points",
                      file=sys.stderr)
                return EXIT_SPEC
            X = SimplicialComplex.complete(args.random_points, args.d)
            pts = uniform_placement(X.n_vertices, X.dim, seed)
        est = affine_overlap(
            X, pts, resolution=args.resolution, method=args.method,
            samples=args.samples, include_centroids=not args.no_centroids,
            seed=seed)
    except (DimensionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SPEC
    _write(to_json({"overlap": jsonable(est)}), args.out)
    if args.out:
        print(f"wrote {args.out}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except HdxError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SPEC
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SPEC


if __name__ == "__main__":
    sys.exit(main())
