"""Command-line entry point: ``heckesum <subcommand> ...``.

Relative output paths are resolved against $HECKESUM_OUT_DIR when set.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .analysis import estimate_Z, fit_exponent, read_series_csv, write_rows_csv, write_series_csv
from .coeffs import load_or_build, normalize, save_tau_cache
from .errors import HeckesumError, InsufficientData
from .plotting import plot_components, plot_series
from .sieve import build_sieve
from .twisted import build_series, diagnostic_sums
from .verify import RunConfig, output_dir, run_verify
from .vaughan import VaughanParams, bilinear_scale, component_rows, component_sums


def _resolve(path) -> Path:
    p = Path(path)
    return p if p.is_absolute() else output_dir() / p


def _tables(n: int, cache, workers: int = 1):
    tau = load_or_build(n, _resolve(cache) if cache else None, workers=workers)
    return normalize(tau), build_sieve(n)


def cmd_tau(args) -> int:
    cache = _resolve(args.cache) if args.cache else None
    tau = load_or_build(args.n_max, cache, allow_large=args.allow_large, workers=args.workers)
    if cache is not None and not cache.exists():
        save_tau_cache(tau, cache)
    show = min(tau.n_max, 10)
    print("n,tau")
    for n in range(1, show + 1):
        print(f"{n},{tau.values[n]}")
    print(f"# n_max={tau.n_max} tau(n_max)={tau.values[tau.n_max]}" + (f" cache={cache}" if cache else ""))
    return 0


def cmd_sum(args) -> int:
    lam, sv = _tables(args.n_max, args.cache, args.workers)
    series = build_series(args.alpha, args.n_min, args.n_max, args.ratio, lam, sv, workers=args.workers)
    out = _resolve(args.out)
    write_series_csv(series, out)
    if not args.no_plot:
        try:
            fit = fit_exponent(series, "max")
        except InsufficientData:
            fit = None
        plot_series(series, out.with_suffix(".svg"), fit)
    print(f"wrote {out} ({len(series)} points); S({series.grid[-1]}) = {series.values[-1]!r}")
    return 0


def cmd_vaughan(args) -> int:
    N = args.block_n
    lam, sv = _tables(2 * N, args.cache)
    params = VaughanParams.for_block(N)
    sums = component_sums(params, args.alpha, lam, sv)
    rows = component_rows(params, args.alpha, sums)
    if args.out:
        out = _resolve(args.out)
        write_rows_csv(rows, out)
        plot_components(rows, out.with_suffix(".svg"))
    print("N,alpha,i,re,im,abs,abs/N^(5/6)")
    for r in rows:
        print(f"{r['N']},{r['alpha']!r},{r['i']},{r['re']!r},{r['im']!r},{r['abs']!r},{r['abs_over_N56']!r}")
    scale = bilinear_scale(N)
    bilinear = sum(abs(s) for s in sums[2:])
    print(f"# (|S3|+|S4|+|S5|) / (N^(5/6) (log 3N)^20) = {bilinear / scale:.6g}")
    print(f"# |sum S_i| = {abs(sum(sums)):.10g} <= sum |S_i| = {sum(abs(s) for s in sums):.10g}")
    return 0


def cmd_fit(args) -> int:
    series = read_series_csv(_resolve(args.inp))
    fit = fit_exponent(series, args.mode)
    print(f"exponent={fit.exponent!r}")
    print(f"log_constant={fit.log_constant!r}")
    print(f"residual_rms={fit.residual_rms!r}")
    print(f"window={fit.window[0]}..{fit.window[1]} points={fit.points} mode={fit.envelope_mode}")
    print(f"bracket={fit.bracket()}")
    z = estimate_Z(series)
    print(f"Z_hat={z.Z_hat!r} spread={z.spread!r}")
    return 0


def cmd_verify(args) -> int:
    cfg = RunConfig(
        alpha=args.alpha,
        n_max=args.n_max,
        ratio=args.ratio,
        seed=args.seed,
        out_dir=Path(args.out_dir) if args.out_dir else None,
        cache=_resolve(args.cache) if args.cache else None,
    )
    status, lines = run_verify(cfg)
    print("\n".join(lines))
    return status


def cmd_diag(args) -> int:
    lam, sv = _tables(args.n, args.cache)
    d = diagnostic_sums(args.n, args.alpha, lam, sv)
    for k, v in d.as_dict().items():
        print(f"{k}={v!r}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="heckesum", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tau", help="build (and cache) tau(n)")
    p.add_argument("--n-max", type=int, default=10**6)
    p.add_argument("--cache")
    p.add_argument("--allow-large", action="store_true", help="permit n_max up to 10^7")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_tau)

    p = sub.add_parser("sum", help="S(N) on a geometric grid, written as CSV + SVG")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--n-min", type=int, default=1000)
    p.add_argument("--n-max", type=int, default=10**6)
    p.add_argument("--ratio", type=float, default=1.25)
    p.add_argument("--out", default="series.csv")
    p.add_argument("--cache")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--no-plot", action="store_true")
    p.set_defaults(func=cmd_sum)

    p = sub.add_parser("vaughan", help="the five component sums on (N, 2N]")
    p.add_argument("--block-n", type=int, required=True)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--out")
    p.add_argument("--cache")
    p.set_defaults(func=cmd_vaughan)

    p = sub.add_parser("fit", help="growth exponent and Z estimate from a series CSV")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--mode", choices=["point", "max"], default="max")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("verify", help="run every invariant suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n-max", type=int, default=10**5)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--ratio", type=float, default=1.25)
    p.add_argument("--cache")
    p.add_argument("--out-dir")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("diag", help="comparison sums at a single N")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--cache")
    p.set_defaults(func=cmd_diag)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (HeckesumError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
