"""
Command-line entry point: one subcommand per analysis plus ``report``.

Every data file embeds the resolved configuration, so rerunning with the
echoed values reproduces it byte for byte.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from . import estimators as est
from . import io
from . import spectral as spec
from .chaos import DEFAULT_MODULUS, KYParams, iterate_ky, ky_spectrum
from .errors import PrimeCorrError
from .pipelines import (
    POISSON_TOLERANCE,
    STUDY_WINDOWS,
    SyntheticSpec,
    correlation_length,
    gap_oscillation_spectrum,
    gap_scale,
    poisson_report,
    signal_spectrum,
    window_data,
)
from .sieve import Window, gaps_of, sieve_range
from .telegraph import STATIONARITY_THRESHOLD, check_stationarity

OUT_ENV = "PRIMECORR_OUT"


def _config(args) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k not in ("func", "out")}
    cfg["version"] = __version__
    return cfg


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _emit_table(args, name: str, columns: dict, cfg: dict) -> Path:
    out = _outdir(args)
    if args.format == "json":
        return io.write_json(out / f"{name}.json", {"config": cfg, "columns": columns})
    return io.write_csv(out / f"{name}.csv", columns, cfg)


def _emit_fit(args, name: str, fit: est.ExpFit, cfg: dict, **extra) -> Path:
    payload = {"config": cfg, "fit": fit.to_dict(), **extra}
    return io.write_json(_outdir(args) / f"{name}.json", payload)


def _plot(args, name: str, x, y, xlabel: str, ylabel: str, fit=None, logy=True):
    if args.plot != "svg":
        return None
    import matplotlib

    matplotlib.use("Agg")
    matplotlib.rcParams["svg.hashsalt"] = "primecorr"  # stable element ids
    import matplotlib.pyplot as plt
    import numpy as np

    fig, ax = plt.subplots(figsize=(5, 3.5))
    x, y = np.asarray(x, float), np.asarray(y, float)
    if logy:
        keep = y > 0
        ax.semilogy(x[keep], y[keep], "o", ms=3)
    else:
        ax.plot(x, y, "o-", ms=3)
    if fit is not None:
        xs = np.linspace(fit.fit_lo, fit.fit_hi, 50)
        ax.semilogy(xs, np.exp(fit.predict_log(xs)), "-", lw=1)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    fig.tight_layout()
    path = _outdir(args) / f"{name}.svg"
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path


def _summary(**kw):
    print(json.dumps(kw, sort_keys=True))


def _window(args) -> Window:
    w = Window(args.center, args.width)
    check_stationarity(w, args.stationarity_threshold)
    return w


def cmd_acf(args) -> int:
    cfg = _config(args)
    data = window_data(_window(args))
    curve, fit = correlation_length(data.signal, args.max_lag, args.fit_threshold)
    _emit_table(args, "acf", {"lag": curve.lags.tolist(), "acf": curve.values.tolist()}, cfg)
    _emit_fit(args, "acf_fit", fit, cfg)
    _plot(args, "acf", curve.lags, curve.values, "lag l", "C(l)", fit)
    _summary(command="acf", zeta=fit.decay_scale, r_squared=fit.r_squared)
    return 0


def cmd_gaps(args) -> int:
    cfg = _config(args)
    data = window_data(_window(args))
    hist, fit = gap_scale(data.gaps, args.bin_width, args.min_count)
    _emit_table(
        args,
        "gaps",
        {"tau": hist.bin_centers.tolist(), "count": hist.counts.tolist(), "density": hist.density.tolist()},
        cfg,
    )
    io.write_gaps_csv(_outdir(args) / "gap_series.csv", data.gaps.gaps, cfg)
    _emit_fit(args, "gaps_fit", fit, cfg)
    _plot(args, "gaps", hist.bin_centers, hist.density, "tau", "P(tau)", fit)
    _summary(command="gaps", theta=fit.decay_scale, r_squared=fit.r_squared)
    return 0


def cmd_gap_spectrum(args) -> int:
    cfg = _config(args)
    data = window_data(_window(args))
    res = gap_oscillation_spectrum(data.gaps, args.bin_width, args.min_count)
    _emit_table(
        args,
        "gap_residuals",
        {"tau": res.residuals.abscissa.tolist(), "residual": res.residuals.residuals.tolist()},
        cfg,
    )
    _emit_table(
        args,
        "gap_spectrum",
        {"frequency": res.spectrum.frequencies.tolist(), "power": res.spectrum.power.tolist()},
        cfg,
    )
    peak = {
        "frequency": res.peak_frequency,
        "power": res.peak_power,
        "period": res.peak_period,
        "frequency_resolution": res.spectrum.df,
    }
    io.write_json(_outdir(args) / "gap_peak.json", {"config": cfg, "peak": peak, "trend": res.trend.to_dict()})
    _plot(args, "gap_spectrum", res.spectrum.frequencies[1:], res.spectrum.power[1:], "frequency (1/tau)", "power", logy=False)
    _summary(command="gap-spectrum", **peak)
    return 0


def cmd_vspec(args) -> int:
    cfg = _config(args)
    data = window_data(_window(args))
    spectrum, fit = signal_spectrum(data.signal, args.segment_len, args.overlap, args.fit_threshold)
    _emit_table(args, "vspec", {"frequency": spectrum.frequencies.tolist(), "power": spectrum.power.tolist()}, cfg)
    _emit_fit(args, "vspec_fit", fit, cfg)
    _plot(args, "vspec", spectrum.frequencies[1:], spectrum.power[1:], "frequency (1/n)", "power", fit)
    _summary(command="vspec", decay_scale=fit.decay_scale, r_squared=fit.r_squared)
    return 0


def cmd_ky(args) -> int:
    cfg = _config(args)
    params = KYParams(
        alpha=args.alpha,
        modulus=args.modulus,
        seed=args.seed,
        steps=args.steps,
        burn_in=args.burn_in,
        y0=args.y0,
    )
    series = iterate_ky(params)
    spectrum = ky_spectrum(series, args.segment_len, args.overlap)
    fit = spec.fit_spectral_decay(spectrum, args.fit_threshold)
    n0 = params.burn_in
    _emit_table(
        args,
        "ky_orbit",
        {"n": list(range(n0, n0 + len(series))), "x": series.x.tolist(), "y": series.y.tolist()},
        cfg,
    )
    _emit_table(args, "ky_spectrum", {"frequency": spectrum.frequencies.tolist(), "power": spectrum.power.tolist()}, cfg)
    _emit_fit(args, "ky_fit", fit, cfg, params=params.to_dict())
    _plot(args, "ky_spectrum", spectrum.frequencies[1:], spectrum.power[1:], "frequency (1/step)", "power", fit)
    _summary(command="ky", decay_scale=fit.decay_scale, r_squared=fit.r_squared)
    return 0


def _parse_target(token: str):
    parts = token.split(":")
    if parts[0] == "synthetic":
        if not 2 <= len(parts) <= 4:
            raise argparse.ArgumentTypeError(f"expected synthetic:THETA[:LENGTH[:SEED]], got {token!r}")
        theta = float(parts[1])
        length = int(parts[2]) if len(parts) > 2 else 10**6
        seed = int(parts[3]) if len(parts) > 3 else 0
        return SyntheticSpec(theta, length, seed)
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected CENTER:WIDTH, got {token!r}")
    return Window(int(float(parts[0])), int(float(parts[1])))


def cmd_report(args) -> int:
    cfg = _config(args)
    targets = [_parse_target(t) for t in args.windows]
    for t in targets:
        if isinstance(t, Window):
            check_stationarity(t, args.stationarity_threshold)
    bundle = poisson_report(
        targets,
        max_lag=args.max_lag,
        acf_threshold=args.fit_threshold,
        bin_width=args.bin_width,
        min_count=args.min_count,
        tolerance=args.poisson_tol,
        jobs=args.jobs,
    )
    rows = [r.to_dict() for r in bundle.records]

    def col(key, sub=None):
        vals = []
        for r in rows:
            v = r[key]
            if sub is not None:
                v = None if v is None else v[sub]
            vals.append("" if v is None else v)
        return vals

    columns = {
        "label": col("label"),
        "n0": col("n0"),
        "width": col("width"),
        "zeta": col("zeta", "decay_scale"),
        "theta": col("theta", "decay_scale"),
        "ratio": col("ratio"),
        "zeta_per_log_n0": col("zeta_per_log_n0"),
        "stationarity_defect": col("stationarity_defect"),
        "verdict": col("verdict"),
    }
    _emit_table(args, "report", columns, cfg)
    io.write_json(_outdir(args) / "report_records.json", {"config": cfg, "records": rows})
    for r in bundle.records:
        if r.ok:
            print(f"{r.label:>22}  zeta={r.zeta.decay_scale:7.3f}  theta={r.theta.decay_scale:7.3f}  "
                  f"2zeta/theta={r.ratio:6.3f}  {r.verdict}")
    if bundle.failed:
        for r in bundle.failed:
            print(f"error: window {r.label} failed: {r.error}", file=sys.stderr)
        return 1
    return 0


def cmd_primes(args) -> int:
    cfg = _config(args)
    pr = sieve_range(args.lo, args.hi)
    out = _outdir(args)
    io.write_primes_txt(out / "primes.txt", pr.primes)
    io.write_primes_csv(out / "primes.csv", pr.primes, cfg)
    if len(pr) >= 2:
        io.write_gaps_csv(out / "gap_series.csv", gaps_of(pr).gaps, cfg)
    _summary(command="primes", count=len(pr))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="primecorr",
        description="Correlations, gap statistics and spectra of the prime telegraph signal.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=os.environ.get(OUT_ENV, "."),
                        help=f"output directory (default: ${OUT_ENV} or the working directory)")
    common.add_argument("--format", choices=("csv", "json"), default="csv", help="data file format")
    common.add_argument("--plot", choices=("off", "svg"), default="off", help="also render semilog SVG plots")

    def window_args(p, center, width):
        p.add_argument("--center", type=int, default=center, help=f"window center n0 (default {center})")
        p.add_argument("--width", type=int, default=width, help=f"window width (default {width})")
        p.add_argument("--stationarity-threshold", type=float, default=STATIONARITY_THRESHOLD,
                       help="warn when width/(n0 ln n0) exceeds this")

    def gap_args(p):
        p.add_argument("--bin-width", type=int, default=est.GAP_BIN_WIDTH)
        p.add_argument("--min-count", type=int, default=est.GAP_MIN_COUNT,
                       help="bins fitted for theta must hold at least this many gaps")

    def welch_args(p):
        p.add_argument("--segment-len", type=int, default=spec.SEGMENT_LEN)
        p.add_argument("--overlap", type=float, default=spec.OVERLAP)
        p.add_argument("--fit-threshold", type=float, default=spec.DECAY_FLOOR,
                       help="decay range ends before power falls below this fraction of the peak")

    p = sub.add_parser("acf", parents=[common], help="autocorrelation of v(n) and correlation length")
    window_args(p, 100_000, 10_000)
    p.add_argument("--max-lag", type=int, default=est.MAX_LAG)
    p.add_argument("--fit-threshold", type=float, default=est.ACF_FIT_THRESHOLD,
                   help="fit lags until C(l) first drops below this")
    p.set_defaults(func=cmd_acf)

    p = sub.add_parser("gaps", parents=[common], help="gap density and its exponential scale")
    window_args(p, 100_000, 10_000)
    gap_args(p)
    p.set_defaults(func=cmd_gaps)

    p = sub.add_parser("gap-spectrum", parents=[common], help="spectrum of the detrended gap density")
    window_args(p, 18_000, 4_000)
    gap_args(p)
    p.set_defaults(func=cmd_gap_spectrum)

    p = sub.add_parser("vspec", parents=[common], help="Welch spectrum of v(n) and its decay fit")
    window_args(p, 18_000, 4_000)
    welch_args(p)
    p.set_defaults(func=cmd_vspec)

    p = sub.add_parser("ky", parents=[common], help="Kaplan-Yorke orbit and its spectrum")
    p.add_argument("--alpha", type=float, default=0.2)
    p.add_argument("--modulus", type=int, default=DEFAULT_MODULUS)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--steps", type=int, default=2**18)
    p.add_argument("--burn-in", type=int, default=1000)
    p.add_argument("--y0", type=float, default=0.0)
    welch_args(p)
    p.set_defaults(func=cmd_ky)

    p = sub.add_parser("report", parents=[common], help="zeta, theta and 2 zeta/theta per window")
    p.add_argument("--windows", nargs="+",
                   default=[f"{w.center}:{w.width}" for w in STUDY_WINDOWS],
                   help="CENTER:WIDTH or synthetic:THETA[:LENGTH[:SEED]] tokens")
    p.add_argument("--max-lag", type=int, default=est.MAX_LAG)
    p.add_argument("--fit-threshold", type=float, default=est.ACF_FIT_THRESHOLD)
    gap_args(p)
    p.add_argument("--poisson-tol", type=float, default=POISSON_TOLERANCE)
    p.add_argument("--stationarity-threshold", type=float, default=STATIONARITY_THRESHOLD)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("primes", parents=[common], help="export primes and gaps of [lo, hi)")
    p.add_argument("--lo", type=int, required=True)
    p.add_argument("--hi", type=int, required=True)
    p.set_defaults(func=cmd_primes)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except argparse.ArgumentTypeError as exc:
        parser.error(str(exc))
    except PrimeCorrError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
