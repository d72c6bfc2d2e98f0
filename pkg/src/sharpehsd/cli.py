"""Command-line front end: data ingestion, test reports, distribution values,
and Monte Carlo experiment orchestration.

Exit codes: 0 success, 2 input/domain error, 3 numeric failure, 4 usage error.
The default simulation seed can be set via the SHARPEHSD_SEED environment
variable.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys

import numpy as np

from . import __version__, mc_engine, range_dist
from .corr_model import CorrModel, clamp_rho, estimate_rho_median, sample_correlation
from .posthoc import DF_INF, DF_N_MINUS_1, RHO_ASSUMED, RHO_ESTIMATED, analyze
from .sr_core import ReturnsPanel, SrEstimate, sharpe_ratios, sr_from_summary
from .svg import lollipop_chart

SCHEMA_VERSION = "1"
SEED_ENV_VAR = "SHARPEHSD_SEED"
_DEFAULT_SEED = 20231

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERIC = 3
EXIT_USAGE = 4

_FREQ = {"daily": 252.0, "monthly": 12.0, "annual": 1.0}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _parse_freq(text: str) -> float:
    if text in _FREQ:
        return _FREQ[text]
    if text.startswith("custom:"):
        ppy = float(text.split(":", 1)[1])
        if ppy <= 0:
            raise UsageError(f"periods per year must be positive, got {ppy}")
        return ppy
    raise UsageError(f"unknown frequency {text!r}; use daily|monthly|annual|custom:<ppy>")


def _read_returns_csv(path: str, percent: bool) -> tuple[list[str], np.ndarray]:
    with open(path, newline="") as f:
        rows = list(csv.reader(f))
    rows = [r for r in rows if r and any(cell.strip() for cell in r)]
    if len(rows) < 3:
        raise ValueError(f"{path}: need a header and at least 2 return rows")
    header = [c.strip() for c in rows[0]]
    skip_first = header and header[0].lower() == "date"
    names = header[1:] if skip_first else header
    if not names:
        raise ValueError(f"{path}: no asset columns found")
    data = []
    for line_no, row in enumerate(rows[1:], start=2):
        cells = row[1:] if skip_first else row
        if len(cells) != len(names):
            raise ValueError(f"{path} row {line_no}: expected {len(names)} values, got {len(cells)}")
        parsed = []
        for name, cell in zip(names, cells):
            try:
                parsed.append(float(cell))
            except ValueError:
                raise ValueError(
                    f"{path} row {line_no}: non-numeric value {cell!r} for asset {name}"
                ) from None
        data.append(parsed)
    values = np.asarray(data)
    if percent:
        values = values / 100.0
    return names, values


def _read_summary_csv(path: str) -> tuple[list[str], np.ndarray, np.ndarray]:
    with open(path, newline="") as f:
        reader = csv.DictReader(f)
        required = {"name", "annual_return_pct", "annual_sd_pct"}
        fields = {c.strip() for c in reader.fieldnames or ()}
        if not required <= fields:
            raise ValueError(
                f"{path}: summary CSV must have columns {sorted(required)}, got {sorted(fields)}"
            )
        names, rets, sds = [], [], []
        for line_no, row in enumerate(reader, start=2):
            names.append(row["name"].strip())
            try:
                rets.append(float(row["annual_return_pct"]))
                sds.append(float(row["annual_sd_pct"]))
            except (TypeError, ValueError):
                raise ValueError(f"{path} row {line_no}: non-numeric summary value") from None
    if not names:
        raise ValueError(f"{path}: no fund rows found")
    return names, np.asarray(rets), np.asarray(sds)


def _report_document(report, metadata: dict) -> dict:
    doc = {"schema_version": SCHEMA_VERSION, "tool_version": __version__}
    doc.update(metadata)
    doc.update(report.to_dict())
    return doc


def _scalar_fields(doc: dict) -> list[tuple[str, object]]:
    out = []
    for key, value in doc.items():
        if isinstance(value, (str, int, float, bool)) or value is None:
            out.append((key, value))
    for name, sr in zip(doc["asset_names"], doc["sr_annualized"]):
        out.append((f"sr.{name}", sr))
    for pair in doc["rejected_pairs"]:
        out.append((f"reject.{pair[0]}|{pair[1]}", True))
    return out


def _value_str(value) -> str:
    return repr(value) if isinstance(value, float) else str(value)


def _write_report(doc: dict, fmt: str, out) -> None:
    if fmt == "json":
        json.dump(doc, out, indent=2)
        out.write("\n")
    elif fmt == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["field", "value"])
        for key, value in _scalar_fields(doc):
            writer.writerow([key, _value_str(value)])
    else:
        for key, value in _scalar_fields(doc):
            out.write(f"{key}: {_value_str(value)}\n")


def _emit_svg(path: str, doc: dict) -> None:
    half = doc["hsd_ndf"] if doc["df_mode"] == DF_N_MINUS_1 else doc["hsd_inf"]
    text = lollipop_chart(
        doc["asset_names"], doc["sr_annualized"], half, doc["alpha"], doc["df_mode"]
    )
    with open(path, "w") as f:
        f.write(text)


def _resolve_rho_flag(flag: str, panel_values, p: int) -> tuple[float, str, list[str], float | None]:
    warnings = []
    if flag == "estimate":
        if panel_values is None:
            raise UsageError("--rho estimate requires raw returns")
        raw = estimate_rho_median(panel_values)
        rho, clamped = clamp_rho(raw, p)
        if clamped:
            warnings.append(f"estimated rho {raw!r} clamped to {rho!r}")
        return rho, RHO_ESTIMATED, warnings, raw
    raw = float(flag)
    rho, clamped = clamp_rho(raw, p)
    if clamped:
        warnings.append(f"assumed rho {raw!r} clamped to {rho!r}")
    return rho, RHO_ASSUMED, warnings, None


def cmd_test(args) -> int:
    names, values = _read_returns_csv(args.input, args.percent)
    if len(names) < 2:
        raise ValueError("need at least 2 assets for the range test")
    ppy = _parse_freq(args.freq)
    panel = ReturnsPanel(values=values, asset_names=names, periods_per_year=ppy)
    est = sharpe_ratios(panel, risk_free_per_period=args.rf)
    rho, source, warnings, rho_median = _resolve_rho_flag(args.rho, panel.values, panel.p)
    df_mode = DF_N_MINUS_1 if args.df == "n-1" else DF_INF
    report = analyze(
        est, rho=rho, rho_source=source, alpha=args.alpha, df_mode=df_mode,
        warnings=tuple(warnings),
    )
    corr = sample_correlation(panel.values)
    doc = _report_document(
        report,
        {
            "input": args.input,
            "n_observations": panel.n,
            "rho_median_estimate": (
                rho_median if rho_median is not None else estimate_rho_median(panel.values)
            ),
            "sample_correlation": corr.tolist(),
        },
    )
    _write_report(doc, args.format, sys.stdout)
    if args.svg:
        _emit_svg(args.svg, doc)
    return EXIT_OK


def cmd_test_summary(args) -> int:
    names, rets, sds = _read_summary_csv(args.input)
    if len(names) < 2:
        raise ValueError("need at least 2 funds for the range test")
    ppy = _parse_freq(args.freq)
    est_annual = sr_from_summary(
        rets, sds, risk_free_annual=args.rf_annual,
        n=args.n, periods_per_year=ppy, asset_names=names,
    )
    # analyze() works in per-period units; scale the annualized table back down.
    per_period = est_annual.sr / math.sqrt(ppy)
    est = SrEstimate(
        sr=per_period, n=args.n, periods_per_year=ppy,
        annualized=False, asset_names=tuple(names),
    )
    rho, source, warnings, _ = _resolve_rho_flag(str(args.rho), None, est.k)
    df_mode = DF_N_MINUS_1 if args.df == "n-1" else DF_INF
    report = analyze(
        est, rho=rho, rho_source=source, alpha=args.alpha, df_mode=df_mode,
        warnings=tuple(warnings),
    )
    doc = _report_document(report, {"input": args.input, "n_observations": args.n})
    _write_report(doc, args.format, sys.stdout)
    if args.svg:
        _emit_svg(args.svg, doc)
    return EXIT_OK


def cmd_dist(args) -> int:
    df = math.inf if args.df == "inf" else float(args.df)
    if args.op == "cdf":
        if args.q is None:
            raise UsageError("--op cdf requires --q")
        value = range_dist.ptukey(args.q, args.k, df)
    else:
        if args.p is None:
            raise UsageError("--op quantile requires --p")
        value = range_dist.qtukey(args.p, args.k, df)
    print(f"{value:.12g}")
    return EXIT_OK


def _grid(text: str, cast=float) -> list:
    return [cast(tok) for tok in text.split(",") if tok.strip()]


_EXPERIMENTS = (
    "null-basic",
    "null-scan-np",
    "null-rho",
    "feasible-rho",
    "feasible-ar1",
    "alt-one-good",
    "alt-half-good",
    "custom",
)


def _simulate_results(args) -> tuple[list, object | None]:
    reps, seed, workers = args.reps, args.seed, args.workers
    n_grid = _grid(args.n_grid, int) if args.n_grid else None
    p_grid = _grid(args.p_grid, int) if args.p_grid else None
    rho_grid = _grid(args.rho_grid) if args.rho_grid else None
    psnr_grid = _grid(args.psnr_grid) if args.psnr_grid else None
    results: list = []
    raw_result = None

    if args.experiment == "null-basic":
        spec = mc_engine.null_spec(
            1008, 16, 0.8, reps, seed, df_mode=DF_INF, rho_policy=mc_engine.TRUE_RHO
        )
        raw_result = mc_engine.run_null_experiment(spec, keep_raw=True, workers=workers)
        results.append(raw_result)
    elif args.experiment == "null-scan-np":
        for n in n_grid or [20, 40, 80, 160, 320, 640, 1280]:
            for p in p_grid or [8, 16, 32]:
                for df_mode in (DF_N_MINUS_1, DF_INF):
                    spec = mc_engine.null_spec(n, p, 0.8, reps, seed, df_mode=df_mode)
                    results.append(mc_engine.run_null_experiment(spec, workers=workers))
    elif args.experiment in ("null-rho", "feasible-rho"):
        policy = (
            mc_engine.TRUE_RHO if args.experiment == "null-rho" else mc_engine.ESTIMATED_RHO
        )
        for rho in rho_grid or [0.0, 0.25, 0.5, 0.75, 0.9]:
            spec = mc_engine.null_spec(1008, 16, rho, reps, seed, rho_policy=policy)
            results.append(mc_engine.run_null_experiment(spec, workers=workers))
    elif args.experiment == "feasible-ar1":
        for rho in rho_grid or [0.0, 0.3, 0.6, 0.9]:
            for policy in (mc_engine.ESTIMATED_RHO, 0.0):
                spec = mc_engine.SimSpec(
                    n_days=1008, p=16, corr=CorrModel.ar1(rho, 16), snr_annual=(1.0,) * 16,
                    replications=reps, seed=seed, rho_policy=policy,
                )
                results.append(mc_engine.run_misspecified_ar1(spec, workers=workers))
    elif args.experiment in ("alt-one-good", "alt-half-good"):
        design = mc_engine.ONE_GOOD if args.experiment == "alt-one-good" else mc_engine.HALF_GOOD
        make = mc_engine.one_good_spec if design == mc_engine.ONE_GOOD else mc_engine.half_good_spec
        base = make(1008, 16, 0.0, 0.0, reps, seed)
        results.extend(
            mc_engine.run_alternative(
                base,
                psnr_grid or [0.0, 0.5, 1.0, 1.5],
                rho_grid or [0.0, 0.3, 0.6, 0.9],
                workers=workers,
            )
        )
    else:  # custom
        rho = (rho_grid or [0.0])[0]
        n = (n_grid or [1008])[0]
        p = (p_grid or [16])[0]
        psnr = (psnr_grid or [0.0])[0]
        df_mode = DF_N_MINUS_1 if args.df == "n-1" else DF_INF
        if args.design == "null_range":
            spec = mc_engine.null_spec(n, p, rho, reps, seed, df_mode=df_mode)
        elif args.design == "one_good":
            spec = mc_engine.one_good_spec(n, p, rho, psnr, reps, seed, df_mode=df_mode)
        else:
            spec = mc_engine.half_good_spec(n, p, rho, psnr, reps, seed, df_mode=df_mode)
        results.append(mc_engine.run_experiment(spec, workers=workers))
    return results, raw_result


def cmd_simulate(args) -> int:
    results, raw_result = _simulate_results(args)
    if args.out:
        with open(args.out, "w", newline="") as f:
            mc_engine.results_to_csv(results, f)
    else:
        mc_engine.results_to_csv(results, sys.stdout)
    if raw_result is not None and args.out:
        raw_path = args.out + ".raw.csv"
        with open(raw_path, "w", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(["range", "pvalue"])
            for rng_val, pval in zip(raw_result.raw_ranges, raw_result.raw_pvalues):
                writer.writerow([repr(float(rng_val)), repr(float(pval))])
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="sharpehsd", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_test = sub.add_parser("test", help="post-hoc range test on a returns CSV")
    p_test.add_argument("--input", required=True)
    p_test.add_argument("--freq", default="daily")
    p_test.add_argument("--alpha", type=float, default=0.05)
    p_test.add_argument("--df", choices=["inf", "n-1"], default="n-1")
    p_test.add_argument("--rho", default="estimate", help="'estimate' or a numeric value")
    p_test.add_argument("--rf", type=float, default=0.0, help="per-period risk-free rate")
    p_test.add_argument("--percent", action="store_true", help="input returns are in percent")
    p_test.add_argument("--format", choices=["json", "text", "csv"], default="json")
    p_test.add_argument("--svg", default=None)
    p_test.set_defaults(func=cmd_test)

    p_sum = sub.add_parser("test-summary", help="range test from annual return/sd table")
    p_sum.add_argument("--input", required=True)
    p_sum.add_argument("--n", type=int, required=True, help="number of return observations")
    p_sum.add_argument("--rho", type=float, required=True)
    p_sum.add_argument("--freq", default="monthly")
    p_sum.add_argument("--alpha", type=float, default=0.05)
    p_sum.add_argument("--df", choices=["inf", "n-1"], default="n-1")
    p_sum.add_argument("--rf-annual", type=float, default=0.0, dest="rf_annual")
    p_sum.add_argument("--format", choices=["json", "text", "csv"], default="json")
    p_sum.add_argument("--svg", default=None)
    p_sum.set_defaults(func=cmd_test_summary)

    p_dist = sub.add_parser("dist", help="studentized range CDF/quantile values")
    p_dist.add_argument("--op", choices=["cdf", "quantile"], required=True)
    p_dist.add_argument("--k", type=int, required=True)
    p_dist.add_argument("--df", default="inf", help="'inf' or a positive real")
    p_dist.add_argument("--q", type=float, default=None)
    p_dist.add_argument("--p", type=float, default=None)
    p_dist.set_defaults(func=cmd_dist)

    p_sim = sub.add_parser("simulate", help="run Monte Carlo experiment presets")
    p_sim.add_argument("--experiment", choices=_EXPERIMENTS, required=True)
    p_sim.add_argument("--reps", type=int, default=5000)
    p_sim.add_argument(
        "--seed", type=int, default=int(os.environ.get(SEED_ENV_VAR, _DEFAULT_SEED))
    )
    p_sim.add_argument("--workers", type=int, default=1)
    p_sim.add_argument("--out", default=None)
    p_sim.add_argument("--n-grid", default=None)
    p_sim.add_argument("--p-grid", default=None)
    p_sim.add_argument("--rho-grid", default=None)
    p_sim.add_argument("--psnr-grid", default=None)
    p_sim.add_argument("--design", choices=["null_range", "one_good", "half_good"],
                       default="null_range")
    p_sim.add_argument("--df", choices=["inf", "n-1"], default="n-1")
    p_sim.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FileNotFoundError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (RuntimeError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
