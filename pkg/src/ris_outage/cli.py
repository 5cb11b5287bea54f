"""Command-line front end.

Subcommands:
  eval      one (config, SNR) point for any subset of methods, JSON output
  sweep     full SNR/parameter sweep to CSV, JSON summary on stdout
  fit       diversity order / coding gain regression on a sweep CSV
  validate  Monte-Carlo vs closed-form agreement report

Configuration comes from an optional flat key=value file, an optional
figure preset, and repeatable --set overrides; later sources win.
"""

import argparse
import csv
import json
import sys

from .analytic import (
    METHOD_ANALYTIC,
    METHOD_MONTE_CARLO,
    outage_probability,
)
from .asymptotic import asym_outage_general, fit_diversity_coding_gain
from .mc import estimate_outage
from .sweep import (
    ConfigError,
    CSV_COLUMNS,
    PRESETS,
    SweepSpec,
    _coerce,
    _parse_vary,
    emit_csv,
    parse_config,
    parse_methods,
    run_sweep,
    rows_to_csv_text,
)


def _add_common_config_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", metavar="PATH", help="flat key = value config file")
    sub.add_argument("--preset", choices=sorted(PRESETS), help="reconstructed figure preset")
    sub.add_argument("--methods", metavar="LIST", help="comma list: a,s,m or full names")
    sub.add_argument("--trials", type=int, metavar="N", help="Monte-Carlo trials per point")
    sub.add_argument("--seed", type=int, metavar="S", help="Monte-Carlo base seed")
    sub.add_argument(
        "--set",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        dest="assignments",
        help="override any config key (repeatable)",
    )


def _collect_overrides(args) -> dict:
    overrides: dict = {}
    for assignment in args.assignments:
        if "=" not in assignment:
            raise ConfigError(f"--set expects KEY=VALUE, got {assignment!r}")
        key, _, value = assignment.partition("=")
        overrides[key.strip()] = value.strip()
    if args.methods:
        overrides["methods"] = args.methods
    if args.trials is not None:
        overrides["n_trials"] = args.trials
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.preset:
        overrides["preset"] = args.preset
    return overrides


def _spec_from_args(args) -> SweepSpec:
    raw = _collect_overrides(args)
    # --set values arrive as strings; reuse the file-parsing coercions
    file_like = {}
    for key, value in raw.items():
        if key == "methods" and isinstance(value, str):
            file_like[key] = parse_methods(value)
        elif key == "vary" and isinstance(value, str):
            file_like[key] = _parse_vary(value)
        elif isinstance(value, str) and key not in ("preset",):
            file_like[key] = _coerce(key, value, context="--set")
        else:
            file_like[key] = value
    return parse_config(args.config, file_like)


def _cmd_eval(args) -> int:
    spec = _spec_from_args(args)
    cfg = spec.base
    results = []
    for method in spec.methods:
        if method == METHOD_ANALYTIC:
            res = outage_probability(cfg)
            results.append({"method": method, "p": res.p, "ci95": None})
        elif method == METHOD_MONTE_CARLO:
            est = estimate_outage(cfg, spec.mc_plan)
            results.append({"method": method, "p": est.p_hat, "ci95": est.ci95_halfwidth})
        else:
            results.append({"method": method, "p": asym_outage_general(cfg), "ci95": None})
    payload = {"config": cfg.__dict__, "results": results}
    json.dump(payload, sys.stdout, indent=2)
    print()
    return 0


def _cmd_sweep(args) -> int:
    spec = _spec_from_args(args)
    rows = run_sweep(spec)
    failed = [r for r in rows if r.status != "ok"]
    if args.out:
        emit_csv(rows, args.out)
        summary = {
            "preset": spec.preset,
            "reconstructed_parameters": spec.preset is not None,
            "variants": len(spec.vary),
            "snr_points": len(spec.snr_points()),
            "methods": list(spec.methods),
            "mc_trials": spec.mc_plan.n_trials,
            "mc_seed": spec.mc_plan.seed,
            "rows": len(rows),
            "failed_cells": len(failed),
            "out": args.out,
        }
        json.dump(summary, sys.stdout, indent=2)
        print()
    else:
        sys.stdout.write(rows_to_csv_text(rows))
    return 0 if not failed else 1


def _read_csv_rows(path: str) -> list[dict]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        missing = [c for c in CSV_COLUMNS if c not in (reader.fieldnames or [])]
        if missing:
            raise ConfigError(f"{path}: missing CSV columns {missing}")
        return list(reader)


def _cmd_fit(args) -> int:
    rows = _read_csv_rows(args.input)
    lo, hi = args.window
    variant_key = ("N", "K", "I_r", "I_d", "R", "rhoI_r_dB", "rhoI_d_dB")
    curves: dict = {}
    for row in rows:
        if row["method"] != args.method or row["status"] != "ok" or not row["p"]:
            continue
        rho = float(row["rho_dB"])
        if not (lo - 1e-9 <= rho <= hi + 1e-9):
            continue
        key = tuple(row[k] for k in variant_key)
        curves.setdefault(key, []).append((rho, float(row["p"])))

    reports = []
    for key, points in curves.items():
        points.sort()
        try:
            fit = fit_diversity_coding_gain(points)
        except ValueError as exc:
            reports.append({"variant": dict(zip(variant_key, key)), "error": str(exc)})
            continue
        reports.append(
            {
                "variant": dict(zip(variant_key, key)),
                "G_d": fit.G_d,
                "G_c_dB": fit.G_c_dB,
                "fit_window": list(fit.fit_window),
                "residual": fit.residual,
                "points": len(points),
            }
        )
    json.dump({"method": args.method, "window": [lo, hi], "fits": reports}, sys.stdout, indent=2)
    print()
    return 0 if all("error" not in r for r in reports) and reports else 1


def _cmd_validate(args) -> int:
    spec = _spec_from_args(args)
    report = []
    all_ok = True
    for variant in spec.variants():
        for rho_db in spec.snr_points():
            cfg = variant.with_overrides(rho_dB=rho_db)
            p_ref = outage_probability(cfg).p
            if p_ref < args.min_p:
                continue
            est = estimate_outage(cfg, spec.mc_plan)
            # Monte-Carlo noise bound, widened by the documented tolerance of
            # the combined-channel approximation when N >= 2.
            tol = 3.0 * est.ci95_halfwidth
            if cfg.N >= 2:
                tol = max(tol, 0.10 * p_ref)
            ok = abs(est.p_hat - p_ref) <= tol
            all_ok = all_ok and ok
            report.append(
                {
                    "N": cfg.N, "K": cfg.K,
                    "rhoI_r_dB": cfg.rhoI_r_dB, "rhoI_d_dB": cfg.rhoI_d_dB,
                    "rho_dB": rho_db,
                    "p_analytic": p_ref,
                    "p_mc": est.p_hat,
                    "ci95": est.ci95_halfwidth,
                    "tolerance": tol,
                    "ok": ok,
                }
            )
    json.dump(
        {"trials": spec.mc_plan.n_trials, "seed": spec.mc_plan.seed,
         "points": len(report), "all_ok": all_ok, "report": report},
        sys.stdout,
        indent=2,
    )
    print()
    return 0 if all_ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ris-outage",
        description="Outage probability of a RIS-assisted-source DF relaying "
        "network under co-channel interference",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate a single configuration point")
    _add_common_config_flags(p_eval)
    p_eval.set_defaults(func=_cmd_eval)

    p_sweep = sub.add_parser("sweep", help="run an SNR/parameter sweep to CSV")
    _add_common_config_flags(p_sweep)
    p_sweep.add_argument("--out", metavar="PATH", help="CSV output path (default: stdout)")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_fit = sub.add_parser("fit", help="fit diversity order and coding gain from a sweep CSV")
    p_fit.add_argument("--in", dest="input", required=True, metavar="PATH")
    p_fit.add_argument("--method", default=METHOD_ANALYTIC)
    p_fit.add_argument(
        "--window", nargs=2, type=float, default=(45.0, 60.0), metavar=("LO", "HI")
    )
    p_fit.set_defaults(func=_cmd_fit)

    p_val = sub.add_parser("validate", help="Monte-Carlo vs closed-form agreement report")
    _add_common_config_flags(p_val)
    p_val.add_argument(
        "--min-p", type=float, default=1e-5,
        help="skip points whose closed-form outage is below this (default 1e-5)",
    )
    p_val.set_defaults(func=_cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
