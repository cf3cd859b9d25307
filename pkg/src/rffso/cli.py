"""Command-line front end: parameter sweeps, figure presets and MC validation.

Exit codes: 0 success, 1 configuration/parse error (or numerical failure),
2 validation tolerance breach, 3 unsupported model combination.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from dataclasses import replace

from . import __version__, analytics, montecarlo
from .errors import RfFsoError, UnsupportedCombinationError
from .hardware import Aggregate, Hpa, Ideal
from .presets import NOTES, PRESETS
from .settings import KEY_HELP, SECTIONS, ConfigError, Settings, parse_settings
from .sndr import Protocol, ceiling

EXIT_OK, EXIT_PARSE, EXIT_VALIDATION, EXIT_UNSUPPORTED = 0, 1, 2, 3
_MIN_OP_FOR_CHECK = 1e-3


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    v = float(v)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return f"{v:.9g}"


# ---------------------------------------------------------------------------
# point evaluation
# ---------------------------------------------------------------------------

def _analytic(cfg, s: Settings, metric):
    if metric == "op":
        return analytics.outage(cfg, s.gamma_th), None
    if metric == "sep":
        if cfg.protocol is Protocol.AF and isinstance(cfg.hw, Ideal):
            return analytics.sep_af_ideal_closed(cfg, s.modulation_c), None
        return analytics.sep_numeric(cfg, s.modulation_c), None
    if isinstance(cfg.hw, Hpa):
        val, meta = analytics.ec_hpa_closed(cfg)
        return val, meta["fallback"]
    return analytics.ec_numeric(cfg), None


def _asymptotic(cfg, s: Settings, metric):
    af, ideal = cfg.protocol is Protocol.AF, isinstance(cfg.hw, Ideal)
    if metric == "op":
        if af:
            return analytics.outage_af_asymptotic(cfg, s.gamma_th)
        return analytics.outage_df_asymptotic(cfg, s.gamma_th)
    if metric == "sep":
        if af and ideal:
            return analytics.sep_af_ideal_asymptotic(cfg, s.modulation_c)
        if ideal and cfg.rf.mu1 == cfg.fso.detection.mu_r:
            return float(analytics.sep_df_high_snr(cfg, s.modulation_c)["sep"](cfg.rf.mu1))
        return math.nan
    if isinstance(cfg.hw, Hpa):
        return analytics.ec_hpa_asymptotic(cfg)
    return analytics.capacity_ceiling(cfg) if not ideal else math.nan


def _bounds(cfg, metric):
    """``(bound, approximation)`` columns; only capacity has them."""
    if metric != "ec":
        return math.nan, math.nan
    if isinstance(cfg.hw, Hpa):
        return analytics.capacity_ceiling(cfg), analytics.ec_approx(cfg)
    if cfg.protocol is Protocol.DF:
        return analytics.ec_df_bound(cfg), math.nan
    return analytics.ec_upper_bound_af(cfg), analytics.ec_approx(cfg)


def _mc_metric(s: Settings, metric):
    if metric == "op":
        return montecarlo.Outage(s.gamma_th)
    if metric == "sep":
        return montecarlo.Sep(s.modulation_c)
    return montecarlo.Capacity()


def columns(s: Settings, prefix=""):
    cols = []
    for method in s.methods:
        for metric in s.metrics:
            if method == "bounds":
                if metric == "ec":
                    cols += [f"{prefix}bound_ec", f"{prefix}approx_ec"]
                continue
            cols.append(f"{prefix}{method}_{metric}")
    if "mc" in s.methods:
        cols += [f"{prefix}mc_stderr_{m}" for m in s.metrics]
    if "analytic" in s.methods and "ec" in s.metrics and s.hardware == "hpa":
        cols.append(f"{prefix}fallback_ec")
    return cols


def evaluate_point(s: Settings, prefix=""):
    """All requested values at one sweep point; returns (row dict, check records)."""
    cfg = s.link_config()
    ceiling(cfg.protocol, cfg.hw)  # rejects DF + HPA early
    row, checks = {}, []
    analytic_vals = {}
    for metric in s.metrics:
        if "analytic" in s.methods:
            val, fb = _analytic(cfg, s, metric)
            analytic_vals[metric] = val
            row[f"{prefix}analytic_{metric}"] = val
            if fb is not None:
                row[f"{prefix}fallback_ec"] = fb
        if "asymptotic" in s.methods:
            row[f"{prefix}asymptotic_{metric}"] = _asymptotic(cfg, s, metric)
        if "bounds" in s.methods and metric == "ec":
            row[f"{prefix}bound_ec"], row[f"{prefix}approx_ec"] = _bounds(cfg, metric)
    if "mc" in s.methods and s.samples > 0:
        sim = montecarlo.SimConfig(s.seed, s.samples, s.batch_size, s.workers)
        mets = [_mc_metric(s, m) for m in s.metrics]
        est = montecarlo.estimate_grid(mets, [cfg], sim)[0]
        op_level = analytic_vals.get("op")
        if op_level is None and "analytic" in s.methods:
            op_level = analytics.outage(cfg, s.gamma_th)
        for metric, e in zip(s.metrics, est):
            row[f"{prefix}mc_{metric}"] = e.value
            row[f"{prefix}mc_stderr_{metric}"] = e.stderr
            if metric in analytic_vals:
                checks.append(_check(prefix, metric, analytic_vals[metric], e, op_level))
    elif "mc" in s.methods:
        for metric in s.metrics:
            row[f"{prefix}mc_{metric}"] = math.nan
            row[f"{prefix}mc_stderr_{metric}"] = math.nan
    return row, checks


def _check(prefix, metric, analytic, est, op_level):
    dev = abs(analytic - est.value)
    sd = montecarlo.binomial_sd(analytic, est) if metric == "op" else est.stderr
    lim = 3.0 * sd
    if op_level is not None and op_level < _MIN_OP_FOR_CHECK:
        status = "skipped"
    elif sd == 0.0:
        status = "pass" if dev <= 1e-9 else "fail"
    else:
        status = "pass" if dev <= lim else "fail"
    return {"column": f"{prefix}{metric}", "analytic": analytic, "mc": est.value, "stderr": est.stderr,
            "deviation": dev, "limit": lim, "status": status}


def run_series(series, log=None):
    """Evaluate labelled settings over their (shared) sweep grid."""
    grid = series[0][1].grid()
    header = ["x"]
    for label, s in series:
        header += columns(s, f"{label}_" if label else "")
    rows, checks, flags = [], [], []
    for x in grid:
        row = {"x": x}
        point_flags = {}
        for label, s in series:
            prefix = f"{label}_" if label else ""
            vals, chk = evaluate_point(s.at(x), prefix)
            row.update(vals)
            for c in chk:
                c["x"] = x
            checks += chk
            fb = vals.get(f"{prefix}fallback_ec")
            if fb is not None:
                point_flags[label or "curve"] = bool(fb)
        rows.append(row)
        flags.append({"x": x, "fallback_ec": point_flags})
        if log:
            log(f"x = {x:g} done")
    return header, rows, checks, flags


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def render_csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(row.get(h, math.nan)) for h in header])
    return buf.getvalue()


def _jsonable(obj):
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else str(obj)
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def write_outputs(outdir, files):
    """Write all files or none: stage in a temp dir, then move into place."""
    os.makedirs(outdir, exist_ok=True)
    stage = tempfile.mkdtemp(prefix=".staging-", dir=outdir)
    try:
        for name, text in files.items():
            with open(os.path.join(stage, name), "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        for name in files:
            os.replace(os.path.join(stage, name), os.path.join(outdir, name))
    finally:
        for name in os.listdir(stage):
            os.remove(os.path.join(stage, name))
        os.rmdir(stage)


def _derived_summary(s: Settings):
    cfg = s.link_config()
    out = {"r": cfg.r, "varpi": cfg.varpi, "mean_gamma1": cfg.lc.Egamma1, "C": cfg.lc.C}
    hw = cfg.hw
    if isinstance(hw, Aggregate):
        out["delta"] = hw.delta
    if isinstance(hw, Hpa):
        out["hpa_kappa"] = cfg.lc.kappa
    try:
        g = ceiling(cfg.protocol, hw)
        out["sndr_ceiling"] = g
    except UnsupportedCombinationError:
        pass
    return out


def _meta(command, series, flags, checks, extra=None):
    meta = {
        "tool": "rffso",
        "version": __version__,
        "command": command,
        "series": [{"label": label, "settings": s.resolved(), "derived": _derived_summary(s)}
                   for label, s in series],
        "points": flags,
    }
    if checks:
        meta["validation"] = checks
    if extra:
        meta.update(extra)
    return json.dumps(_jsonable(meta), indent=2, sort_keys=True) + "\n"


def _notes_for_sweep(s: Settings, explicit):
    lines = ["# Parameters not set in the config", "",
             "Table II defaults (and package defaults for parameters Table II omits) were used for:", ""]
    for section, keys in SECTIONS.items():
        for k in keys:
            if k == "r" or k in explicit or (k == "detection" and "r" in explicit):
                continue
            lines.append(f"- [{section}] {k} = {getattr(s, k)!r}")
    lines += ["", "Conventions:", "", *(f"- {n}" for n in NOTES)]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _load(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    return parse_settings(text)


def cmd_sweep(args):
    s, explicit = _load(args.config)
    over = {}
    if args.seed is not None:
        over["seed"] = args.seed
    if args.samples is not None:
        over["samples"] = args.samples
    if args.validate:
        over["methods"] = tuple(s.methods) + tuple(m for m in ("analytic", "mc") if m not in s.methods)
    s = replace(s, **over)
    header, rows, checks, flags = run_series([("", s)], _logger(args))
    breaches = [c for c in checks if c["status"] == "fail"] if args.validate else []
    write_outputs(args.output, {
        "curve.csv": render_csv(header, rows),
        "meta.json": _meta({"name": "sweep", "validate": args.validate}, [("", s)], flags,
                           checks if args.validate else None),
        "notes.md": _notes_for_sweep(s, explicit | set(over)),
    })
    for b in breaches:
        print(f"validation breach at x={b['x']:g} {b['column']}: analytic {b['analytic']:.6g} "
              f"mc {b['mc']:.6g} (|d| = {b['deviation']:.3g} > {b['limit']:.3g})", file=sys.stderr)
    return EXIT_VALIDATION if breaches else EXIT_OK


def cmd_figure(args):
    preset = PRESETS[args.n]
    base = Settings()
    if args.seed is not None:
        base = replace(base, seed=args.seed)
    if args.samples is not None:
        base = replace(base, samples=args.samples)
    series = preset.settings(base)
    if args.mc:
        series = [(label, replace(s, methods=tuple(s.methods) + ("mc",))) for label, s in series]
    header, rows, checks, flags = run_series(series, _logger(args))
    notes = [f"# Figure {args.n}: {preset.title}", "",
             "Settings the figure description leaves open, and the values used:", "",
             *(f"- {n}" for n in preset.notes), *(f"- {n}" for n in NOTES), "",
             "Series:", "", *(f"- {label}: {dict(ov)}" for label, ov in preset.series), ""]
    write_outputs(args.output, {
        "curve.csv": render_csv(header, rows),
        "meta.json": _meta({"name": "figure", "n": args.n, "mc": args.mc}, series, flags, checks or None),
        "notes.md": "\n".join(notes),
    })
    return EXIT_OK


def cmd_validate(args):
    s, _ = _load(args.config)
    if args.seed is not None:
        s = replace(s, seed=args.seed)
    if args.samples is not None:
        s = replace(s, samples=args.samples)
    cfg = s.link_config()
    ceiling(cfg.protocol, cfg.hw)
    sim = montecarlo.SimConfig(s.seed, s.samples, s.batch_size, s.workers)
    report = montecarlo.validate(cfg, sim, gamma_th=s.gamma_th, sep_c=s.modulation_c)
    failed = False
    for c in report:
        failed |= c.status == "fail"
        extra = f" {c.detail}" if c.detail else ""
        print(f"{c.status.upper():8s} {c.name:16s} value={c.value:.4g} limit={c.limit:.4g}{extra}")
    return EXIT_VALIDATION if failed else EXIT_OK


def _logger(args):
    if getattr(args, "quiet", True):
        return None
    return lambda msg: print(msg, file=sys.stderr)


def _key_reference():
    lines = ["config keys (INI sections; dB at the boundary, linear inside):"]
    for section, keys in SECTIONS.items():
        lines.append(f"  [{section}]")
        for k in keys:
            default = "" if k == "r" else f" (default {getattr(Settings(), k)!r})"
            lines.append(f"    {k:13s} {KEY_HELP[k]}{default}")
    lines.append("exit codes: 0 ok, 1 parse/config error, 2 validation breach, 3 unsupported combination")
    return "\n".join(lines)


def build_parser():
    p = argparse.ArgumentParser(
        prog="rffso",
        description="Performance analysis of mixed RF/FSO relaying with hardware impairments.",
        epilog=_key_reference(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p.add_argument("--version", action="version", version=f"rffso {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    sw = sub.add_parser("sweep", help="run a parameter sweep from a config file",
                        epilog=_key_reference(), formatter_class=argparse.RawDescriptionHelpFormatter)
    sw.add_argument("config")
    sw.add_argument("-o", "--output", required=True, help="output directory")
    sw.add_argument("--validate", action="store_true", help="add MC and fail (exit 2) on |analytic - mc| > 3 stderr")
    sw.add_argument("--seed", type=int)
    sw.add_argument("--samples", type=int)
    sw.add_argument("-v", "--verbose", dest="quiet", action="store_false")
    sw.set_defaults(func=cmd_sweep)

    fg = sub.add_parser("figure", help="reproduce a figure preset (2..12)")
    fg.add_argument("n", type=int, choices=sorted(PRESETS))
    fg.add_argument("-o", "--output", required=True)
    fg.add_argument("--mc", action="store_true", help="add Monte-Carlo columns")
    fg.add_argument("--seed", type=int)
    fg.add_argument("--samples", type=int)
    fg.add_argument("-v", "--verbose", dest="quiet", action="store_false")
    fg.set_defaults(func=cmd_figure)

    va = sub.add_parser("validate", help="analytic-versus-Monte-Carlo suite for one config",
                        epilog=_key_reference(), formatter_class=argparse.RawDescriptionHelpFormatter)
    va.add_argument("config")
    va.add_argument("--seed", type=int)
    va.add_argument("--samples", type=int)
    va.set_defaults(func=cmd_validate)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except UnsupportedCombinationError as exc:
        print(f"unsupported combination: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except RfFsoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
