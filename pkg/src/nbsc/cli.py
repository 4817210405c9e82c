"""
Command-line front end.

    nbsc bec-threshold --ensemble C36ms1 --m 5 --schedule wd --window 7
    nbsc awgn-threshold --ensemble B36 --m 1 --seed 7
    nbsc sweep --channel bec --ensembles C24,C36ms1 --m 1..6 --schedules fs,wd:5,wd:10
    nbsc wstar --ensemble C36ms1 --channel bec --m 1..5
    nbsc complexity --dv 3 --c 2 --window 7 --m 5
    nbsc dump-kernels --m 3
    nbsc dump-mi-table --m 2 --seed 7

Reports go to ``--output``, else to ``$NBSC_OUTPUT_DIR/<command>.<format>``
when that variable is set, else to stdout. The exit status is 0 whenever the
computation ran, including thresholds that could not be bracketed; it is 2
for bad arguments and 3 for I/O failures.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from . import complexity as cx
from .exit_awgn import DEFAULT_SAMPLES, DEFAULT_SEED, get_mi_table, mi_table_to_dict
from .protograph import CATALOG_NAMES, ProtographError, ScEnsemble, load_ensemble
from .report import emit, format_number, write_report
from .subspace_kernels import build_kernels, kernels_to_dict
from .threshold_search import (
    NotFoundWithinCap,
    SearchConfig,
    SweepItem,
    compute_threshold,
    find_w_star,
    parse_schedule,
    sweep,
)

OUTPUT_ENV = "NBSC_OUTPUT_DIR"


class ConfigError(ValueError):
    pass


def parse_int_range(text: str) -> list[int]:
    """``"4"``, ``"1,3,5"`` or ``"1..6"`` (inclusive)."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            a, b = part.split("..")
            a, b = int(a), int(b)
            if b < a:
                raise ConfigError(f"empty range {part!r}")
            out.extend(range(a, b + 1))
        elif part:
            out.append(int(part))
    if not out:
        raise ConfigError(f"empty range {text!r}")
    return out


def _common(p):
    p.add_argument("--delta", type=float, default=1e-6, help="BEC residual target (default 1e-6)")
    p.add_argument("--max-iters", type=int, default=100_000, help="iterations per evaluation (default 1e5)")
    p.add_argument("--L", type=int, default=None, help="termination length override (default: file or 100)")
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES, help="MC samples per MI table point (default 1e5)")
    p.add_argument("--seed", type=int, default=None, help=f"MC seed, required for AWGN runs (suggested {DEFAULT_SEED})")
    p.add_argument("--rate-mode", choices=("RL", "R"), default="RL",
                   help="rate for Eb/N0 normalization: terminated R_L or block b/c (default RL)")
    p.add_argument("--awgn-target", type=float, default=1e-4, help="AWGN 1 - a-posteriori MI target (default 1e-4)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", default=None, help="report path (default: $NBSC_OUTPUT_DIR or stdout)")


def _config(args, tol=None) -> SearchConfig:
    kw = dict(delta=args.delta, max_iters=args.max_iters, samples=args.samples,
              seed=args.seed if args.seed is not None else DEFAULT_SEED,
              rate_mode=args.rate_mode, L=args.L, awgn_delta=args.awgn_target)
    if tol is not None:
        kw.update(tol)
    return SearchConfig(**kw)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nbsc", description="Thresholds of non-binary spatially-coupled LDPC ensembles.",
                                 formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True)
    ens_help = f"catalog name ({', '.join(CATALOG_NAMES)}) or JSON ensemble file"

    p = sub.add_parser("bec-threshold", help="one BEC threshold")
    p.add_argument("--ensemble", required=True, help=ens_help)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--schedule", choices=("fs", "wd"), default="fs")
    p.add_argument("--window", type=int, default=None)
    p.add_argument("--tol", type=float, default=1e-4, help="bisection tolerance in erasure rate (default 1e-4)")
    _common(p)

    p = sub.add_parser("awgn-threshold", help="one AWGN threshold (Eb/N0 in dB)")
    p.add_argument("--ensemble", required=True, help=ens_help)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--schedule", choices=("fs", "wd"), default="fs")
    p.add_argument("--window", type=int, default=None)
    p.add_argument("--tol", type=float, default=0.01, help="bisection tolerance in dB (default 0.01)")
    _common(p)

    p = sub.add_parser("sweep", help="thresholds over ensembles x m x schedules")
    p.add_argument("--channel", choices=("bec", "awgn"), default="bec")
    p.add_argument("--ensembles", required=True, help="comma-separated catalog names or files")
    p.add_argument("--m", required=True, help="e.g. 1..6 or 1,3,5")
    p.add_argument("--schedules", default="fs", help="comma-separated fs / wd:<W> (default fs)")
    p.add_argument("--tol", type=float, default=None, help="bisection tolerance (default 1e-4 BEC, 0.01 dB AWGN)")
    p.add_argument("--workers", type=int, default=None, help="worker processes (default: available CPUs)")
    p.add_argument("--checkpoint", default=None, help="JSON-lines file keeping finished items across restarts")
    _common(p)

    p = sub.add_parser("wstar", help="smallest window within a fraction of the FS threshold for all m")
    p.add_argument("--ensemble", required=True, help=ens_help)
    p.add_argument("--channel", choices=("bec", "awgn"), default="bec")
    p.add_argument("--m", required=True)
    p.add_argument("--fraction", type=float, default=0.03, help="allowed threshold loss (default 0.03)")
    p.add_argument("--ladder", default=None, help="window sizes to try (default 2..40 then L+ms)")
    p.add_argument("--tol", type=float, default=None)
    _common(p)

    p = sub.add_parser("complexity", help="per-window decoding complexity order")
    p.add_argument("--dv", type=int, default=None)
    p.add_argument("--c", type=int, default=2)
    p.add_argument("--window", type=int, default=None)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--M", type=int, default=None, help="lifting factor; adds latency columns")
    p.add_argument("--compare", default=None,
                   help="rank operating points NAME:W:m,... using their BEC windowed thresholds")
    p.add_argument("--tol", type=float, default=1e-4)
    _common(p)

    p = sub.add_parser("dump-kernels", help="subspace-dimension kernels for one m")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--output", default=None)

    p = sub.add_parser("dump-mi-table", help="Monte-Carlo J_m table")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--output", default=None)
    return ap


def _out_path(args, ext: str) -> str | None:
    if getattr(args, "output", None):
        return args.output
    base = os.environ.get(OUTPUT_ENV)
    if base:
        os.makedirs(base, exist_ok=True)
        return os.path.join(base, f"{args.command}.{ext}")
    return None


def _need_seed(args, channel):
    if channel == "awgn" and args.seed is None:
        raise ConfigError("AWGN runs need an explicit --seed")


def _check_ensemble(name):
    if name not in CATALOG_NAMES and not os.path.exists(name):
        raise ConfigError(f"unknown ensemble {name!r}")


def _single(args, channel):
    _need_seed(args, channel)
    _check_ensemble(args.ensemble)
    if args.schedule == "wd" and args.window is None:
        raise ConfigError("--schedule wd needs --window")
    key = "tol_bec" if channel == "bec" else "tol_awgn_db"
    cfg = _config(args, {key: args.tol})
    res = compute_threshold(SweepItem(args.ensemble, args.m, args.schedule, args.window, channel), cfg)
    if res.error:
        print(f"warning: {res.error}", file=sys.stderr)
    return emit([res], args.format), args.format


def _sweep(args):
    _need_seed(args, args.channel)
    names = [x.strip() for x in args.ensembles.split(",") if x.strip()]
    for name in names:
        _check_ensemble(name)
    ms = parse_int_range(args.m)
    try:
        scheds = [parse_schedule(s) for s in args.schedules.split(",") if s.strip()]
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    items = [SweepItem(n, m, s, W, args.channel) for n in names for s, W in scheds for m in ms]
    tol = {}
    if args.tol is not None:
        tol["tol_bec" if args.channel == "bec" else "tol_awgn_db"] = args.tol
    results = sweep(items, _config(args, tol), workers=args.workers, checkpoint=args.checkpoint)
    for res in results:
        if res.error:
            print(f"warning: {res.ensemble} m={res.m} {res.schedule} W={res.W}: {res.error}", file=sys.stderr)
    return emit(results, args.format), args.format


def _wstar(args):
    _need_seed(args, args.channel)
    _check_ensemble(args.ensemble)
    ens = load_ensemble(args.ensemble, args.L)
    if not isinstance(ens, ScEnsemble):
        raise ConfigError("W* needs a coupled ensemble")
    ms = parse_int_range(args.m)
    ladder = parse_int_range(args.ladder) if args.ladder else None
    tol = {}
    if args.tol is not None:
        tol["tol_bec" if args.channel == "bec" else "tol_awgn_db"] = args.tol
    cfg = _config(args, tol)
    try:
        ws = find_w_star(ens, args.channel, ms, args.fraction, ladder, config=cfg)
        W, note = ws.W, ""
        fs, crit = ws.fs, ws.criterion
    except NotFoundWithinCap as exc:
        W, note, fs, crit = None, str(exc), {}, {}
    rows = [{"ensemble": args.ensemble, "channel": args.channel, "m": m, "fs_threshold": fs.get(m),
             "criterion": crit.get(m), "fraction": args.fraction, "W_star": W} for m in ms]
    if note:
        print(f"warning: {note}", file=sys.stderr)
    return _table(rows, args.format), args.format


def _table(rows, fmt):
    if fmt == "json":
        return json.dumps([{k: (float(format_number(v)) if isinstance(v, float) else v) for k, v in r.items()}
                           for r in rows], indent=2) + "\n"
    buf = io.StringIO()
    if rows:
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(rows[0].keys())
        for r in rows:
            w.writerow([format_number(v) for v in r.values()])
    return buf.getvalue()


def _complexity(args):
    if args.compare:
        cfg = _config(args, {"tol_bec": args.tol})
        points = []
        for spec in args.compare.split(","):
            try:
                name, W, m = spec.split(":")
                W, m = int(W), int(m)
            except ValueError as exc:
                raise ConfigError(f"bad operating point {spec!r}; expected NAME:W:m") from exc
            _check_ensemble(name)
            ens = load_ensemble(name, args.L)
            res = compute_threshold(SweepItem(name, m, "wd", W, "bec"), cfg)
            blk = ens.block if isinstance(ens, ScEnsemble) else ens
            points.append(cx.OperatingPoint(name, blk.dv, blk.n_vars, m, W, res.threshold, res.capacity_gap))
        return _table(cx.compare_operating_points(points), args.format), args.format
    if None in (args.dv, args.window, args.m):
        raise ConfigError("complexity needs --dv, --window and --m (or --compare)")
    row = {"dv": args.dv, "c": args.c, "W": args.window, "m": args.m, "q": 1 << args.m,
           "order": cx.complexity_order(args.dv, args.c, args.window, args.m)}
    if args.M is not None:
        row["M_block"] = cx.equal_latency(args.window, args.M)
        row["W_b"] = cx.latency_bits(args.window, args.c, args.M, args.m)
    return _table([row], args.format), args.format


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "bec-threshold":
            text, ext = _single(args, "bec")
        elif args.command == "awgn-threshold":
            text, ext = _single(args, "awgn")
        elif args.command == "sweep":
            text, ext = _sweep(args)
        elif args.command == "wstar":
            text, ext = _wstar(args)
        elif args.command == "complexity":
            text, ext = _complexity(args)
        elif args.command == "dump-kernels":
            text, ext = json.dumps(kernels_to_dict(build_kernels(args.m)), indent=1) + "\n", "json"
        elif args.command == "dump-mi-table":
            text, ext = json.dumps(mi_table_to_dict(get_mi_table(args.m, args.samples, args.seed))) + "\n", "json"
        else:  # pragma: no cover - argparse rejects unknown commands
            parser.error(f"unknown command {args.command}")
    except (ConfigError, ProtographError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        write_report(text, _out_path(args, ext))
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
