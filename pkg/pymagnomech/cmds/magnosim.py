#!/usr/bin/env python

"""
magnosim: probe spectra, delay surfaces and the verification suite of the
atom opto-magnomechanical chain.

Exit codes: 0 success, 1 failed verification, 2 configuration or usage
error, 3 runtime error.
"""

import argparse
import logging
import os
import sys

import numpy as np

from pymagnomech.SystemConfig import CONVENTIONS, ConfigError, default_config, load_config
from pymagnomech.helpers import presets
from pymagnomech.helpers import verify
from pymagnomech.spectra import SweepGrid
from pymagnomech.spectra.DelaySurface import delay_surface
from pymagnomech.spectra.SpectrumTable import sweep_spectrum
from pymagnomech.spectra.features import FEATURE_COLUMNS, extract_features
from pymagnomech.util.RunManifest import RunManifest
from pymagnomech.util.plot_script import KINDS, emit_plot_script
from pymagnomech.util.table_io import spectrum_csv_text, surface_csv_text, write_file, write_json


EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG = 2
EXIT_RUNTIME = 3

LOG_FORMAT = ('%(asctime)s [%(process)d] [%(levelname)s] '
              '%(filename)s:%(lineno)d %(message)s')


class UsageError(ValueError):
    pass


def log_file(logPath, level=logging.NOTSET):
    new_log = logging.FileHandler(logPath)
    new_log.setLevel(level)
    new_log.setFormatter(logging.Formatter(LOG_FORMAT))
    logging.getLogger().addHandler(new_log)


def parse_eta(text):
    """
    "LO..HI:N" -> numpy array of N values. N defaults to 1 when LO == HI,
    otherwise to 200.
    """
    body, _, count = text.partition(":")
    lo, sep, hi = body.partition("..")
    try:
        if not sep:
            raise ValueError(text)
        lo, hi = float(lo), float(hi)
        n = int(count) if count else (1 if lo == hi else 200)
    except ValueError:
        raise UsageError("bad --eta %r, expected LO..HI:N" % text)
    if n < 1 or lo < 0 or hi < lo:
        raise UsageError("bad --eta %r, need 0 <= LO <= HI and N >= 1" % text)
    return np.linspace(lo, hi, n)


def resolve_config(args, default_preset=None):
    """
    Return (config, preset dict or None).
    """
    base = load_config(args.config) if args.config else default_config()
    name = args.preset or (None if args.config else default_preset)
    p = None
    if name:
        p = presets.preset(name)
        config = presets.preset_config(name, args.convention, base)
    else:
        config = base.with_convention(args.convention) if args.convention else base
    return config, p


def check_grid_points(n):
    if n is not None and n < 2:
        raise UsageError("--grid-points must be at least 2, got %d" % n)
    return n


def ensure_dir(path):
    if not os.path.isdir(path):
        os.makedirs(path)
    return path


def cmd_spectrum(args, argv):
    config, p = resolve_config(args)
    if p and p["KIND"] != "spectrum":
        raise UsageError("preset %s is not a spectrum preset" % args.preset)
    column = args.column or (p["COLUMN"] if p else "absorption")
    grid = SweepGrid.for_config(config, n=check_grid_points(args.grid_points))
    table = sweep_spectrum(config, grid, workers=args.workers)
    report = extract_features(table, prominence=args.prominence, column=column)

    out = ensure_dir(args.out)
    manifest = RunManifest(
        "spectrum", argv, config=config, grid=grid.as_dict(),
        assumptions=p["ASSUMPTIONS"] if p else [],
        extra=dict(preset=args.preset, column=column, prominence=args.prominence))
    paths = [
        write_file(os.path.join(out, "spectrum.csv"), spectrum_csv_text(table)),
        write_json(os.path.join(out, "features.json"), report.as_dict()),
    ]
    if args.emit_plot:
        paths.append(emit_plot_script(paths[0], args.emit_plot))
    for path in paths:
        manifest.add_file(path)
    manifest.write(out)
    print("%d rows, %d window(s) in %s; written to %s" % (len(table), report.window_count, column, out))
    return EXIT_OK


def cmd_delay_surface(args, argv):
    config, p = resolve_config(args, default_preset="fig6")
    fig6 = presets.preset("fig6")
    if p and p["KIND"] != "delay_surface":
        raise UsageError("preset %s is not a delay surface preset" % args.preset)
    if not config.couplings.g_c > 0:
        raise UsageError("delay surface needs g_c > 0; g_m is set to eta * g_c")
    if args.eta:
        etas = parse_eta(args.eta)
    else:
        lo, hi, n = fig6["ETA"]
        etas = np.linspace(lo, hi, n)
    points = check_grid_points(args.grid_points) or fig6["DELTA_POINTS"]
    grid = SweepGrid.uniform(config.omega_b, points, fig6["HALF_WIDTH"])
    surface = delay_surface(config, etas, grid, workers=args.workers)

    out = ensure_dir(args.out)
    summary = surface.summary()
    summary["per_eta"] = [dict(eta=e, min_tau_s=lo, max_tau_s=hi) for e, lo, hi in surface.per_eta_extremes()]
    manifest = RunManifest(
        "delay-surface", argv, config=config, grid=grid.as_dict(),
        assumptions=p["ASSUMPTIONS"] if p else [],
        extra=dict(preset=args.preset or (None if args.config else "fig6"),
                   eta=[float(etas[0]), float(etas[-1]), len(etas)]))
    paths = [
        write_file(os.path.join(out, "surface.csv"), surface_csv_text(surface)),
        write_json(os.path.join(out, "summary.json"), summary),
    ]
    if args.emit_plot:
        paths.append(emit_plot_script(paths[0], args.emit_plot))
    for path in paths:
        manifest.add_file(path)
    manifest.write(out)
    print("max tau %.4g s, min tau %.4g s over %d x %d; written to %s" % (
        summary["max_tau_s"], summary["min_tau_s"], len(etas), len(grid), out))
    return EXIT_OK


def format_check(r):
    status = "PASS" if r.passed else ("INFO" if r.informational else "FAIL")
    measured = "" if r.measured is None else " measured=%s" % (r.measured,)
    tolerance = "" if r.tolerance is None else " tolerance=%s" % (r.tolerance,)
    return "%s  %s%s%s  %s" % (status, r.name, measured, tolerance, r.detail)


def cmd_verify(args, argv):
    results = verify.run_all(args.convention or "standard", long_run=args.long_run, seed=args.seed)
    for r in results:
        print(format_check(r))
    ok = verify.all_passed(results)
    print("%d checks, %s" % (len(results), "all passed" if ok else "FAILURES"))
    return EXIT_OK if ok else EXIT_VERIFY_FAILED


def cmd_plot(args, argv):
    path = emit_plot_script(args.table, args.kind, args.out)
    print(path)
    return EXIT_OK


def add_scenario_arguments(parser):
    parser.add_argument("-c", "--config", help="JSON config file (rates and couplings in Hz)")
    parser.add_argument("-p", "--preset", help="named scenario: %s" % ", ".join(sorted(presets.PRESETS)))
    parser.add_argument("-o", "--out", default=".", help="output directory")
    parser.add_argument("--convention", choices=CONVENTIONS, help="sign convention")
    parser.add_argument("--emit-plot", choices=KINDS, help="also write a plot script of this kind")


def create_parser():
    parser = argparse.ArgumentParser(description="Probe response of the atom opto-magnomechanical chain.")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    parser.add_argument("-l", "--log-file", help="Path to log file", default=None)
    parser.add_argument("-w", "--workers", type=int, default=1, help="worker threads for sweeps")
    sub = parser.add_subparsers(dest="command")
    sub.required = True

    p = sub.add_parser("spectrum", help="sweep the probe detuning")
    add_scenario_arguments(p)
    p.add_argument("-n", "--grid-points", type=int, default=SweepGrid.DEFAULT_POINTS,
                   help="uniform points over delta/omega_b in [0.5, 1.5] before center refinement")
    p.add_argument("--prominence", type=float, help="feature prominence (default 0.1 x max)")
    p.add_argument("--column", choices=FEATURE_COLUMNS, help="column to extract features from")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("delay-surface", help="group delay over eta = g_m/g_c and delta")
    add_scenario_arguments(p)
    p.add_argument("-n", "--grid-points", type=int, help="delta points")
    p.add_argument("--eta", help="LO..HI:N")
    p.set_defaults(func=cmd_delay_surface)

    p = sub.add_parser("verify", help="run the invariant suite")
    p.add_argument("--convention", choices=CONVENTIONS, help="sign convention")
    p.add_argument("--long-run", action="store_true", help="include the full-stiffness oracle check")
    p.add_argument("--seed", type=int, default=verify.DEFAULT_SEED)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("plot", help="write a plot script for a table")
    p.add_argument("table", help="spectrum.csv or surface.csv")
    p.add_argument("-k", "--kind", choices=KINDS, required=True)
    p.add_argument("-o", "--out", help="script path")
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    args = create_parser().parse_args(argv)

    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO, format=LOG_FORMAT)
    logging.getLogger("asyncio").setLevel(logging.INFO)
    if args.log_file:
        log_file(args.log_file)

    try:
        return args.func(args, argv)
    except (ConfigError, UsageError, presets.UnknownPresetError) as ex:
        logging.error("%s", ex)
        for d in getattr(ex, "diagnostics", []):
            logging.error("  %s %s: %s", d.level, d.field, d.message)
        return EXIT_CONFIG
    except Exception as ex:
        logging.exception("%s failed: %s", args.command, ex)
        return EXIT_RUNTIME


if __name__ == '__main__':
    sys.exit(main())
