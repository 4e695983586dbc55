#!/usr/bin/env python3
"""
su11sim command-line interface

Subcommands:
    jsa       build one JSA and write its matrix, sidecar and JSI heat map
    schmidt   decompose one JSA and export eigenvalues and modes
    sweep     phase or gain sweep of the configured device
    validate  run the acceptance suite
    compare   run several configurations and overlay the results

Exit codes: 0 success, 1 compute failure, 2 configuration error.
"""

import argparse
import hashlib
import json
import logging
import math
import os
import re
import sys
from pathlib import Path
from typing import List, Optional

import numpy as np
import pandas as pd

from su11sim.config import settings
from su11sim.config.run_config import RunConfig, config_hash, load_run_config
from su11sim.errors import ConfigError, Su11Error
from su11sim.jsa.builder import build_jsa
from su11sim.jsa.export import export_jsa
from su11sim.phasematch.mismatch import ModulatorSpec, Variant
from su11sim.plots.svg import render_lines, write_svg
from su11sim.schmidt.calibration import calibrate_gain
from su11sim.schmidt.export import export_schmidt
from su11sim.sweep_engine.context import build_context
from su11sim.sweep_engine.engine import run_gain_sweep, run_phase_sweep
from su11sim.sweep_engine.results import FLOAT_FORMAT, write_outputs
from su11sim.sweep_engine.worker import decompose_at
from su11sim.utils.logging_config import setup_logging
from su11sim.utils.validators import parse_gamma_range, validate_output_dir
from su11sim.validation.acceptance import CRITERIA, format_report, run_acceptance

logger = logging.getLogger(__name__)

_PHI_PATTERN = re.compile(r"^\s*([0-9.eE+-]*)\s*\*?\s*pi\s*(?:/\s*([0-9.eE+-]+))?\s*$")


def parse_phi(text: str) -> float:
    """Phase from a number or a multiple of pi such as ``pi/2`` or ``3pi/2``."""
    try:
        return float(text)
    except ValueError:
        pass
    match = _PHI_PATTERN.match(text.lower())
    if not match:
        raise argparse.ArgumentTypeError(f"cannot read phase '{text}'")
    factor = float(match.group(1)) if match.group(1) not in ("", "+", "-") else float(match.group(1) + "1")
    divisor = float(match.group(2)) if match.group(2) else 1.0
    return factor * math.pi / divisor


def gammas_from_range(spec: str) -> List[float]:
    parsed = parse_gamma_range(spec)
    if not parsed["valid"]:
        raise ConfigError(f"--gammas '{spec}': {parsed['error']}", code="bad_gamma_range")
    if parsed["scale"] == "log":
        values = np.geomspace(parsed["start"], parsed["stop"], parsed["count"])
    else:
        values = np.linspace(parsed["start"], parsed["stop"], parsed["count"])
    return [float(v) for v in values]


def requested_gammas(args) -> Optional[List[float]]:
    if getattr(args, "gammas", None):
        return gammas_from_range(args.gammas)
    if getattr(args, "gamma", None):
        return list(args.gamma)
    return None


def load_config(path: Optional[str], overrides: List[str]) -> RunConfig:
    if path is None and os.path.isfile(settings.default_config):
        path = settings.default_config
    return load_run_config(path, overrides)


def output_dir(args, config: RunConfig) -> str:
    path = args.out or config.output_dir or settings.output_dir
    check = validate_output_dir(path)
    if not check["valid"]:
        raise ConfigError(f"output directory {path}: {check['error']}", code="bad_output_dir")
    return check["path"]


def cmd_jsa(args) -> int:
    config = load_config(args.config, args.set)
    out = output_dir(args, config)
    context = build_context(config, filter_option="none")
    modulator = ModulatorSpec(phi=args.phi, chirp_slope=config.modulator.chirp_slope)
    jsa = build_jsa(context.model, context.geometry, context.pump, modulator, context.grid)
    digest = config_hash(config)
    paths = export_jsa(jsa, out, f"{digest}_jsa_phi{modulator.phi:.4f}", config_hash=digest)
    for kind, path in paths.items():
        print(f"{kind}: {path}")
    return 0


def cmd_schmidt(args) -> int:
    config = load_config(args.config, args.set)
    out = output_dir(args, config)
    context = build_context(config, filter_option="none")
    variant = Variant(config.device.variant)
    dec = decompose_at(context, args.phi, variant)
    gamma = config.gammas[0]
    calibration = calibrate_gain(decompose_at(context, 0.0, variant), gamma)
    dec = dec.with_gain(calibration.gain(dec))
    digest = config_hash(config)
    paths = export_schmidt(
        dec, out, f"{digest}_schmidt_phi{dec.phi:.4f}", gamma=gamma, n_modes=args.modes, config_hash=digest
    )
    for kind, path in paths.items():
        print(f"{kind}: {path}")
    return 0


def _run(config: RunConfig, args):
    runner = run_gain_sweep if args.mode == "gain" else run_phase_sweep
    return runner(config, gammas=requested_gammas(args), filter_option=args.filter, workers=args.workers)


def cmd_sweep(args) -> int:
    config = load_config(args.config, args.set)
    out = output_dir(args, config)
    result = _run(config, args)
    paths = write_outputs(result, out)
    for kind, path in paths.items():
        print(f"{kind}: {path}")
    for g in result.summary.gammas:
        minimum = "inf" if g.min_normalized is None else f"{g.min_normalized:.6g}"
        print(f"gamma={g.gamma:g}  min normalized={minimum}  band width={g.band_width:.4f}")
    return 0


def cmd_validate(args) -> int:
    config = load_config(args.config, args.set)
    out = output_dir(args, config)
    unknown = [key for key in (args.only or []) if key not in CRITERIA]
    if unknown:
        raise ConfigError(f"unknown criteria: {', '.join(unknown)}; known: {', '.join(CRITERIA)}", code="bad_criterion")
    report = run_acceptance(config, workers=args.workers, only=args.only)
    print(format_report(report))
    report_path = Path(out) / f"{report.config_hash}_validate.json"
    report_path.write_text(report.model_dump_json(indent=2))
    print(f"report: {report_path}")
    return 0 if report.passed else 1


def cmd_compare(args) -> int:
    configs = [(path, load_config(path, args.set)) for path in args.configs]
    out = output_dir(args, configs[0][1])
    frames, series, summaries = [], [], []
    for path, config in configs:
        result = _run(config, args)
        label = Path(path).stem
        frame = result.frame.copy()
        frame.insert(0, "config", result.config_hash)
        frame.insert(1, "label", label)
        frames.append(frame)
        summaries.append(result.summary.model_dump(mode="json"))
        if args.mode == "gain":
            series.append((label, list(result.frame["gamma"]), list(result.frame["min_normalized"])))
        else:
            gamma, (curve, _) = next(iter(result.curves.items()))
            series.append((f"{label} gamma={gamma:g}", list(curve.phis), list(curve.normalized)))

    digest = hashlib.sha256("".join(s["config_hash"] for s in summaries).encode("utf-8")).hexdigest()[:12]
    stem = Path(out) / f"{digest}_compare_{args.mode}"
    combined = pd.concat(frames, ignore_index=True)
    combined.to_csv(f"{stem}.csv", index=False, float_format=FLOAT_FORMAT)
    Path(f"{stem}.json").write_text(json.dumps(summaries, indent=2))
    if args.mode == "gain":
        figure = render_lines(series, "Minimum normalized sensitivity", "gamma", "min dphi / dphi_SNL", reference_y=1.0, log_y=True)
    else:
        figure = render_lines(series, "Normalized sensitivity", "phi (rad)", "dphi / dphi_SNL", reference_y=1.0, log_y=True, y_cap=1e3)
    write_svg(f"{stem}.svg", figure)
    for ext in ("csv", "json", "svg"):
        print(f"{ext}: {stem}.{ext}")
    return 0


def _common(parser: argparse.ArgumentParser, config: bool = True) -> None:
    if config:
        parser.add_argument("-c", "--config", default=None, help="Run configuration JSON (default: built-in defaults)")
    parser.add_argument(
        "--set",
        action="append",
        default=[],
        metavar="KEY.PATH=VALUE",
        help="Override a config field, e.g. --set device.gap_m=0.01 (repeatable)",
    )
    parser.add_argument("--out", default=None, help="Output directory")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="Increase log verbosity")
    parser.add_argument("--log-format", choices=["text", "json"], default=None, help="Log output format")
    parser.add_argument("--workers", type=int, default=None, help=f"Worker threads (default: SU11_THREADS={settings.threads})")


def _sweep_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--mode", choices=["phase", "gain"], default="phase", help="Sweep kind")
    parser.add_argument("--gamma", type=float, action="append", help="Gain parameter (repeatable)")
    parser.add_argument("--gammas", default=None, help="Gain range start:stop[:lin|log[:count]]")
    parser.add_argument(
        "--filter",
        default=None,
        help="Band-pass filter: 'central-lobe', 'none' or a half-width in rad/s",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="su11sim",
        description="su11sim - multimode integrated SU(1,1) interferometer simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("jsa", help="Build one JSA and write its heat map")
    _common(p)
    p.add_argument("--phi", type=parse_phi, default=0.0, help="Modulator phase (number or e.g. pi/2)")
    p.set_defaults(func=cmd_jsa)

    p = sub.add_parser("schmidt", help="Schmidt-decompose one JSA")
    _common(p)
    p.add_argument("--phi", type=parse_phi, default=0.0, help="Modulator phase (number or e.g. pi/2)")
    p.add_argument("--modes", type=int, default=8, help="Mode functions to export")
    p.set_defaults(func=cmd_schmidt)

    p = sub.add_parser("sweep", help="Phase or gain sweep")
    _common(p)
    _sweep_options(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("validate", help="Run the acceptance suite")
    _common(p)
    p.add_argument("--only", action="append", default=None, help=f"Criterion to run (repeatable): {', '.join(CRITERIA)}")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("compare", help="Run several configurations and overlay them")
    _common(p, config=False)
    _sweep_options(p)
    p.add_argument("configs", nargs="+", help="Run configuration files")
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    level = "DEBUG" if args.verbose else settings.log_level
    setup_logging(
        log_level=level,
        log_format=args.log_format or settings.log_format,
        log_dir=settings.log_dir,
        backup_count=settings.log_backup_count,
    )

    try:
        return args.func(args)
    except ConfigError as e:
        logger.error(f"Configuration error: {e}")
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except Su11Error as e:
        logger.error(f"Computation failed: {e}")
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
