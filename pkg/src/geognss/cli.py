"""Command-line entry points.

Subcommands: simulate (full run), availability (threshold sweep),
gdop-sweep (95% GDOP vs threshold), validate (load and echo a config).
Exit codes: 0 success, 1 validation/usage error, 2 runtime error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import engine
from .errors import GeoGnssError, MissingFile, ParseError, ValidationError
from .scenario import load_scenario


def _parse_sweep(text: str) -> list[float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise ValidationError("--sweep-threshold", f"expected lo:hi:step, got {text!r}")
    try:
        lo, hi, step = (float(p) for p in parts)
    except ValueError as exc:
        raise ValidationError("--sweep-threshold", str(exc)) from exc
    if step <= 0 or hi < lo:
        raise ValidationError("--sweep-threshold", f"need lo <= hi and step > 0, got {text!r}")
    out, v = [], lo
    while v <= hi + 1e-9:
        out.append(round(v, 9))
        v += step
    return out


def _print_table(table: dict, stream) -> None:
    keys = list(table)
    print(",".join(keys), file=stream)
    for row in zip(*(table[k] for k in keys)):
        print(",".join("" if v is None else engine.fmt(v) for v in row), file=stream)


def _write_table(table: dict, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    keys = list(table)
    rows = [",".join(keys)]
    for row in zip(*(table[k] for k in keys)):
        rows.append(",".join("" if v is None else engine.fmt(v) for v in row))
    path.write_text("\n".join(rows) + "\n", encoding="ascii", newline="\n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="geognss",
        description="GNSS reception simulator for geostationary spacecraft")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a scenario and emit CSV time series")
    sim.add_argument("--scenario", required=True, help="scenario TOML file")
    sim.add_argument("--output-dir", default=None, help="override the scenario output_dir")

    avail = sub.add_parser("availability", help="availability of service vs acquisition threshold")
    avail.add_argument("--scenario", required=True)
    avail.add_argument("--sweep-threshold", required=True, metavar="LO:HI:STEP",
                       help="acquisition thresholds in dBHz, e.g. 25:35:1")
    avail.add_argument("--output-dir", default=None, help="also write availability_sweep.csv")

    gdop = sub.add_parser("gdop-sweep", help="95%% GDOP vs acquisition threshold")
    gdop.add_argument("--scenario", required=True)
    gdop.add_argument("--sweep-threshold", required=True, metavar="LO:HI:STEP")
    gdop.add_argument("--output-dir", default=None, help="also write gdop_sweep.csv")

    val = sub.add_parser("validate", help="load a scenario and echo the normalized config")
    val.add_argument("--scenario", required=True)
    return parser


def cli_main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1

    try:
        config = load_scenario(args.scenario)
    except (ParseError, ValidationError, MissingFile) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    try:
        if args.command == "validate":
            print(json.dumps(config.echo, indent=2))
            return 0

        if args.command == "simulate":
            report = engine.run(config, Path(args.output_dir) if args.output_dir else None)
            summary = {k: v for k, v in report.items() if k != "config_echo"}
            print(json.dumps(summary, indent=2))
            return 0

        thresholds = _parse_sweep(args.sweep_threshold)
        sim = engine.simulate(config)
        if args.command == "availability":
            table = engine.availability_sweep(sim, thresholds)
            name = "availability_sweep.csv"
        else:
            table = engine.gdop_sweep(sim, thresholds)
            name = "gdop_sweep.csv"
        _print_table(table, sys.stdout)
        if args.output_dir:
            _write_table(table, Path(args.output_dir) / name)
        return 0
    except (ParseError, ValidationError, MissingFile) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except GeoGnssError as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
