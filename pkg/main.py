"""
Command-line entry point.

    qwalk line --steps 200 --coin hadamard --init 0.7071067811865476 0 0 0.7071067811865476
    qwalk circle --steps 100 --M 30 --config presets/fig2.env
    qwalk galton --steps 20 --delta pi/5 --f 5
    qwalk cavity --steps 50 --design dual-ring-path --f 5 --topology circle --M 30
    qwalk classical --steps 200
    qwalk sweep --mode line --parameter delta --values 0 pi/10 pi/5 3pi/10 --steps 200 \
        --init 0.7071067811865476 0 0.7071067811865476 0

Exit codes: 0 success, 2 configuration error, 3 I/O error.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Optional, Sequence

from app_config import AppConfig, config
from exceptions import ConfigurationError, OutputError, QuantumWalkError
from models import RunMode, SweepConfig, SweepParameter
from utils.csv_output import write_result
from utils.run_config import build_run_config, load_manifest, merge_sources, parse_angle
from utils.runner import execute, run_sweep

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, default=None, metavar="FILE", help="KEY=value run manifest")
    parser.add_argument("--steps", default=None, help="number of walk steps n")
    parser.add_argument("--output", default=None, metavar="PATH", help="CSV path (default: standard output)")
    parser.add_argument(
        "--compare-classical",
        action="store_true",
        default=None,
        help="report the total-variation distance to the classical walk",
    )


def _add_walk(parser: argparse.ArgumentParser, coin: bool = True) -> None:
    if coin:
        parser.add_argument(
            "--coin",
            nargs="+",
            default=None,
            metavar="TOKEN",
            help="hadamard | konno a_re a_im b_re b_im Δ_re Δ_im | delta δ",
        )
    parser.add_argument("--init", nargs=4, default=None, metavar=("A_RE", "A_IM", "B_RE", "B_IM"))
    parser.add_argument("--origin", default=None)
    parser.add_argument("--ordering", choices=AppConfig.ORDERINGS, default=None)
    parser.add_argument(
        "--display-offset", action="store_true", default=None, help="write circle positions as 0..2M"
    )


def _add_topology(parser: argparse.ArgumentParser, with_choice: bool) -> None:
    if with_choice:
        parser.add_argument("--topology", choices=["line", "circle"], default=None)
    parser.add_argument("--M", dest="M", default=None, help="circle half-size (2M+1 sites)")


def _add_cavity(parser: argparse.ArgumentParser, gating: bool) -> None:
    parser.add_argument("--design", choices=AppConfig.DESIGNS, default=None)
    parser.add_argument("--f", dest="f", default=None, help="roundtrips per walk step")
    if gating:
        parser.add_argument("--gating", choices=AppConfig.GATINGS, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qwalk",
        description="Coined quantum walks on the line and circle, and their optical-cavity realisations.",
    )
    parser.add_argument("--log-level", default=None, help=f"logging level (default: {config.log_level})")
    subparsers = parser.add_subparsers(dest="command", required=True)

    line = subparsers.add_parser("line", help="walk on the infinite line")
    _add_common(line)
    _add_walk(line)

    circle = subparsers.add_parser("circle", help="walk on a circle of 2M+1 sites")
    _add_common(circle)
    _add_walk(circle)
    _add_topology(circle, with_choice=False)

    galton = subparsers.add_parser("galton", help="optical Galton board: coin U_δ on every roundtrip")
    _add_common(galton)
    _add_walk(galton, coin=False)
    galton.add_argument("--delta", default=None, help="coin angle δ (float or π-expression)")
    _add_topology(galton, with_choice=True)
    _add_cavity(galton, gating=False)

    cavity = subparsers.add_parser("cavity", help="element-level cavity simulation")
    _add_common(cavity)
    _add_walk(cavity)
    _add_topology(cavity, with_choice=True)
    _add_cavity(cavity, gating=True)

    classical = subparsers.add_parser("classical", help="classical fair-coin random walk")
    _add_common(classical)

    sweep = subparsers.add_parser("sweep", help="run a template over a list of parameter values")
    sweep.add_argument("--mode", choices=[m.value for m in RunMode], default=None)
    sweep.add_argument("--parameter", choices=[p.value for p in SweepParameter], required=True)
    sweep.add_argument("--values", nargs="*", default=[], metavar="VALUE")
    sweep.add_argument("--output-dir", type=Path, default=None, help="write one CSV per point here")
    sweep.add_argument("--aggregate", default=None, metavar="PATH", help="aggregate CSV (default: standard output)")
    _add_common(sweep)
    _add_walk(sweep)
    sweep.add_argument("--delta", default=None)
    _add_topology(sweep, with_choice=True)
    _add_cavity(sweep, gating=True)
    return parser


def _overrides(args: argparse.Namespace) -> dict[str, Any]:
    """Manifest keys set on the command line."""
    coin = getattr(args, "coin", None)
    if getattr(args, "delta", None) is not None:
        coin = ["delta", args.delta]
    return {
        "MODE": getattr(args, "mode", None),
        "STEPS": args.steps,
        "COIN": coin,
        "INIT": getattr(args, "init", None),
        "ORIGIN": getattr(args, "origin", None),
        "M": getattr(args, "M", None),
        "DESIGN": getattr(args, "design", None),
        "F": getattr(args, "f", None),
        "GATING": getattr(args, "gating", None),
        "ORDERING": getattr(args, "ordering", None),
        "OUTPUT": args.output,
        "COMPARE_CLASSICAL": args.compare_classical,
        "DISPLAY_OFFSET": getattr(args, "display_offset", None),
        "TOPOLOGY": getattr(args, "topology", None),
    }


def _sweep_values(parameter: SweepParameter, raw: Sequence[str]) -> tuple[float, ...]:
    tokens = [t for item in raw for t in item.replace(",", " ").split()]
    if parameter == SweepParameter.DELTA:
        return tuple(parse_angle(t, "--values") for t in tokens)
    try:
        return tuple(float(t) for t in tokens)
    except ValueError as e:
        raise ConfigurationError("--values", str(e))


def _run_command(args: argparse.Namespace) -> int:
    manifest = load_manifest(args.config) if args.config else {}
    values = merge_sources(manifest, _overrides(args))

    if args.command == "sweep":
        values.setdefault("MODE", RunMode.LINE.value)
        values.pop("OUTPUT", None)
        if args.parameter == SweepParameter.DELTA.value:
            values.setdefault("COIN", ["delta", "0"])
        template = build_run_config(values)
        parameter = SweepParameter(args.parameter)
        aggregate = None if args.aggregate in (None, "-") else Path(args.aggregate)
        sweep = SweepConfig(template, parameter, _sweep_values(parameter, args.values), args.output_dir, aggregate)
        runs = run_sweep(sweep)
        failed = [run for run in runs if not run.ok]
        for run in failed:
            print(f"❌ {parameter.value}={run.value!r}: {run.error}", file=sys.stderr)
        return EXIT_CONFIG if runs and len(failed) == len(runs) else EXIT_OK

    run = build_run_config(values, RunMode(args.command))
    write_result(execute(run))
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = (args.log_level or config.log_level).upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )
    try:
        return _run_command(args)
    except OutputError as e:
        logger.error(f"❌ {e}")
        return EXIT_IO
    except QuantumWalkError as e:
        logger.error(f"❌ {e}")
        return EXIT_CONFIG


def cli() -> None:
    sys.exit(main())


if __name__ == "__main__":
    cli()
