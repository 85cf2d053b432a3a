#!/usr/bin/env python3
"""
Command line front end of the Paraboloid Float toolkit

    python cli.py solve --base-angle 74.33 --density 0.51
    python cli.py classify --axis 3.17690918 --X -1.03304236 --b -1.12424322 --density 0.51
    python cli.py sweep --axis 2.5 --step 0.01 --format csv --output diagram.csv
    python cli.py region --axis 2.5

Results go to stdout (or --output), logging to stderr. Exit codes: 0 success,
1 unexpected error, 2 invalid arguments, 3 no candidate converged.
"""

import argparse
import logging
import sys
from typing import Any, Optional

from config import DEFAULT_SWEEP_STEP, SWEEP_WORKERS, __version__
from tools import ClassifyTool, RegionTool, SolveTool, SweepTool
from tools.base import BaseTool
from tools.models import EXIT_CODES, ToolOutput
from utils import configure_logging

logger = logging.getLogger("cli")

COMMANDS: dict[str, BaseTool] = {
    "solve": SolveTool(),
    "classify": ClassifyTool(),
    "sweep": SweepTool(),
    "region": RegionTool(),
}


def _add_common(parser: argparse.ArgumentParser, default_format: str = "table") -> None:
    shape = parser.add_mutually_exclusive_group(required=True)
    shape.add_argument("--axis", type=float, help="Axis length a of the segment {x² + y² <= z <= a}")
    shape.add_argument("--base-angle", type=float, help="Base angle φ in degrees, a = tan²(φ)/4")
    parser.add_argument("--format", choices=("table", "csv", "json"), default=default_format, help="Output format")
    parser.add_argument("-o", "--output", default=None, help="Write the result to this file instead of stdout")
    parser.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR (default LOG_LEVEL)")


def _add_sweep_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--step", type=float, default=DEFAULT_SWEEP_STEP, help="Spacing of the X grid")
    parser.add_argument(
        "--refine",
        action=argparse.BooleanOptionalAction,
        default=True,
        help="Re-sample steep branch segments at step/100",
    )
    parser.add_argument("--workers", type=int, default=SWEEP_WORKERS, help="Threads evaluating the X grid")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="paraboloid-float", description="Floating positions of a homogeneous paraboloid segment"
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    solve = commands.add_parser("solve", help="Every equilibrium at one density")
    _add_common(solve)
    solve.add_argument("--density", type=float, required=True, help="Relative density σ in (0, 1)")
    _add_sweep_options(solve)
    solve.add_argument("--tolerance", type=float, default=None, help="Residual bound on |E| and |F|/V")

    classify = commands.add_parser("classify", help="Conditions and stability at one position")
    _add_common(classify)
    classify.add_argument("--X", type=float, required=True, help="Waterline abscissa, -√a < X < √a")
    classify.add_argument("--b", type=float, required=True, help="Waterplane slope, b < 0")
    classify.add_argument("--density", type=float, required=True, help="Relative density σ in (0, 1)")
    classify.add_argument("--side", choices=("left", "right"), default="left", help="Dry side of the waterplane")

    sweep = commands.add_parser("sweep", help="Branch diagram data of the equilibrium condition")
    _add_common(sweep, default_format="csv")
    _add_sweep_options(sweep)
    sweep.add_argument(
        "--classify",
        action=argparse.BooleanOptionalAction,
        default=True,
        help="Attach a stability verdict to every point",
    )

    region = commands.add_parser("region", help="Abscissae without a non-archimedean equilibrium")
    _add_common(region)
    return parser


def tool_arguments(args: argparse.Namespace) -> dict[str, Any]:
    """Translate parsed flags into the tool request fields"""
    arguments: dict[str, Any] = {"format": args.format}
    if args.axis is not None:
        arguments["axis"] = args.axis
    else:
        arguments["base_angle"] = args.base_angle
    if args.command in ("solve", "sweep"):
        arguments.update(step=args.step, refine=args.refine, workers=args.workers)
    if args.command == "solve":
        arguments["density"] = args.density
        if args.tolerance is not None:
            arguments["tolerance"] = args.tolerance
    elif args.command == "classify":
        arguments.update(X=args.X, b=args.b, density=args.density, side=args.side)
    elif args.command == "sweep":
        arguments["classify"] = args.classify
    return arguments


def emit(output: ToolOutput, path: Optional[str]) -> None:
    if output.status != "success" and output.status != "no_convergence":
        print(output.content, file=sys.stderr)
        return
    content = output.content or ""
    if not content.endswith("\n"):
        content += "\n"
    if path:
        with open(path, "w", encoding="utf-8") as f:
            f.write(content)
        logger.info(f"wrote {len(content)} characters to {path}")
    else:
        sys.stdout.write(content)
    if output.status == "no_convergence":
        print("no equilibrium candidate converged", file=sys.stderr)


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)
    tool = COMMANDS[args.command]
    output = tool.invoke(tool_arguments(args))
    try:
        emit(output, args.output)
    except OSError as e:
        print(f"Could not write {args.output}: {e}", file=sys.stderr)
        return EXIT_CODES["error"]
    return output.exit_code


if __name__ == "__main__":
    sys.exit(main())
