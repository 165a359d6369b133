"""
pegcalc CLI - property checks for complex pegs on history propositions

Usage:
    python -m pegcalc <command> [scenario.json] [options]

Commands:
    peg <file>          Evaluate pegs of the listed histories plus engine checks
    gleason <file>      Build Y and Z, verify theorem conditions, reconstruct, decompose
    entropy <file>      Entropy, grouping, conditional and strong-additivity checks
    compare <file>      Decoherence functional, consistency and classical reduction
    suite <file>        Every battery on one scenario
    suite --random N    Every battery on N generated scenarios

Examples:
    python -m pegcalc peg scenarios/qubit.json
    python -m pegcalc suite --random 20 --seed 7 --out report.json
    python -m pegcalc compare scenarios/classical.json --format csv

Exit status is 0 when every asserted check holds, 1 when one fails and 2
when the scenario or the run is invalid.
"""

import argparse
import sys
from pathlib import Path
from typing import List, Optional, Sequence

import structlog

from . import __version__
from .constants import DEFAULT_SAMPLES, DEFAULT_TOLERANCES
from .errors import PegCalcError
from .logconfig import configure_logging
from .order import available_orders
from .report import Report
from .scenario import ScenarioSetup, load_scenario, random_scenarios
from .suite import RunOptions, run_setups

logger = structlog.get_logger(__name__)

FILE_COMMANDS = ("peg", "gleason", "entropy", "compare")
EXIT_INVALID = 2


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="Seed for sampled checks and generated scenarios")
    common.add_argument("--tol", type=float, default=None, help="Tolerance for every asserted check")
    common.add_argument("--order", choices=available_orders(), default=None, help="Partial order on complex values")
    common.add_argument("--out", type=Path, default=None, help="Write the report here instead of stdout")
    common.add_argument("--format", choices=["json", "csv"], default="json", help="Report format")
    common.add_argument("--samples", type=int, default=DEFAULT_SAMPLES, help="Draws per sampled check")
    common.add_argument("--timings", action="store_true", help="Record wall time per check")
    common.add_argument("--jobs", type=int, default=1, help="Scenarios evaluated concurrently")
    common.add_argument("-v", "--verbose", action="count", default=0, help="Log more (repeat for debug)")

    parser = argparse.ArgumentParser(
        prog="pegcalc",
        description="Complex peg calculus for history propositions",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  pegcalc peg qubit.json                   # pegs and peg-engine checks
  pegcalc suite --random 20 --seed 7       # full battery on generated scenarios
  pegcalc entropy classical.json --format csv
        """,
    )
    parser.add_argument("--version", action="version", version=f"pegcalc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for command in FILE_COMMANDS:
        p = sub.add_parser(command, parents=[common], help=f"run the {command} checks on a scenario file")
        p.add_argument("scenario", type=Path, help="Scenario JSON file")
    suite = sub.add_parser("suite", parents=[common], help="run every battery")
    suite.add_argument("scenario", type=Path, nargs="?", help="Scenario JSON file")
    suite.add_argument("--random", type=int, default=None, metavar="N", help="Generate N scenarios from --seed")
    return parser


def run_options(args: argparse.Namespace, seed_override: bool = True) -> RunOptions:
    if args.samples < 1:
        raise PegCalcError("--samples must be positive")
    if args.tol is not None and args.tol <= 0:
        raise PegCalcError("--tol must be positive")
    return RunOptions(
        tolerances=DEFAULT_TOLERANCES.overridden(args.tol),
        samples=args.samples,
        order=args.order,
        seed=args.seed if seed_override else None,
        timings=args.timings,
    )


def load_setups(args: argparse.Namespace) -> List[ScenarioSetup]:
    random_count = getattr(args, "random", None)
    if random_count is not None:
        if args.scenario is not None:
            raise PegCalcError("give either a scenario file or --random, not both")
        if random_count < 1:
            raise PegCalcError("--random needs a positive count")
        return random_scenarios(random_count, args.seed if args.seed is not None else 0)
    if args.scenario is None:
        raise PegCalcError("a scenario file or --random N is required")
    return [load_scenario(args.scenario)]


def write_report(report: Report, fmt: str, out: Optional[Path]) -> None:
    payload = report.render(fmt)
    if out is None:
        sys.stdout.buffer.write(payload)
        sys.stdout.flush()
    else:
        out.write_bytes(payload)
        logger.info("report written", path=str(out), records=len(report.records))


def run_battery(command: str, args: argparse.Namespace, setups: List[ScenarioSetup], generated: bool = False) -> int:
    """Run one battery over ``setups`` and write its report; returns the exit status."""
    # generated scenarios carry their own seeds; --seed only picked them
    options = run_options(args, seed_override=not generated)
    report = run_setups(command, setups, options, __version__, jobs=max(1, args.jobs), seed=args.seed)
    write_report(report, args.format, args.out)
    for record in report.failures:
        logger.warning("asserted check failed", scenario=record.scenario, check=record.result.name)
    return report.exit_code


def cmd_peg(args: argparse.Namespace) -> int:
    """Pegs of every listed history, with complex values and real parts, plus the peg-engine checks."""
    return run_battery("peg", args, load_setups(args))


def cmd_gleason(args: argparse.Namespace) -> int:
    """Y and Z, theorem conditions, reconstruction round trip and state decomposition."""
    return run_battery("gleason", args, load_setups(args))


def cmd_entropy(args: argparse.Namespace) -> int:
    """Entropy, grouping, conditional entropy, strong additivity and concavity."""
    return run_battery("entropy", args, load_setups(args))


def cmd_compare(args: argparse.Namespace) -> int:
    """Decoherence functional, linear positivity and classical reduction."""
    return run_battery("compare", args, load_setups(args))


def cmd_suite(args: argparse.Namespace) -> int:
    """Every battery, on one scenario file or on ``--random N`` generated scenarios."""
    return run_battery("suite", args, load_setups(args), generated=args.random is not None)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose)
    try:
        if args.command == "peg":
            return cmd_peg(args)
        elif args.command == "gleason":
            return cmd_gleason(args)
        elif args.command == "entropy":
            return cmd_entropy(args)
        elif args.command == "compare":
            return cmd_compare(args)
        return cmd_suite(args)
    except PegCalcError as exc:
        print(f"pegcalc: error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
