"""Command-line front end: ``analyze`` game files, run the ``laws`` suites, ``fmt`` sources."""

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from app import __version__
from app.config.settings import settings
from app.core.base import EngineError
from app.core.opengame import BudgetExceededError
from app.dsl import DslError
from app.laws.base_law import FAULTS
from app.services.analysis_service import AnalysisError, analysis_service
from app.services.law_service import LawConfigError, law_service
from app.services.report_service import report_service

logger = logging.getLogger("ogame")

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_BUDGET = 2
EXIT_LAWS = 3


def _context_names(value: str) -> list:
    names = [name.strip() for name in value.split(",")]
    if not 1 <= len(names) <= 2 or not all(names):
        raise argparse.ArgumentTypeError("expected 'h,k' or a single reverse table name")
    return names


def _positive(value: str) -> int:
    number = int(value)
    if number < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return number


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ogame", description="Open-game equilibrium analyzer and law checker.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    analyze = commands.add_parser("analyze", help="enumerate equilibria of the games in a .og file")
    analyze.add_argument("file", type=Path)
    analyze.add_argument("--game", help="analyze only this game")
    analyze.add_argument("--context", type=_context_names, help="declared tables h,k (or one reverse table)")
    analyze.add_argument("--budget", type=_positive, help="maximum number of strategy profiles")
    analyze.add_argument("--timing", action="store_true", help="include elapsed time in the report")
    _output_flags(analyze)

    laws = commands.add_parser("laws", help="run the randomized law suites")
    laws.add_argument("--seed", type=int, help="seed (default from OGAME_LAW_SEED)")
    laws.add_argument("--instances", type=_positive, help="instances per law")
    laws.add_argument("--max-atoms", type=_positive, help="maximum atoms per generated carrier (at most 3)")
    laws.add_argument("--law", action="append", dest="only", help="run only this law (repeatable)")
    laws.add_argument("--timing", action="store_true", help="include elapsed time in the report")
    laws.add_argument("--fault", choices=FAULTS, help=argparse.SUPPRESS)
    _output_flags(laws)

    fmt = commands.add_parser("fmt", help="pretty-print a .og file")
    fmt.add_argument("file", type=Path)
    fmt.add_argument("--output", type=Path, help="write here instead of stdout")
    return parser


def _output_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--pretty", action="store_true", help="human-readable tables instead of JSON")
    parser.add_argument("--output", type=Path, help="write the report here instead of stdout")


def _report_error(path: Path, exc: Exception) -> None:
    # DSL diagnostics already start with "line:col:"
    separator = ":" if isinstance(exc, DslError) else ": "
    logger.error("%s%s%s", path, separator, exc)


def cmd_analyze(args) -> int:
    if args.budget is not None:
        settings.set_override("MAX_PROFILES", args.budget)
    if args.timing:
        settings.set_override("REPORT_TIMING", "true")
    try:
        report = analysis_service.analyze_file(args.file, game=args.game, context=args.context)
    except BudgetExceededError as exc:
        logger.error("%s: %s", args.file, exc)
        return EXIT_BUDGET
    except (DslError, AnalysisError, EngineError) as exc:
        _report_error(args.file, exc)
        return EXIT_INPUT
    except OSError as exc:
        logger.error("cannot read %s: %s", args.file, exc.strerror or exc)
        return EXIT_INPUT
    report_service.write(report_service.render(report, args.pretty), args.output)
    return EXIT_OK


def cmd_laws(args) -> int:
    if args.timing:
        settings.set_override("REPORT_TIMING", "true")
    try:
        report = law_service.run(
            seed=args.seed,
            instances=args.instances,
            max_atoms=args.max_atoms,
            fault=args.fault,
            only=args.only,
        )
    except LawConfigError as exc:
        logger.error("%s", exc)
        return EXIT_INPUT
    report_service.write(report_service.render(report, args.pretty), args.output)
    for law in report.laws:
        if not law.passed:
            details = ", ".join(f"{key}={value}" for key, value in (law.counterexample or {}).items())
            logger.error("%s failed %d/%d: %s", law.name, law.failures, law.instances, details)
    return EXIT_OK if report.passed else EXIT_LAWS


def cmd_fmt(args) -> int:
    try:
        text = analysis_service.format_source(args.file.read_bytes())
    except DslError as exc:
        _report_error(args.file, exc)
        return EXIT_INPUT
    except OSError as exc:
        logger.error("cannot read %s: %s", args.file, exc.strerror or exc)
        return EXIT_INPUT
    report_service.write(text, args.output)
    return EXIT_OK


COMMANDS = {"analyze": cmd_analyze, "laws": cmd_laws, "fmt": cmd_fmt}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=settings.log_level,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return COMMANDS[args.command](args)
    finally:
        settings.clear_overrides()


if __name__ == "__main__":
    sys.exit(main())
