"""
Command-line interface.

Commands: assess, search, cohomology, lift-demo, lift-check, heights, rootdata.
Results are printed on stdout as JSON or CSV; logs go to stderr.
Exit codes: 0 success, 1 input error, 2 cap exceeded, 3 internal invariant violation.
"""
import argparse
import json
import logging
import sys
from typing import List, Optional

from app.config.settings import settings
from app.models.errors import AlgebraError, CapExceeded, InputError
from app.models.schemas import ErrorResponse, JobConfig
from app.services import pipeline_service
from app.services.startup_service import initialize_services
from app.utils.logger import setup_logging

# Set up logging
logger = logging.getLogger(__name__)

EXIT_OK, EXIT_INPUT, EXIT_CAP, EXIT_INTERNAL = 0, 1, 2, 3


def _int_list(text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _add_inputs(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("-i", "--input", action="append", default=[], help="Group definition file (repeatable)")
    sub.add_argument("-f", "--fixture", action="append", default=[],
                     help=f"Built-in fixture (repeatable): {', '.join(pipeline_service.list_fixtures())}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="adequacy", description="Adequacy checks for finite matrix groups")
    parser.add_argument("--seed", type=int, default=settings.SEED, help="Seed recorded in every output")
    parser.add_argument("--max-order", type=int, default=settings.MAX_ORDER, help="Enumeration cap")
    parser.add_argument("--threads", type=int, default=settings.THREADS, help="Worker threads")
    parser.add_argument("--cache", choices=["none", "file", "redis"], default=settings.CACHE_BACKEND,
                        help="Report cache backend")
    parser.add_argument("--cache-dir", default=None, help="Directory of the file cache")
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    commands = parser.add_subparsers(dest="command", required=True)

    assess = commands.add_parser("assess", help="Adequacy report for each group")
    _add_inputs(assess)
    assess.add_argument("--report", help="CSV report path (stdout when omitted)")
    assess.add_argument("--json", help="JSON report path")

    search = commands.add_parser("search", help="Random subgroup search in an ambient group")
    _add_inputs(search)
    search.add_argument("--samples", type=int, default=settings.SEARCH_SAMPLES)
    search.add_argument("--num-gens", type=int, default=settings.SEARCH_GENERATORS)
    search.add_argument("--output-dir", help="Directory for the group files of the classes found")
    search.add_argument("--json", help="Summary path (stdout when omitted)")

    cohomology = commands.add_parser("cohomology", help="h0 and h1 dimensions")
    _add_inputs(cohomology)
    cohomology.add_argument("-m", "--module", action="append", choices=list(pipeline_service.MODULES),
                            help="Coefficient module (repeatable; all by default)")

    demo = commands.add_parser("lift-demo", help="Canonical invariant summand lift of one matrix")
    demo.add_argument("--ring", help="Ring tag, e.g. 'Zmod[3,2]' (or prefix the matrix with it)")
    demo.add_argument("--matrix", required=True, help="Matrix rows, e.g. '1,1;3,2' or 'Zmod[3,2]:1,1;3,2'")
    demo.add_argument("--split", help="'eigen=<a>' for a residual eigenvalue, 'topnil' for the nilpotent part")
    demo.add_argument("--eigenvalue", type=int, help="Same as --split eigen=<a>")

    check = commands.add_parser("lift-check", help="Randomized property suite for the lifts")
    check.add_argument("--trials", type=int, default=5)
    check.add_argument("--p", type=int, default=3)
    check.add_argument("--N", type=int, default=2)

    heights = commands.add_parser("heights", help="Point counts against the leading constant")
    heights.add_argument("--primes", type=_int_list, default=[], help="Comma-separated primes of Sigma")
    heights.add_argument("--X", type=_int_list, required=True, help="Comma-separated height bounds")
    heights.add_argument("--csv", help="CSV output path (stdout when omitted)")

    rootdata = commands.add_parser("rootdata", help="Bad primes and Weyl group order of a root datum")
    group = rootdata.add_mutually_exclusive_group(required=True)
    group.add_argument("--builtin", help="Built-in root datum name, e.g. C2")
    group.add_argument("--file", help="Root datum file")
    rootdata.add_argument("--bound", type=int, default=50, help="Primes below this bound are tested")
    return parser


def _config(args: argparse.Namespace) -> JobConfig:
    inputs = list(getattr(args, "input", [])) + [f"{pipeline_service.FIXTURE_PREFIX}{name}"
                                                 for name in getattr(args, "fixture", [])]
    return JobConfig(
        command=args.command,
        inputs=inputs,
        seed=args.seed,
        max_order=args.max_order,
        threads=args.threads,
        samples=getattr(args, "samples", 0),
        num_gens=getattr(args, "num_gens", settings.SEARCH_GENERATORS),
        report_path=getattr(args, "report", None),
        json_path=getattr(args, "json", None),
        output_dir=getattr(args, "output_dir", None),
        cache_backend=args.cache,
        cache_dir=args.cache_dir,
    )


def _emit(payload) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))


def dispatch(args: argparse.Namespace) -> int:
    if args.command == "assess":
        config = _config(args)
        reports, failures = pipeline_service.run_assess(config)
        if not config.report_path:
            sys.stdout.write(pipeline_service.report_csv(reports, failures))
        if any(isinstance(e, CapExceeded) for _, e in failures):
            return EXIT_CAP
        return EXIT_INPUT if failures else EXIT_OK
    if args.command == "search":
        config = _config(args)
        summary = pipeline_service.run_search(config)
        if not config.json_path:
            _emit(summary.model_dump())
        return EXIT_OK
    if args.command == "cohomology":
        modules = args.module or pipeline_service.MODULES
        reports = pipeline_service.run_cohomology(_config(args), modules)
        _emit([r.model_dump() for r in reports])
        return EXIT_OK
    if args.command == "lift-demo":
        eigenvalue = pipeline_service.parse_split(args.split)
        if args.eigenvalue is not None:
            if args.split is not None and eigenvalue != args.eigenvalue:
                raise InputError("--split and --eigenvalue disagree", {"split": args.split})
            eigenvalue = args.eigenvalue
        _emit(pipeline_service.run_lift_demo(args.matrix, eigenvalue, args.ring))
        return EXIT_OK
    if args.command == "lift-check":
        report = pipeline_service.run_lift_check(args.seed, args.trials, args.p, args.N)
        _emit(report.model_dump())
        return EXIT_OK if report.ok else EXIT_INTERNAL
    if args.command == "heights":
        text = pipeline_service.run_heights(args.primes, args.X, args.csv)
        if not args.csv:
            sys.stdout.write(text)
        return EXIT_OK
    if args.command == "rootdata":
        _emit(pipeline_service.run_rootdata(args.builtin, args.file, args.bound).model_dump())
        return EXIT_OK
    raise InputError(f"unknown command {args.command!r}")


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging("DEBUG" if args.verbose else settings.LOG_LEVEL, stream=sys.stderr)
    initialize_services(args.cache)
    try:
        return dispatch(args)
    except CapExceeded as e:
        logger.error(f"Cap exceeded: {e.message}")
        print(e.to_response().model_dump_json(), file=sys.stderr)
        return EXIT_CAP
    except InputError as e:
        logger.error(f"Input error: {e.message}")
        print(e.to_response().model_dump_json(), file=sys.stderr)
        return EXIT_INPUT
    except AlgebraError as e:
        logger.error(f"{e.code}: {e.message}")
        print(e.to_response().model_dump_json(), file=sys.stderr)
        return EXIT_INTERNAL
    except ValueError as e:
        # includes pydantic validation errors of the job configuration
        logger.error(f"Invalid input: {str(e)}")
        print(ErrorResponse(error="INPUT_ERROR", details={"message": str(e)}).model_dump_json(), file=sys.stderr)
        return EXIT_INPUT
    except Exception as e:
        logger.exception(f"Unexpected error: {str(e)}")
        print(ErrorResponse(error="INTERNAL", details={"message": str(e)}).model_dump_json(), file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
