# cli.py
"""Command-line front end: gen-params, decide, reduce, verify and hierarchy."""
import argparse
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from .codec import (
    decode_point,
    decode_schedule,
    dumps,
    encode_descriptor,
    encode_schedule,
    encode_verdict,
    rational_arg,
    read_json,
    require_relation_space,
)
from .config import configure_logging, load_run_config
from .errors import InfeasibleScheduleError, InvalidInputError, RedlabError, ScheduleInvalidError
from .hierarchy import ReducibilityRegistry
from .models import RunConfig
from .reductions import FLAVORS, MAPS, ensure_valid_schedule, gen_params, reduce_point, validate_schedule
from .relations import DECIDERS, H0Verdict, holds
from .verification import VerificationRunner, expand_suites, summary_line, write_report

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_SCHEDULE = 2
EXIT_NEGATIVE = 3

SUITE_CHOICES = VerificationRunner.SUITES + ("all",)


class ArgumentParser(argparse.ArgumentParser):
    """argparse reporting bad arguments with exit code 1."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _load_schedule(path: str):
    return decode_schedule(read_json(path))


def _load_point(path: str):
    return decode_point(read_json(path))


def cmd_gen_params(args, config: RunConfig) -> int:
    schedule = gen_params(args.flavor, args.base_p, config.n_max, config.margin, config.max_log_k)
    payload = encode_schedule(schedule)
    payload["clauses"] = [clause.model_dump() for clause in validate_schedule(schedule)]
    _emit(dumps(payload), config.out)
    return EXIT_OK


def cmd_decide(args, config: RunConfig) -> int:
    a, b = _load_point(args.point_a), _load_point(args.point_b)
    require_relation_space(args.relation, {args.point_a: a, args.point_b: b})
    verdict = DECIDERS[args.relation](a, b)
    related = holds(verdict)
    witness = verdict.witness if isinstance(verdict, H0Verdict) else None
    _emit(dumps(encode_verdict(related, witness, verdict)), config.out)
    return EXIT_OK if related else EXIT_NEGATIVE


def cmd_reduce(args, config: RunConfig) -> int:
    descriptor = reduce_point(
        args.map,
        _load_point(args.point),
        schedule=_load_schedule(args.schedule) if args.schedule else None,
        base_p=rational_arg(args.base_p) if args.base_p is not None else None,
        p=rational_arg(args.p) if args.p is not None else None,
        cycle=_load_point(args.cycle) if args.cycle else None,
        n_max=config.n_max,
        margin=config.margin,
    )
    _emit(dumps(encode_descriptor(descriptor)), config.out)
    return EXIT_OK


def cmd_verify(args, config: RunConfig) -> int:
    schedule = None
    if args.schedule:
        schedule = ensure_valid_schedule(_load_schedule(args.schedule))
    suites = expand_suites(args.suite)
    results = VerificationRunner(config, schedule).run(suites)
    summary = summary_line(args.suite, results)
    if config.out:
        with open(config.out, "w", encoding="utf-8", newline="") as f:
            write_report(results, f)
        sys.stdout.write(summary + "\n")
    else:
        write_report(results, sys.stdout)
        sys.stderr.write(summary + "\n")
    return EXIT_OK if all(r.holds for r in results) else EXIT_NEGATIVE


def cmd_hierarchy(args, config: RunConfig) -> int:
    registry = ReducibilityRegistry.seeded(args.levels)
    if args.action == "export":
        text = registry.export_dot() if args.format == "dot" else dumps(registry.to_json())
        _emit(text, config.out)
        return EXIT_OK
    if args.source is None or args.target is None:
        raise InvalidInputError("hierarchy query needs a source and a target relation")
    reachable = registry.reachable(args.source, args.target)
    payload = {
        "source": args.source,
        "target": args.target,
        "reachable": reachable,
        "strict": registry.strictly_below(args.source, args.target),
    }
    _emit(dumps(payload), config.out)
    return EXIT_OK if reachable else EXIT_NEGATIVE


def build_parser() -> ArgumentParser:
    common = ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, help="seed for randomized checks (default: REDLAB_SEED or 0)")
    common.add_argument("--tolerance", type=float, help="relative tolerance (default 1e-9)")
    common.add_argument("--n-max", type=int, dest="n_max", help="truncation length")
    common.add_argument("--margin", type=float, help="schedule margin in (0, 1)")
    common.add_argument("--out", help="write the output to this file instead of stdout")

    parser = ArgumentParser(prog="redlab", description="Borel reductions into sequence spaces at truncation scale.")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=ArgumentParser)

    gen = commands.add_parser("gen-params", parents=[common], help="generate a parameter schedule")
    gen.add_argument("--flavor", choices=FLAVORS, default="lp")
    gen.add_argument("--base-p", type=float, dest="base_p", required=True)
    gen.set_defaults(handler=cmd_gen_params)

    dec = commands.add_parser("decide", parents=[common], help="decide a relation between two points")
    dec.add_argument("relation", choices=sorted(DECIDERS))
    dec.add_argument("point_a")
    dec.add_argument("point_b")
    dec.set_defaults(handler=cmd_decide)

    red = commands.add_parser("reduce", parents=[common], help="map a point to its space descriptor")
    red.add_argument("map", choices=MAPS)
    red.add_argument("point")
    red.add_argument("--schedule")
    red.add_argument("--base-p", dest="base_p", help="base exponent of X(alpha), e.g. 1 or 5/4")
    red.add_argument("--p", help="exponent p of h(a, b), e.g. 3/2")
    red.add_argument("--cycle", help="Pomega point for h")
    red.set_defaults(handler=cmd_reduce)

    ver = commands.add_parser("verify", parents=[common], help="run property suites and write a CSV report")
    ver.add_argument("--suite", choices=SUITE_CHOICES, default="all")
    ver.add_argument("--schedule", help="validate this schedule and use it in the schedule-driven suites")
    ver.add_argument("--cases", type=int)
    ver.add_argument("--samples", type=int)
    ver.add_argument("--workers", type=int)
    ver.add_argument("--oracle-bound", type=int, dest="oracle_bound")
    ver.set_defaults(handler=cmd_verify)

    hier = commands.add_parser("hierarchy", parents=[common], help="export or query the reducibility registry")
    hier.add_argument("action", choices=("export", "query"))
    hier.add_argument("source", nargs="?")
    hier.add_argument("target", nargs="?")
    hier.add_argument("--format", choices=("dot", "json"), default="dot")
    hier.add_argument("--levels", type=int, default=3, help="number of finite equality levels")
    hier.set_defaults(handler=cmd_hierarchy)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    configure_logging("WARNING")
    args = build_parser().parse_args(argv)
    try:
        config = load_run_config(
            seed=args.seed,
            tolerance=args.tolerance,
            n_max=args.n_max,
            margin=args.margin,
            out=args.out,
            cases=getattr(args, "cases", None),
            samples=getattr(args, "samples", None),
            workers=getattr(args, "workers", None),
            oracle_bound=getattr(args, "oracle_bound", None),
        )
        return args.handler(args, config)
    except InfeasibleScheduleError as e:
        sys.stderr.write(f"infeasible: {e.message}\nfirst violated clause: {e.clause}\n")
        return EXIT_SCHEDULE
    except ScheduleInvalidError as e:
        sys.stderr.write(f"schedule-invalid: {e.message}\n")
        return EXIT_SCHEDULE
    except RedlabError as e:
        sys.stderr.write(f"{e.code}: {e.message}\n")
        return EXIT_INPUT
    except ValidationError as e:
        sys.stderr.write(f"invalid-input: {e}\n")
        return EXIT_INPUT
