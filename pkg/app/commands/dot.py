# app/commands/dot.py
"""dot: Graphviz text for an instance, optionally with a solved 2-factor colored in"""
import argparse
import logging

from app.commands.output import add_budget, add_input, apply_budget, default_min_len, emit_dot, load_instance
from app.commands.solve import cycles_of, reverify, solve_instance
from app.models.result_schemas import SolveStatus
from app.services.instance_processor import instance_processor
from app.utils.errors import CommandError

logger = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("dot", help="render an instance as Graphviz DOT")
    add_input(parser)
    parser.add_argument("--k", type=int, default=None, help="solve for k cycles and color them")
    parser.add_argument("--min-len", type=int, default=None)
    add_budget(parser)
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    instance = load_instance(args.input)
    cycles = []
    if args.k is not None:
        if args.k < 1:
            raise CommandError(2, f"--k must be positive, got {args.k}")
        apply_budget(args)
        outcome = solve_instance(instance, args.k, default_min_len(instance, args.min_len))
        if outcome.status == SolveStatus.SOLVED:
            reverify(instance, outcome)
        else:
            logger.info(f"No {args.k}-cycle factor to color: {outcome.status.value}")
        cycles = cycles_of(instance, outcome)
    logger.debug(f"Rendering {instance.kind.value} instance with {len(cycles)} colored cycles")
    emit_dot(instance_processor.to_dot(instance, cycles))
    return 0
