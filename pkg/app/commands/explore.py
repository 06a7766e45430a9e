# app/commands/explore.py
"""explore: random counterexample search for the disjoint-cycles questions"""
import argparse
import logging

from pydantic import ValidationError

from app.commands.output import add_budget, add_format, budget_of, emit
from app.models.result_schemas import ExploreMode, ExploreParams
from app.services.explore_service import explore_service
from app.services.instance_processor import instance_processor
from app.utils.config import settings
from app.utils.errors import CommandError

logger = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("explore", help="sample small instances and ask the oracle")
    parser.add_argument("--mode", choices=[m.value for m in ExploreMode], required=True)
    parser.add_argument("--k", type=int, required=True)
    parser.add_argument("--n-min", type=int, required=True)
    parser.add_argument("--n-max", type=int, required=True)
    parser.add_argument("--samples", type=int, default=100)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--workers", type=int, default=None)
    add_budget(parser)
    add_format(parser)
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    try:
        params = ExploreParams(
            mode=ExploreMode(args.mode),
            n_min=args.n_min,
            n_max=args.n_max,
            k=args.k,
            samples=args.samples,
            seed=settings.default_seed if args.seed is None else args.seed,
            workers=settings.explore_workers if args.workers is None else args.workers,
            budget=budget_of(args),
        )
    except ValidationError as e:
        raise CommandError(2, f"invalid explore parameters: {e.errors()[0]['msg']}")

    report = explore_service.explore(params)
    emit({
        "command": "explore",
        "mode": params.mode,
        "k": params.k,
        "seed": params.seed,
        "samples_run": report.samples_run,
        "feasible": report.feasible,
        "budget_hits": report.budget_hits,
        "skipped": report.skipped,
        "by_order": {str(n): count for n, count in sorted(report.by_order.items())},
        "violations": [instance_processor.serialize(instance_processor.of_digraph(d)) for d in report.violations],
    }, args.format)

    if report.violations:
        logger.warning(f"{len(report.violations)} counterexample candidate(s) found")
        return 1
    return 2 if report.budget_hits else 0
