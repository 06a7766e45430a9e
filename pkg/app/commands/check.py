# app/commands/check.py
"""check: degree conditions of an instance and, with --k, which theorems apply"""
import argparse
import logging
from typing import Any, Dict, List

from app.commands.output import add_format, add_input, emit, load_instance
from app.models.result_schemas import ConditionReport, InstanceFile, InstanceKind
from app.services.condition_service import condition_service
from app.utils.errors import CommandError

logger = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("check", help="evaluate the degree condition of an instance")
    add_input(parser)
    parser.add_argument("--k", type=int, default=None, help="also report theorem applicability for k cycles")
    add_format(parser)
    parser.set_defaults(handler=handle)


def _reports(instance: InstanceFile) -> List[ConditionReport]:
    """The governing condition first, then secondary checks"""
    if instance.kind == InstanceKind.DIGRAPH:
        return [condition_service.woodall_value(instance.digraph)]
    if instance.kind == InstanceKind.BIPARTITE:
        return [condition_service.sigma11(instance.bipartite), condition_service.lemma2_degree_floor(instance.bipartite)]
    return [condition_service.sigma2(instance.graph)]


def _subject(instance: InstanceFile) -> Any:
    return {
        InstanceKind.DIGRAPH: instance.digraph,
        InstanceKind.BIPARTITE: instance.bipartite,
        InstanceKind.GRAPH: instance.graph,
    }[instance.kind]


def handle(args: argparse.Namespace) -> int:
    instance = load_instance(args.input)
    reports = _reports(instance)
    primary = reports[0]

    record: Dict[str, Any] = {"command": "check", "kind": instance.kind, "n": instance.n}
    for report in reports:
        record[f"{report.name}_value"] = "inf" if report.unbounded else report.value
        record[f"{report.name}_threshold"] = report.threshold
        record[f"{report.name}_witness"] = list(report.witness) if report.witness else None
    record["satisfied"] = primary.satisfied

    if args.k is not None:
        if args.k < 1:
            raise CommandError(2, f"--k must be positive, got {args.k}")
        rows = condition_service.applicability(_subject(instance), args.k)
        record["theorems_met"] = [row.theorem for row in rows if row.hypotheses_met]
        if args.format == "json-lines":
            record["applicability"] = rows

    emit(record, args.format)
    if not primary.satisfied:
        logger.info(f"{primary.name} = {primary.value} is below {primary.threshold}")
    return 0 if primary.satisfied else 1
