# app/commands/solve.py
"""solve: exactly k disjoint cycles covering the instance, re-verified before printing"""
import argparse
import logging
from typing import Any, Dict, List

from app.commands.output import (
    add_budget,
    add_format,
    add_input,
    apply_budget,
    default_min_len,
    emit,
    emit_dot,
    load_instance,
)
from app.models.result_schemas import InstanceFile, InstanceKind, SolveOutcome, SolveStatus
from app.services.instance_processor import instance_processor
from app.services.partition_service import partition_service
from app.services.transform_service import transform_service
from app.services.verification_service import verification_service
from app.utils.errors import CommandError

logger = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("solve", help="find a 2-factor with exactly k cycles")
    add_input(parser)
    parser.add_argument("--k", type=int, required=True)
    parser.add_argument("--min-len", type=int, default=None, help="default 3 (digraph, graph) or 6 (bipartite)")
    parser.add_argument("--seed", type=int, default=None, help="accepted for uniformity; solving is deterministic")
    add_budget(parser)
    add_format(parser, ("text", "dot", "json-lines"))
    parser.set_defaults(handler=handle)


def solve_instance(instance: InstanceFile, k: int, min_len: int) -> SolveOutcome:
    if instance.kind == InstanceKind.DIGRAPH:
        return partition_service.solve(instance.digraph, k, min_len)
    if instance.kind == InstanceKind.GRAPH:
        return partition_service.solve_undirected(instance.graph, k, min_len)
    return partition_service.solve_bipartite(instance.bipartite, instance.matching, k, min_len)


def reverify(instance: InstanceFile, outcome: SolveOutcome) -> None:
    """A solved outcome that does not verify is never printed"""
    if instance.kind == InstanceKind.BIPARTITE:
        report = verification_service.verify_m_2factor(instance.bipartite, instance.matching, outcome.m_factor,
                                                       outcome.k, outcome.min_len)
    else:
        digraph = instance.digraph if instance.kind == InstanceKind.DIGRAPH else transform_service.symmetrize(instance.graph)
        report = verification_service.verify_directed_2factor(digraph, outcome.factor, outcome.k, outcome.min_len)
    if not report.passed:
        logger.error(f"Solver witness failed re-verification: {report.rules()}")
        raise CommandError(2, f"witness failed verification: {', '.join(report.rules())}")


def exit_code_of(outcome: SolveOutcome) -> int:
    if outcome.status == SolveStatus.SOLVED:
        return 0
    if outcome.status == SolveStatus.HYPOTHESIS_UNMET or outcome.proven_infeasible:
        return 1
    return 2


def cycles_of(instance: InstanceFile, outcome: SolveOutcome) -> List[Any]:
    if outcome.status != SolveStatus.SOLVED:
        return []
    if instance.kind == InstanceKind.BIPARTITE:
        return list(outcome.m_factor.cycles)
    return list(outcome.factor.cycles)


def handle(args: argparse.Namespace) -> int:
    instance = load_instance(args.input)
    if args.k < 1:
        raise CommandError(2, f"--k must be positive, got {args.k}")
    apply_budget(args)
    min_len = default_min_len(instance, args.min_len)

    outcome = solve_instance(instance, args.k, min_len)
    if outcome.status == SolveStatus.SOLVED:
        reverify(instance, outcome)
    cycles = cycles_of(instance, outcome)

    if args.format == "dot":
        emit_dot(instance_processor.to_dot(instance, cycles))
        return exit_code_of(outcome)

    record: Dict[str, Any] = {
        "command": "solve",
        "status": outcome.status,
        "k": outcome.k,
        "min_len": outcome.min_len,
        "gate_passed": outcome.gate_passed,
        "stage": outcome.stage,
        "proven_infeasible": outcome.proven_infeasible,
        "cycles": cycles,
        "lengths": [len(c.vertices) if instance.kind == InstanceKind.BIPARTITE else len(c) for c in cycles],
    }
    if args.format == "json-lines":
        record["applicability"] = outcome.applicability
        record["diagnostics"] = outcome.diagnostics
    emit(record, args.format)
    return exit_code_of(outcome)
