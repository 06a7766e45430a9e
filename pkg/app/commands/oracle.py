# app/commands/oracle.py
"""oracle: exhaustive ground truth under an explicit budget"""
import argparse
import logging

from app.commands.output import add_budget, add_format, add_input, budget_of, default_min_len, emit, load_instance
from app.models.result_schemas import InstanceKind, OracleResult, OracleStatus
from app.services.oracle_service import oracle_service
from app.services.transform_service import transform_service
from app.utils.errors import CommandError

logger = logging.getLogger(__name__)

EXIT_CODES = {OracleStatus.FEASIBLE: 0, OracleStatus.INFEASIBLE: 1, OracleStatus.BUDGET: 2}


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("oracle", help="exhaustive search for exactly k cycles")
    add_input(parser)
    parser.add_argument("--k", type=int, required=True)
    parser.add_argument("--min-len", type=int, default=None, help="default 3 (digraph, graph) or 6 (bipartite)")
    parser.add_argument("--disjoint", action="store_true",
                        help="k disjoint cycles, not necessarily spanning (digraph and graph inputs)")
    add_budget(parser)
    add_format(parser)
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    instance = load_instance(args.input)
    if args.k < 1:
        raise CommandError(2, f"--k must be positive, got {args.k}")
    budget = budget_of(args)
    min_len = default_min_len(instance, args.min_len)

    if instance.kind == InstanceKind.BIPARTITE:
        if args.disjoint:
            raise CommandError(2, "--disjoint needs a digraph or graph instance")
        result: OracleResult = oracle_service.oracle_m_2factor(instance.bipartite, instance.matching,
                                                              args.k, min_len, budget)
        cycles = list(result.m_witness.cycles) if result.m_witness else []
    else:
        digraph = instance.digraph if instance.kind == InstanceKind.DIGRAPH else transform_service.symmetrize(instance.graph)
        if args.disjoint:
            result = oracle_service.oracle_disjoint_cycles(digraph, args.k, min_len, budget)
            cycles = result.cycles or []
        else:
            result = oracle_service.oracle_directed_2factor(digraph, args.k, min_len, budget)
            cycles = list(result.witness.cycles) if result.witness else []

    logger.info(f"Oracle {result.status.value} after {result.nodes_expanded} nodes in {result.elapsed:.3f}s")
    emit({
        "command": "oracle",
        "status": result.status,
        "k": args.k,
        "min_len": min_len,
        "cycles": cycles,
        "nodes_expanded": result.nodes_expanded,
    }, args.format)
    return EXIT_CODES[result.status]
