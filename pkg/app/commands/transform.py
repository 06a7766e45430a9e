# app/commands/transform.py
"""transform: move an instance across the digraph / bipartite correspondence"""
import argparse
import logging

from app.commands.output import add_format, add_input, emit, emit_dot, load_instance
from app.models.result_schemas import InstanceFile, InstanceKind
from app.services.instance_processor import instance_processor
from app.services.transform_service import transform_service

logger = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser(
        "transform",
        help="digraph -> split bipartite graph with identity matching; bipartite -> contracted digraph; "
             "graph -> symmetrized digraph",
    )
    add_input(parser)
    add_format(parser, ("text", "dot", "json-lines"))
    parser.set_defaults(handler=handle)


def convert(instance: InstanceFile) -> InstanceFile:
    if instance.kind == InstanceKind.DIGRAPH:
        graph, matching, _ = transform_service.digraph_to_bipartite(instance.digraph)
        return instance_processor.of_bipartite(graph, matching)
    if instance.kind == InstanceKind.BIPARTITE:
        digraph, _ = transform_service.bipartite_to_digraph(instance.bipartite, instance.matching)
        return instance_processor.of_digraph(digraph)
    return instance_processor.of_digraph(transform_service.symmetrize(instance.graph))


def handle(args: argparse.Namespace) -> int:
    converted = convert(load_instance(args.input))
    logger.info(f"Transformed into a {converted.kind.value} instance of order {converted.n}")
    if args.format == "dot":
        emit_dot(instance_processor.to_dot(converted))
    elif args.format == "json-lines":
        emit({"command": "transform", "kind": converted.kind, "n": converted.n,
              "instance": instance_processor.serialize(converted)}, args.format)
    else:
        print(instance_processor.serialize(converted), end="")
    return 0
