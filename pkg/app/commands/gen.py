# app/commands/gen.py
"""gen: write an instance from one of the generator families"""
import argparse
import logging

from pydantic import ValidationError

from app.commands.output import add_format, emit, emit_dot
from app.models.result_schemas import GenFamily, GenSpec, InstanceFile
from app.models.schemas import Digraph
from app.services.generator_service import Instance, generator_service
from app.services.instance_processor import instance_processor
from app.utils.config import settings
from app.utils.errors import CommandError

logger = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("gen", help="generate an instance")
    parser.add_argument("--family", choices=[f.value for f in GenFamily], required=True)
    parser.add_argument("--n", type=int, default=None)
    parser.add_argument("--k", type=int, default=None)
    parser.add_argument("--margin", type=int, default=0)
    parser.add_argument("--density", type=float, default=None)
    parser.add_argument("--seed", type=int, default=None)
    add_format(parser, ("text", "dot", "json-lines"))
    parser.set_defaults(handler=handle)


def to_instance_file(generated: Instance) -> InstanceFile:
    if isinstance(generated, Digraph):
        return instance_processor.of_digraph(generated)
    graph, matching = generated
    return instance_processor.of_bipartite(graph, matching)


def handle(args: argparse.Namespace) -> int:
    try:
        spec = GenSpec(
            family=GenFamily(args.family),
            n=args.n,
            k=args.k,
            margin=args.margin,
            density=args.density,
            seed=settings.default_seed if args.seed is None else args.seed,
        )
    except ValidationError as e:
        raise CommandError(2, f"invalid generator parameters: {e.errors()[0]['msg']}")

    instance = to_instance_file(generator_service.generate(spec))
    logger.info(f"Generated {spec.family.value} instance of order {instance.n}")
    if args.format == "dot":
        emit_dot(instance_processor.to_dot(instance))
    elif args.format == "json-lines":
        emit({"command": "gen", "family": spec.family, "seed": spec.seed, "n": instance.n,
              "instance": instance_processor.serialize(instance)}, args.format)
    else:
        print(instance_processor.serialize(instance), end="")
    return 0
