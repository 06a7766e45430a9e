# app/commands/output.py
"""Shared plumbing for the command modules: flags, instance loading, result blocks"""
import argparse
import json
import logging
import sys
from typing import Any, Dict, Iterable, Optional, TextIO

from pydantic import BaseModel

from app.models.result_schemas import InstanceFile, InstanceKind, OracleBudget
from app.models.schemas import MCycle, Node
from app.services.instance_processor import instance_processor
from app.utils.config import settings
from app.utils.errors import CommandError

logger = logging.getLogger(__name__)

FORMATS = ("text", "dot", "json-lines")


def add_input(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--input", required=True, help="instance file ('-' reads standard input)")


def add_format(parser: argparse.ArgumentParser, choices: Iterable[str] = ("text", "json-lines")) -> None:
    parser.add_argument("--format", choices=list(choices), default="text")


def add_budget(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--budget-nodes", type=int, default=None, help="search node budget")
    parser.add_argument("--timeout", type=float, default=None, help="search time limit in seconds")


def budget_of(args: argparse.Namespace) -> OracleBudget:
    """Oracle budget from settings, overridden by --budget-nodes / --timeout"""
    budget = OracleBudget()
    updates: Dict[str, Any] = {}
    if args.budget_nodes is not None:
        updates["max_nodes_expanded"] = args.budget_nodes
    if args.timeout is not None:
        updates["time_limit"] = args.timeout
    try:
        return OracleBudget(**{**budget.model_dump(), **updates})
    except ValueError as e:
        raise CommandError(2, f"invalid budget: {e}")


def apply_budget(args: argparse.Namespace) -> None:
    """Push --budget-nodes / --timeout into the settings consulted by the solver's exact fallback"""
    if args.budget_nodes is not None:
        settings.budget_nodes = args.budget_nodes
    if args.timeout is not None:
        settings.budget_seconds = args.timeout


def read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return handle.read()
    except OSError as e:
        raise CommandError(2, f"cannot read {path}: {e.strerror}")


def load_instance(path: str) -> InstanceFile:
    instance = instance_processor.parse(read_text(path))
    logger.info(f"Loaded {instance.kind.value} instance of order {instance.n} from {path}")
    return instance


def default_min_len(instance: InstanceFile, requested: Optional[int]) -> int:
    if requested is not None:
        return requested
    return 6 if instance.kind == InstanceKind.BIPARTITE else 3


def plain(value: Any) -> Any:
    """JSON-compatible form of models, tuples and sets"""
    if isinstance(value, Node):
        return str(value)
    if isinstance(value, MCycle):
        return [str(v) for v in value.vertices]
    if isinstance(value, BaseModel):
        return value.model_dump(mode="json")
    if isinstance(value, dict):
        return {str(k): plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(v) for v in value]
    if isinstance(value, (set, frozenset)):
        return sorted(plain(v) for v in value)
    if hasattr(value, "value") and isinstance(getattr(value, "value"), str):
        return value.value
    return value


def _text_value(value: Any) -> str:
    if value is None:
        return "-"
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, (list, dict)):
        return json.dumps(value, sort_keys=True, separators=(",", ":"))
    return str(value)


def emit(record: Dict[str, Any], fmt: str, stream: Optional[TextIO] = None) -> None:
    """One result block: sorted key=value lines for text, one sorted JSON object for json-lines"""
    stream = stream or sys.stdout
    data = plain(record)
    if fmt == "json-lines":
        stream.write(json.dumps(data, sort_keys=True) + "\n")
        return
    for key in sorted(data):
        stream.write(f"{key}={_text_value(data[key])}\n")


def emit_dot(text: str, stream: Optional[TextIO] = None) -> None:
    (stream or sys.stdout).write(text)
