"""Command-line entry point: python main.py <command> [flags]"""
import argparse
import logging
import sys
from typing import List, Optional

from dotenv import load_dotenv

load_dotenv()

from app.commands import check, dot, explore, gen, oracle, solve, transform  # noqa: E402
from app.utils.config import settings  # noqa: E402
from app.utils.errors import CommandError, DifactorError  # noqa: E402

logger = logging.getLogger(__name__)

COMMANDS = [solve, check, transform, oracle, gen, explore, dot]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="difactor",
        description="Directed 2-factors with exactly k cycles: solver, verifier and exact oracles",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        command.register(subparsers)
    return parser


def configure_logging() -> None:
    logging.basicConfig(
        level=getattr(logging, settings.log.upper(), logging.WARNING),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
    )


def main(argv: Optional[List[str]] = None) -> int:
    configure_logging()
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except CommandError as e:
        logger.error(f"{args.command}: {e.detail}")
        print(f"error: {e.detail}", file=sys.stderr)
        return e.exit_code
    except DifactorError as e:
        logger.error(f"{args.command}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return 2
    except Exception as e:
        logger.exception(f"{args.command} failed unexpectedly: {e}")
        return 2


if __name__ == "__main__":
    sys.exit(main())
