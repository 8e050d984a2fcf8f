# cli/main.py
import argparse
import logging
import sys
from typing import List, Optional

from dotenv import load_dotenv

from data.processors import SCRSettings
from cli.commands import simulate, trace, verify

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scr",
        description="Deterministic simulator of the Seed-Consumption-Reservation currency economy",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    simulate.register(subparsers)
    verify.register(subparsers)
    trace.register(subparsers)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    # Load environment variables
    load_dotenv()
    settings = SCRSettings()

    # Configure logging; stdout is reserved for CSV and tables
    logging.basicConfig(
        level=settings.log_level.upper(),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
    )

    args = build_parser().parse_args(argv)
    return args.handler(args, settings)


if __name__ == "__main__":
    sys.exit(main())
