# cli/commands/trace.py
import sys
import logging

from agents import SimulationAgent
from data.models import ConfigError, ScenarioFailure
from data.processors import CSVProcessor, SCRSettings, load_config

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("trace", help="print per-transaction concentration samples as CSV")
    parser.add_argument("config", help="scenario file")
    parser.set_defaults(handler=run)


def run(args, settings: SCRSettings) -> int:
    try:
        config = load_config(args.config, settings)
    except ConfigError as e:
        logger.error(f"❌ Config error in {args.config}: {e}")
        return 1

    agent = SimulationAgent(config)
    try:
        agent.run_scenario()
    except ScenarioFailure as e:
        logger.error(f"❌ Scenario failed in period {e.period}: {e.cause}")
        return 2

    rows, columns = CSVProcessor.trace_rows(agent.trace)
    sys.stdout.write(CSVProcessor.frame(rows, columns).to_csv(index=False, lineterminator="\n"))
    return 0
