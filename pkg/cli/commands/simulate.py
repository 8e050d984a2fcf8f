# cli/commands/simulate.py
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import List
import logging

from agents import SimulationAgent
from data.models import ConfigError, ScenarioFailure
from data.processors import CSVProcessor, SCRSettings, load_config

logger = logging.getLogger(__name__)

CONFIG_PATTERN = "*.env"


def register(subparsers) -> None:
    parser = subparsers.add_parser("simulate", help="run a scenario and write its CSV artifacts")
    parser.add_argument("config", help="scenario file, or a directory of *.env scenario files")
    parser.add_argument("--out", default="out", help="output directory (default: ./out)")
    parser.set_defaults(handler=run)


def simulate_file(config_path: Path, out_dir: Path, settings: SCRSettings) -> int:
    """Run one scenario file; returns its exit code."""
    try:
        config = load_config(config_path, settings)
    except ConfigError as e:
        logger.error(f"❌ Config error in {config_path}: {e}")
        return 1

    agent = SimulationAgent(config)
    try:
        agent.run_scenario()
    except ScenarioFailure as e:
        logger.error(f"❌ Scenario {config_path.name} failed in period {e.period}: {e.cause}")
        return 2

    try:
        CSVProcessor(out_dir).write_run(config, agent.reports, agent.ledgers, agent.trace)
    except OSError as e:
        logger.error(f"❌ Cannot write to {out_dir}: {e}")
        return 1
    logger.info(f"✅ {config_path.name}: {len(agent.reports)} periods written to {out_dir}")
    return 0


def run(args, settings: SCRSettings) -> int:
    path = Path(args.config)
    out = Path(args.out)
    if not path.is_dir():
        return simulate_file(path, out, settings)

    configs = sorted(path.glob(CONFIG_PATTERN))
    if not configs:
        logger.error(f"❌ No {CONFIG_PATTERN} scenario files in {path}")
        return 1

    logger.info(f"📂 Running {len(configs)} scenarios with {settings.workers} worker(s)")
    if settings.workers <= 1:
        codes = [simulate_file(c, out / c.stem, settings) for c in configs]
    else:
        with ProcessPoolExecutor(max_workers=settings.workers) as pool:
            futures = [pool.submit(simulate_file, c, out / c.stem, settings) for c in configs]
            codes: List[int] = [f.result() for f in futures]
    return max(codes)
