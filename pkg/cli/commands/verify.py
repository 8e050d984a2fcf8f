# cli/commands/verify.py
import logging

from agents import VerificationAgent
from agents.verification_agent import MISMATCH, SCOPES
from data.processors import SCRSettings

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("verify", help="check implementation results against brute-force oracles")
    parser.add_argument("--scope", choices=SCOPES, default="all")
    parser.set_defaults(handler=run)


def run(args, settings: SCRSettings) -> int:
    agent = VerificationAgent(seed=settings.seed or 0)
    claims = agent.run(args.scope)
    print(agent.table(claims))

    code = agent.exit_code(claims)
    if code:
        failed = [c["claim"] for c in claims if c["verdict"] == MISMATCH]
        logger.error(f"❌ {len(failed)} claims disagree with their oracle: {'; '.join(failed)}")
    return code
