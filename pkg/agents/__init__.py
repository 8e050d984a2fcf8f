from .simulation_agent import SimulationAgent, run_scenario
from .verification_agent import VerificationAgent

__all__ = ['SimulationAgent', 'run_scenario', 'VerificationAgent']
