# services/__init__.py
from .production_service import ProductionService
from .exchange_service import ExchangeBook, ExchangeService
from .metrics_service import ConcentrationTracker
from . import metrics_service, monetary_service, oracle_service

__all__ = [
    'ProductionService', 'ExchangeBook', 'ExchangeService', 'ConcentrationTracker',
    'metrics_service', 'monetary_service', 'oracle_service',
]
