from .errors import (
    ConfigError,
    InsufficientBalance,
    InsufficientData,
    InsufficientHarvest,
    InsufficientIssuance,
    InvalidSpec,
    LengthMismatch,
    PreconditionViolation,
    ScenarioFailure,
    SCRError,
    StarvationError,
    StockMismatch,
    ZeroDMax,
    ZeroRequired,
    ZeroReservation,
)
from .fields import Rational, format_rational, parse_rational
from .schemas import (
    AGENCY_ID,
    ENVIRONMENT_ID,
    AgencyState,
    AgencyVariant,
    AssetMetric,
    BarterOrder,
    ConsumptionOutcome,
    CorrelationSign,
    CurrencyLedger,
    CurrencySpec,
    EconomyConfig,
    EmergencyEvent,
    EnvironmentState,
    GoodsAccount,
    GoodsKind,
    GoodsLot,
    HarvestPolicy,
    LiquidityState,
    Mode,
    MoneyPolicy,
    Participant,
    PeriodReport,
    Phase,
    Role,
    RunManifest,
    ScenarioConfig,
    ScheduleSearchProblem,
    SupplyStatus,
    TraceSample,
    Transaction,
    TransactionLedger,
    holder_label,
)

__all__ = [
    'ConfigError', 'InsufficientBalance', 'InsufficientData', 'InsufficientHarvest',
    'InsufficientIssuance', 'InvalidSpec', 'LengthMismatch', 'PreconditionViolation',
    'ScenarioFailure', 'SCRError', 'StarvationError', 'StockMismatch', 'ZeroDMax',
    'ZeroRequired', 'ZeroReservation',
    'Rational', 'format_rational', 'parse_rational',
    'AGENCY_ID', 'ENVIRONMENT_ID', 'AgencyState', 'AgencyVariant', 'AssetMetric',
    'BarterOrder', 'ConsumptionOutcome', 'CorrelationSign', 'CurrencyLedger',
    'CurrencySpec', 'EconomyConfig', 'EmergencyEvent', 'EnvironmentState',
    'GoodsAccount', 'GoodsKind', 'GoodsLot', 'HarvestPolicy', 'LiquidityState',
    'Mode', 'MoneyPolicy', 'Participant', 'PeriodReport', 'Phase', 'Role',
    'RunManifest', 'ScenarioConfig', 'ScheduleSearchProblem', 'SupplyStatus',
    'TraceSample', 'Transaction', 'TransactionLedger', 'holder_label',
]
