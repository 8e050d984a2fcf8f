# data/models/schemas.py
import re
from collections import Counter
from enum import Enum
from fractions import Fraction
from typing import Annotated, Any, Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .fields import Rational

AGENCY_ID = -1
ENVIRONMENT_ID = -2

GoodsKind = Annotated[int, Field(ge=0)]


def holder_label(holder_id: int) -> str:
    if holder_id == AGENCY_ID:
        return "A"
    if holder_id == ENVIRONMENT_ID:
        return "ENV"
    return f"P{holder_id}"


class Role(str, Enum):
    PRODUCTIVE = "productive"
    NON_PRODUCTIVE = "non_productive"


class Mode(str, Enum):
    ONE_BODY = "one_body"
    BARTER = "barter"
    AGENCY = "agency"


class MoneyPolicy(str, Enum):
    NONE = "none"
    EXACT = "exact"
    MULTIPLIER = "multiplier"


class AgencyVariant(str, Enum):
    UNIFORM_CREDIT = "uniform_credit"
    LITERAL_PAPER = "literal_paper"


class BarterOrder(str, Enum):
    LEXICOGRAPHIC = "lexicographic"
    RANDOM = "random"


class Phase(str, Enum):
    BARTER = "barter"
    SELL = "sell"
    BUY = "buy"
    COLLAPSED = "collapsed"


class CorrelationSign(str, Enum):
    NEGATIVE = "negative"
    NON_NEGATIVE = "non-negative"


class SupplyStatus(str, Enum):
    UNDER_SUPPLY = "under_supply"
    EXACT = "exact"
    INFLATED = "inflated"


# ---------------------------------------------------------------- core-model

class GoodsLot(BaseModel):
    kind: GoodsKind
    quantity: int = Field(ge=0)
    age: int = Field(default=0, ge=0, le=1)


class CurrencySpec(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    face_value: Rational = Fraction(1)
    actual_cost: Rational = Fraction(0)

    @model_validator(mode="after")
    def check_cost(self) -> "CurrencySpec":
        if self.face_value <= 0:
            raise ValueError("face_value must be positive")
        if not 0 <= self.actual_cost <= self.face_value:
            raise ValueError("actual_cost must lie in [0, face_value]")
        return self


class Participant(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    id: int = Field(ge=0)
    role: Role
    produces: Optional[GoodsKind] = None
    seeds: Optional[GoodsLot] = None
    consumables: List[GoodsLot] = Field(default_factory=list)
    reservation_goods: List[GoodsLot] = Field(default_factory=list)
    currency_balance: int = Field(default=0, ge=0)
    # exact saving-replacement credit; released whole units counted separately
    freed_credit: Rational = Fraction(0)
    freed_released: int = 0

    @model_validator(mode="after")
    def check_role(self) -> "Participant":
        productive = self.role == Role.PRODUCTIVE
        if productive != (self.produces is not None):
            raise ValueError("a productive participant produces exactly one kind, others none")
        return self

    @property
    def holder_id(self) -> int:
        return self.id

    def lot_lists(self) -> List[List[GoodsLot]]:
        return [self.consumables, self.reservation_goods]

    def consumable_counts(self) -> Counter:
        counts: Counter = Counter()
        for lot in self.consumables:
            counts[lot.kind] += lot.quantity
        return counts

    def reservation_count(self) -> int:
        return sum(lot.quantity for lot in self.reservation_goods)


class HarvestPolicy(BaseModel):
    mode: Literal["one_body", "many_body"] = "one_body"
    c_portion: int = Field(default=1, ge=1)
    r_portion: int = Field(default=1, ge=1)

    @classmethod
    def one_body(cls) -> "HarvestPolicy":
        return cls(mode="one_body")

    @classmethod
    def many_body(cls, c_portion: int, r_portion: int = 1) -> "HarvestPolicy":
        return cls(mode="many_body", c_portion=c_portion, r_portion=r_portion)


class ConsumptionOutcome(BaseModel):
    fulfilled: bool
    missing: List[int] = Field(default_factory=list)
    taken: Optional[int] = None

    @property
    def starved(self) -> bool:
        return not self.fulfilled


class EnvironmentState(BaseModel):
    """The reservoir: unbounded goods and currency, never initiates anything."""

    pool: List[GoodsLot] = Field(default_factory=list)
    issued: int = 0
    redeemed: int = 0

    @property
    def holder_id(self) -> int:
        return ENVIRONMENT_ID

    def lot_lists(self) -> List[List[GoodsLot]]:
        return [self.pool]


class EconomyConfig(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    n: int = Field(default=1, ge=1)
    non_productive: int = Field(default=0, ge=0)
    productivity: Optional[int] = Field(default=None, ge=1)
    c_portion: Optional[int] = Field(default=None, ge=1)
    interest_rate: Rational = Fraction(1)
    currency: CurrencySpec = Field(default_factory=CurrencySpec)
    alpha: Rational = Fraction(1)
    beta: Rational = Fraction(0)
    gamma: Rational = Fraction(2)


# ------------------------------------------------------------------ exchange

class Transaction(BaseModel):
    """One bilateral transfer. Positive quantities flow sender -> receiver."""

    model_config = ConfigDict(frozen=True)

    seq: int = Field(ge=1)
    phase: Phase
    sender: int
    receiver: int
    goods: Tuple[Tuple[int, int], ...] = ()
    reservation: Tuple[Tuple[int, int], ...] = ()
    currency: int = 0

    @model_validator(mode="after")
    def check_moves_something(self) -> "Transaction":
        moved = any(q for _, q in self.goods) or any(q for _, q in self.reservation) or self.currency
        if not moved:
            raise ValueError("a transaction must move at least one unit")
        if self.sender == self.receiver:
            raise ValueError("a transaction needs two distinct holders")
        return self


class TransactionLedger(BaseModel):
    transactions: List[Transaction] = Field(default_factory=list)
    t_0: int = 0
    t_k: int = 0
    t_end: int = 0

    @model_validator(mode="after")
    def check_markers(self) -> "TransactionLedger":
        if not self.t_0 <= self.t_k <= self.t_end:
            raise ValueError("phase markers must satisfy t_0 <= t_k <= t_end")
        previous = 0
        for tx in self.transactions:
            if tx.seq <= previous:
                raise ValueError("transaction seq must be strictly increasing")
            previous = tx.seq
        return self

    def __len__(self) -> int:
        return len(self.transactions)

    def count_by_phase(self) -> Dict[str, int]:
        counts = {phase.value: 0 for phase in Phase}
        for tx in self.transactions:
            counts[tx.phase.value] += 1
        return counts


class AgencyState(BaseModel):
    currency_stock: int = Field(default=0, ge=0)
    goods_stock: List[GoodsLot] = Field(default_factory=list)
    issuance_variant: AgencyVariant = AgencyVariant.UNIFORM_CREDIT
    issued: int = 0

    @property
    def holder_id(self) -> int:
        return AGENCY_ID

    def lot_lists(self) -> List[List[GoodsLot]]:
        return [self.goods_stock]


# ------------------------------------------------------------------ monetary

class CurrencyLedger(BaseModel):
    total_issued: int = 0
    balances: Dict[int, int] = Field(default_factory=dict)
    environment_redeemed: int = 0

    def is_conserved(self) -> bool:
        if any(b < 0 for b in self.balances.values()) or self.environment_redeemed < 0:
            return False
        return self.total_issued == sum(self.balances.values()) + self.environment_redeemed


class LiquidityState(BaseModel):
    """Reservation currency trapped in participants after t periods."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    t: int = Field(ge=0)
    R_per_period: int = Field(ge=0)
    L: Rational
    i: Rational = Fraction(1)
    alpha: Rational = Fraction(1)
    beta: Rational = Fraction(0)

    @model_validator(mode="after")
    def check_linear_growth(self) -> "LiquidityState":
        if self.i > 0 and self.alpha == 1 and self.beta == 0 and self.L != self.R_per_period * self.t:
            raise ValueError(f"L must equal R_per_period * t = {self.R_per_period * self.t}, got {self.L}")
        return self


# -------------------------------------------------------------------- engine

class EmergencyEvent(BaseModel):
    period: int = Field(ge=1)
    participant: int = Field(ge=0)
    units: int = Field(ge=0)


_MULTIPLIER_RE = re.compile(r"^multiplier\((?P<x>[^)]+)\)$")


class ScenarioConfig(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, extra="forbid")

    mode: Mode = Mode.ONE_BODY
    economy: EconomyConfig = Field(default_factory=EconomyConfig)
    periods: int = Field(default=1, ge=1)
    money_policy: MoneyPolicy = MoneyPolicy.NONE
    money_multiplier: Rational = Fraction(1)
    agency_variant: AgencyVariant = AgencyVariant.UNIFORM_CREDIT
    emergency_events: List[EmergencyEvent] = Field(default_factory=list)
    emergency_rate: Rational = Fraction(0)
    rng_seed: int = 0
    barter_order: BarterOrder = BarterOrder.LEXICOGRAPHIC
    trade_reservation: bool = False
    trace_kinds: Optional[List[int]] = None

    @model_validator(mode="before")
    @classmethod
    def split_multiplier(cls, data: Any) -> Any:
        # "multiplier(2)" is shorthand for money_policy=multiplier, money_multiplier=2
        if isinstance(data, dict) and isinstance(data.get("money_policy"), str):
            match = _MULTIPLIER_RE.match(data["money_policy"].strip())
            if match:
                data = {**data, "money_policy": "multiplier", "money_multiplier": match.group("x")}
        return data

    @field_validator("emergency_events", mode="before")
    @classmethod
    def parse_events(cls, value: Any) -> Any:
        if not isinstance(value, str):
            return value
        events = []
        for chunk in filter(None, (c.strip() for c in value.split(";"))):
            parts = chunk.split(":")
            if len(parts) != 3:
                raise ValueError(f"emergency event must be period:participant:units, got {chunk!r}")
            events.append({"period": parts[0], "participant": parts[1], "units": parts[2]})
        return events

    @field_validator("trace_kinds", mode="before")
    @classmethod
    def parse_trace_kinds(cls, value: Any) -> Any:
        if isinstance(value, str):
            text = value.strip().lower()
            if text in ("", "auto"):
                return None
            if text == "all":
                return [-1]
            return [int(k) for k in text.split(";") if k.strip()]
        return value

    @model_validator(mode="after")
    def resolve_economy(self) -> "ScenarioConfig":
        eco = self.economy
        if self.mode == Mode.ONE_BODY:
            if eco.n != 1:
                raise ValueError("one_body mode has exactly one productive participant (n=1)")
            if eco.c_portion is None:
                eco.c_portion = 1
            if eco.productivity is None:
                eco.productivity = 3
            if eco.productivity < 3:
                raise ValueError("one_body needs productivity >= 3 to cover S, C and R")
        else:
            if eco.n < 2:
                raise ValueError(f"{self.mode.value} mode needs n >= 2")
            if eco.c_portion is None:
                eco.c_portion = eco.n
            if eco.productivity is None:
                eco.productivity = 1 + eco.c_portion + self.r_portion
        if eco.productivity < 1 + eco.c_portion + self.r_portion:
            raise ValueError("productivity cannot cover the seed, consumption and reservation split")

        if self.trade_reservation and (self.mode != Mode.BARTER or self.money_policy != MoneyPolicy.NONE):
            raise ValueError("trade_reservation is only available in barter mode without money")
        if self.money_multiplier <= 0:
            raise ValueError("money_multiplier must be positive")
        if self.mode == Mode.AGENCY and self.money_policy == MoneyPolicy.MULTIPLIER:
            per_visit = self.money_multiplier * (eco.n - 1)
            if per_visit.denominator != 1:
                raise ValueError("money_multiplier must pay a whole number of E per agency visit")
        if not 0 <= self.emergency_rate <= 1:
            raise ValueError("emergency_rate must be a probability")

        holders = eco.n + eco.non_productive
        for event in self.emergency_events:
            if event.participant >= holders:
                raise ValueError(f"emergency names unknown participant {event.participant}")
            if event.period > self.periods:
                raise ValueError(f"emergency scheduled after the last period ({event.period})")
        if self.trace_kinds == [-1]:
            self.trace_kinds = list(range(eco.n))
        if self.trace_kinds is not None and any(not 0 <= k < eco.n for k in self.trace_kinds):
            raise ValueError("trace_kinds must name existing goods kinds")
        return self

    @property
    def r_portion(self) -> int:
        return self.economy.n if self.trade_reservation else 1

    @property
    def effective_multiplier(self) -> Fraction:
        if self.money_policy == MoneyPolicy.NONE:
            return Fraction(0)
        if self.money_policy == MoneyPolicy.EXACT:
            return Fraction(1)
        return self.money_multiplier

    def harvest_policy(self) -> HarvestPolicy:
        if self.mode == Mode.ONE_BODY:
            return HarvestPolicy.one_body()
        return HarvestPolicy.many_body(self.economy.c_portion, self.r_portion)

    def tracked_kinds(self) -> List[int]:
        if self.trace_kinds is not None:
            return list(self.trace_kinds)
        n = self.economy.n
        if n <= 10:
            return list(range(n))
        return [0, n - 1]


class GoodsAccount(BaseModel):
    """Where every unit of one kind went during a period."""

    kind: int
    produced: int = 0
    redeemed: int = 0
    consumed: int = 0
    expired: int = 0
    seeded: int = 0
    absorbed: int = 0

    def balances(self) -> bool:
        return self.produced + self.redeemed == self.consumed + self.expired + self.seeded + self.absorbed


class AssetMetric(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    asset: str
    dispersity: Rational
    concentration: Optional[Rational] = None
    over_reference: bool = False


class TraceSample(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    period: int
    seq: int
    phase: Optional[Phase] = None
    concentrations: Dict[str, Optional[Rational]] = Field(default_factory=dict)


class PeriodReport(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    period: int
    holdings: Dict[str, Dict[str, int]] = Field(default_factory=dict)
    assets: List[AssetMetric] = Field(default_factory=list)
    transactions: Dict[str, int] = Field(default_factory=dict)
    t_k: Optional[int] = None
    accounts: List[GoodsAccount] = Field(default_factory=list)
    waste: int = 0
    absorbed: int = 0
    freed: int = 0
    freed_goods: int = 0
    np_served: int = 0
    supportable_np: int = 0
    redeemed: int = 0
    e_r_issued: int = 0
    e_t_issued: int = 0
    total_issued: int = 0
    environment_redeemed: int = 0
    agency_currency: int = 0
    reservation_currency: int = 0
    liquidity: Rational = Fraction(0)
    e_t_term: Rational = Fraction(0)
    money_demand: Rational = Fraction(0)
    type1_index: Optional[Rational] = None
    supply_status: Optional[SupplyStatus] = None
    price_per_unit: Optional[Rational] = None
    type2_index: Optional[Rational] = None

    @property
    def transaction_count(self) -> int:
        return sum(self.transactions.values())

    def asset(self, name: str) -> Optional[AssetMetric]:
        return next((a for a in self.assets if a.asset == name), None)


# -------------------------------------------------------------------- oracle

class ScheduleSearchProblem(BaseModel):
    holdings: Tuple[Tuple[int, ...], ...]
    move_set: Literal["barter", "agency"]
    issuance: int = 0
    mixed_visits: bool = False
    monotone: bool = False
    bound: int = 64

    @property
    def n(self) -> int:
        return len(self.holdings)


# ----------------------------------------------------------------------- cli

class RunManifest(BaseModel):
    config_hash: str
    artifact_version: str
    outputs: Dict[str, str]
    rng_seed: int
