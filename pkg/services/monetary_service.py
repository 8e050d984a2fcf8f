# services/monetary_service.py
import math
from fractions import Fraction
from typing import Iterable, NamedTuple, Optional, Union
import logging

from data.models import (
    AgencyState,
    CurrencyLedger,
    CurrencySpec,
    EnvironmentState,
    InvalidSpec,
    LiquidityState,
    Participant,
    SupplyStatus,
    ZeroRequired,
    ZeroReservation,
    AGENCY_ID,
)

logger = logging.getLogger(__name__)

Number = Union[int, Fraction]


class Substitution(NamedTuple):
    kind: Optional[int]
    issued: int
    freed: int
    absorbed: int


def efficiency(spec: CurrencySpec) -> Fraction:
    """Eff = (V_F - V_C) / V_F."""
    if spec.face_value <= 0:
        raise InvalidSpec("face value must be positive")
    if not 0 <= spec.actual_cost <= spec.face_value:
        raise InvalidSpec(f"actual cost {spec.actual_cost} outside [0, {spec.face_value}]")
    return (spec.face_value - spec.actual_cost) / spec.face_value


def step_function(i: Number) -> int:
    return 1 if i > 0 else 0


def saving_replacement_step(participant: Participant, currency_available: int, eff: Number = 1) -> Substitution:
    """
    Swap one reservation unit for one unit of E. The participant's exact
    credit grows by Eff; the R unit counts as freed when the credit crosses
    the next whole number and as absorbed currency cost otherwise.
    """
    if currency_available < 1 or participant.reservation_count() < 1:
        return Substitution(participant.produces, 0, 0, 0)

    lot = next(lot for lot in participant.reservation_goods if lot.quantity > 0)
    lot.quantity -= 1
    participant.reservation_goods = [r for r in participant.reservation_goods if r.quantity > 0]
    participant.currency_balance += 1

    participant.freed_credit += Fraction(eff)
    whole = math.floor(participant.freed_credit)
    freed = whole - participant.freed_released
    participant.freed_released = whole

    return Substitution(lot.kind, 1, freed, 1 - freed)


def supportable_np(eff: Number, productive_count: int) -> int:
    if not 0 <= eff <= 1:
        raise InvalidSpec("efficiency must lie in [0, 1]")
    return math.floor(Fraction(eff) * productive_count)


def liquidity(i: Number, r_per_period: Number, t: int, alpha: Number = 1, beta: Number = 0) -> Fraction:
    """L(i, R*t) = eps(i) * (alpha * R * t + beta)."""
    if t < 0:
        raise ValueError("t must be non-negative")
    return step_function(i) * (Fraction(alpha) * r_per_period * t + Fraction(beta))


def liquidity_state(i: Number, r_per_period: int, t: int, alpha: Number = 1, beta: Number = 0) -> LiquidityState:
    return LiquidityState(
        t=t,
        R_per_period=r_per_period,
        L=liquidity(i, r_per_period, t, alpha, beta),
        i=i,
        alpha=alpha,
        beta=beta,
    )


def money_demand(L: Number, gamma: Number, c_t: Number) -> Fraction:
    """E_d = E_R + E_T = L + gamma * C_T."""
    return Fraction(L) + Fraction(gamma) * c_t


def type1_index(issued_e_t: Number, required_e_t: Number) -> Fraction:
    """Circulation inflation: issued over required transaction currency."""
    if required_e_t <= 0:
        raise ZeroRequired("required transaction currency must be positive")
    index = Fraction(issued_e_t) / Fraction(required_e_t)
    if index < 1:
        logger.warning(f"transaction currency under-supplied (index {index}); more transactions would be needed")
    return index


def supply_status(index: Number) -> SupplyStatus:
    if index < 1:
        return SupplyStatus.UNDER_SUPPLY
    if index == 1:
        return SupplyStatus.EXACT
    return SupplyStatus.INFLATED


def type2_index(L: Number, r_per_period: Number) -> Fraction:
    """Reservation inflation: trapped liquidity over per-period reservation."""
    if r_per_period <= 0:
        raise ZeroReservation("reservation per period must be positive")
    return Fraction(L) / Fraction(r_per_period)


def currency_ledger(
    participants: Iterable[Participant],
    agency: Optional[AgencyState],
    environment: EnvironmentState,
) -> CurrencyLedger:
    balances = {p.id: p.currency_balance for p in participants}
    issued = environment.issued
    if agency is not None:
        balances[AGENCY_ID] = agency.currency_stock
        issued += agency.issued
    return CurrencyLedger(
        total_issued=issued,
        balances=balances,
        environment_redeemed=environment.redeemed,
    )
