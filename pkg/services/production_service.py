# services/production_service.py
from collections import Counter
from typing import Dict, Iterable, List, NamedTuple, Protocol
import logging

from data.models import (
    ConsumptionOutcome,
    GoodsLot,
    HarvestPolicy,
    InsufficientHarvest,
    Participant,
)

logger = logging.getLogger(__name__)


class HarvestSplit(NamedTuple):
    seed: int
    consumption: int
    reservation: int


class Depreciation(NamedTuple):
    per_holder: Dict[int, int]
    per_kind: Counter

    @property
    def total(self) -> int:
        return sum(self.per_holder.values())


class LotHolder(Protocol):
    @property
    def holder_id(self) -> int: ...

    def lot_lists(self) -> List[List[GoodsLot]]: ...


def produce(seeds: int, productivity: int) -> int:
    """Invest `seeds` units; each returns `productivity` new units."""
    if seeds < 0:
        raise ValueError("seeds must be non-negative")
    return seeds * productivity


def allocate_harvest(harvest: int, policy: HarvestPolicy) -> HarvestSplit:
    """
    Split a harvest into seed, consumption and reservation.
    Units left over after the minimum split go to consumption.
    """
    if policy.mode == "one_body":
        seed, consumption, reservation = 1, 1, 1
    else:
        seed, consumption, reservation = 1, policy.c_portion, policy.r_portion

    minimum = seed + consumption + reservation
    if harvest < minimum:
        raise InsufficientHarvest(f"harvest of {harvest} cannot cover the {seed}/{consumption}/{reservation} split")

    return HarvestSplit(seed, consumption + (harvest - minimum), reservation)


def consume(participant: Participant, kinds: int) -> ConsumptionOutcome:
    """Deduct one unit of every kind, or report the kinds that are missing."""
    counts = participant.consumable_counts()
    missing = [k for k in range(kinds) if counts[k] < 1]
    if missing:
        return ConsumptionOutcome(fulfilled=False, missing=missing)

    for k in range(kinds):
        _take(participant.consumables, k, 1)
    return ConsumptionOutcome(fulfilled=True)


def consume_freed(participant: Participant, pool: List[GoodsLot]) -> ConsumptionOutcome:
    """A non-productive participant eats one generic unit from the freed pool."""
    for lot in pool:
        if lot.quantity > 0:
            lot.quantity -= 1
            return ConsumptionOutcome(fulfilled=True, taken=lot.kind)
    return ConsumptionOutcome(fulfilled=False, missing=[])


def age_and_depreciate(holders: Iterable[LotHolder]) -> Depreciation:
    """
    Close the period: every goods lot ages by one and anything older than
    the current period is removed. Seeds and currency are not lots here.
    """
    per_holder: Dict[int, int] = {}
    per_kind: Counter = Counter()

    for holder in holders:
        removed = 0
        for lots in holder.lot_lists():
            kept = []
            for lot in lots:
                lot.age += 1
                if lot.age >= 1:
                    removed += lot.quantity
                    per_kind[lot.kind] += lot.quantity
                else:
                    kept.append(lot)
            lots[:] = kept
        per_holder[holder.holder_id] = removed

    return Depreciation(per_holder, per_kind)


def _take(lots: List[GoodsLot], kind: int, quantity: int) -> None:
    for lot in lots:
        if lot.kind != kind or lot.quantity == 0:
            continue
        step = min(lot.quantity, quantity)
        lot.quantity -= step
        quantity -= step
        if quantity == 0:
            break
    lots[:] = [lot for lot in lots if lot.quantity > 0]


class ProductionService:
    """Runs the production half of the cycle for every productive participant."""

    def __init__(self, kinds: int, productivity: int, policy: HarvestPolicy):
        self.kinds = kinds
        self.productivity = productivity
        self.policy = policy

    def harvest(self, participant: Participant) -> HarvestSplit:
        kind = participant.produces
        seeds = participant.seeds.quantity if participant.seeds else 0
        produced = produce(seeds, self.productivity)
        split = allocate_harvest(produced, self.policy)

        participant.seeds = GoodsLot(kind=kind, quantity=split.seed)
        participant.consumables.append(GoodsLot(kind=kind, quantity=split.consumption))
        participant.reservation_goods.append(GoodsLot(kind=kind, quantity=split.reservation))

        logger.debug(f"P{participant.id} harvested {produced} G{kind}: S={split.seed} C={split.consumption} R={split.reservation}")
        return split
