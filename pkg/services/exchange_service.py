# services/exchange_service.py
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, NamedTuple, Optional, Sequence
import logging

import numpy as np

from data.models import (
    AGENCY_ID,
    AgencyState,
    AgencyVariant,
    BarterOrder,
    GoodsLot,
    InsufficientIssuance,
    Participant,
    Phase,
    PreconditionViolation,
    StockMismatch,
    Transaction,
    TransactionLedger,
)

logger = logging.getLogger(__name__)


class ExchangeBook:
    """
    Holdings during one exchange phase: a row per productive participant
    (plus the agency when present) and a column per goods kind, optional
    reservation columns, and the transaction currency E_T last.
    """

    def __init__(self, participant_ids: Sequence[int], kinds: int, with_agency: bool, reservation: bool = False):
        self.kinds = kinds
        self.holder_ids = list(participant_ids) + ([AGENCY_ID] if with_agency else [])
        self.row_of = {holder: row for row, holder in enumerate(self.holder_ids)}
        self.reservation_offset = kinds if reservation else None
        self.labels = [f"G{k}" for k in range(kinds)]
        if reservation:
            self.labels += [f"R{k}" for k in range(kinds)]
        self.labels.append("E")
        self.currency_column = len(self.labels) - 1
        self.matrix = np.zeros((len(self.holder_ids), len(self.labels)), dtype=np.int64)

    @property
    def participant_count(self) -> int:
        return len(self.holder_ids) - (1 if AGENCY_ID in self.row_of else 0)

    def get(self, holder: int, column: int) -> int:
        return int(self.matrix[self.row_of[holder], column])

    def set(self, holder: int, column: int, quantity: int) -> None:
        self.matrix[self.row_of[holder], column] = quantity

    def _move(self, sender: int, receiver: int, column: int, quantity: int) -> None:
        if quantity < 0:
            sender, receiver, quantity = receiver, sender, -quantity
        row = self.row_of[sender]
        if self.matrix[row, column] < quantity:
            raise StockMismatch(
                f"holder {sender} has {self.matrix[row, column]} {self.labels[column]}, needs {quantity}"
            )
        self.matrix[row, column] -= quantity
        self.matrix[self.row_of[receiver], column] += quantity

    def apply(self, tx: Transaction) -> None:
        for kind, qty in tx.goods:
            self._move(tx.sender, tx.receiver, kind, qty)
        for kind, qty in tx.reservation:
            self._move(tx.sender, tx.receiver, self.reservation_offset + kind, qty)
        if tx.currency:
            self._move(tx.sender, tx.receiver, self.currency_column, tx.currency)


def _check_canonical(book: ExchangeBook, n: int) -> None:
    for i in range(n):
        row = book.matrix[book.row_of[i]]
        expected = np.zeros(len(book.labels), dtype=np.int64)
        expected[i] = n
        if book.reservation_offset is not None:
            expected[book.reservation_offset + i] = n
        if not np.array_equal(row, expected):
            raise PreconditionViolation(f"P{i} does not hold the canonical post-harvest bundle")


def run_barter(
    book: ExchangeBook,
    n: int,
    order: BarterOrder = BarterOrder.LEXICOGRAPHIC,
    rng: Optional[np.random.Generator] = None,
) -> TransactionLedger:
    """Every unordered pair swaps one unit of each other's kind, once."""
    _check_canonical(book, n)

    pairs = list(combinations(range(n), 2))
    if order == BarterOrder.RANDOM:
        if rng is None:
            raise PreconditionViolation("random barter order needs a seeded generator")
        pairs = [pairs[i] for i in rng.permutation(len(pairs))]

    bundle_reservation = book.reservation_offset is not None
    transactions = []
    for seq, (i, j) in enumerate(pairs, start=1):
        swap = ((i, 1), (j, -1))
        tx = Transaction(
            seq=seq,
            phase=Phase.BARTER,
            sender=i,
            receiver=j,
            goods=swap,
            reservation=swap if bundle_reservation else (),
        )
        book.apply(tx)
        transactions.append(tx)

    logger.debug(f"barter among {n} participants took {len(transactions)} swaps")
    return TransactionLedger(transactions=transactions, t_0=0, t_k=0, t_end=len(transactions))


def required_issuance(n: int, variant: AgencyVariant) -> int:
    if n < 2:
        raise PreconditionViolation("the agency protocol needs at least two participants")
    if variant == AgencyVariant.LITERAL_PAPER:
        return (n - 1) ** 2
    return n * (n - 1)


def run_agency(book: ExchangeBook, n: int, variant: AgencyVariant) -> TransactionLedger:
    """
    Sell phase: participants deliver their surplus to the agency for E until
    the agency's currency runs out (t_k). Buy phase: they spend it on one
    unit of every foreign kind. Under the literal variant the last
    participant sells and buys in a single visit.
    """
    _check_canonical(book, n)
    required = required_issuance(n, variant)
    stock = book.get(AGENCY_ID, book.currency_column)
    if stock < required:
        raise InsufficientIssuance(f"agency holds {stock} E, protocol needs {required}")

    per_visit = Fraction(stock, required) * (n - 1)
    if per_visit.denominator != 1:
        raise PreconditionViolation(f"issuance of {stock} E does not pay a whole amount per visit")
    pay = int(per_visit)

    sellers = range(n) if variant == AgencyVariant.UNIFORM_CREDIT else range(n - 1)
    transactions: List[Transaction] = []

    def record(tx_phase: Phase, participant: int, goods, currency: int) -> None:
        tx = Transaction(
            seq=len(transactions) + 1,
            phase=tx_phase,
            sender=participant,
            receiver=AGENCY_ID,
            goods=tuple(goods),
            currency=currency,
        )
        book.apply(tx)
        transactions.append(tx)

    for i in sellers:
        record(Phase.SELL, i, [(i, n - 1)], -pay)
    t_k = len(transactions)
    if book.get(AGENCY_ID, book.currency_column) != 0:
        raise StockMismatch("agency currency was not exhausted at the end of the sell phase")

    if variant == AgencyVariant.LITERAL_PAPER:
        last = n - 1
        record(Phase.COLLAPSED, last, [(last, n - 1)] + [(k, -1) for k in range(n) if k != last], 0)

    for i in sellers:
        record(Phase.BUY, i, [(k, -1) for k in range(n) if k != i], pay)

    logger.debug(f"agency protocol ({variant.value}) for {n} participants took {len(transactions)} visits, t_k={t_k}")
    return TransactionLedger(transactions=transactions, t_0=0, t_k=t_k, t_end=len(transactions))


def price_per_unit(ledger: TransactionLedger) -> Fraction:
    """Nominal E paid per goods unit delivered during the sell phase."""
    paid = 0
    delivered = 0
    for tx in ledger.transactions:
        if tx.phase != Phase.SELL:
            continue
        paid += -tx.currency
        delivered += sum(q for _, q in tx.goods)
    if delivered == 0:
        raise PreconditionViolation("the ledger has no sell phase to price")
    return Fraction(paid, delivered)


class ExchangeResult(NamedTuple):
    ledger: TransactionLedger
    start: np.ndarray
    book: ExchangeBook


class ExchangeService:
    """Moves the post-harvest bundles through the configured protocol."""

    def __init__(self, kinds: int, trade_reservation: bool = False,
                 order: BarterOrder = BarterOrder.LEXICOGRAPHIC,
                 rng: Optional[np.random.Generator] = None):
        self.kinds = kinds
        self.trade_reservation = trade_reservation
        self.order = order
        self.rng = rng

    def _open_book(self, participants: Sequence[Participant], with_agency: bool) -> ExchangeBook:
        book = ExchangeBook([p.id for p in participants], self.kinds, with_agency, self.trade_reservation)
        for p in participants:
            for kind, qty in p.consumable_counts().items():
                book.set(p.id, kind, qty)
            if self.trade_reservation:
                for lot in p.reservation_goods:
                    column = book.reservation_offset + lot.kind
                    book.set(p.id, column, book.get(p.id, column) + lot.quantity)
        return book

    def _close_book(self, book: ExchangeBook, participants: Sequence[Participant],
                    agency: Optional[AgencyState] = None) -> None:
        for p in participants:
            row = book.matrix[book.row_of[p.id]]
            p.consumables = [GoodsLot(kind=k, quantity=int(row[k])) for k in range(self.kinds) if row[k] > 0]
            if self.trade_reservation:
                offset = book.reservation_offset
                p.reservation_goods = [
                    GoodsLot(kind=k, quantity=int(row[offset + k])) for k in range(self.kinds) if row[offset + k] > 0
                ]
            p.currency_balance += int(row[book.currency_column])
        if agency is not None:
            row = book.matrix[book.row_of[AGENCY_ID]]
            agency.currency_stock = int(row[book.currency_column])
            agency.goods_stock = [GoodsLot(kind=k, quantity=int(row[k])) for k in range(self.kinds) if row[k] > 0]

    def barter(self, participants: Sequence[Participant]) -> ExchangeResult:
        book = self._open_book(participants, with_agency=False)
        start = book.matrix.copy()
        ledger = run_barter(book, self.kinds, self.order, self.rng)
        self._close_book(book, participants)
        return ExchangeResult(ledger, start, book)

    def agency(self, participants: Sequence[Participant], agency: AgencyState) -> ExchangeResult:
        book = self._open_book(participants, with_agency=True)
        book.set(AGENCY_ID, book.currency_column, agency.currency_stock)
        start = book.matrix.copy()
        ledger = run_agency(book, self.kinds, agency.issuance_variant)
        self._close_book(book, participants, agency)
        return ExchangeResult(ledger, start, book)
