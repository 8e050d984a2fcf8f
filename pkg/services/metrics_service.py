# services/metrics_service.py
"""
Dispersity and concentration of asset holdings.

Holdings are integer unit counts per holder; expectations may be rational
(currency spread over n participants). Everything is computed exactly.
"""
import math
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Union
import logging

import numpy as np
import pandas as pd

from data.models import (
    CorrelationSign,
    InsufficientData,
    LengthMismatch,
    Transaction,
    ZeroDMax,
)

logger = logging.getLogger(__name__)

Number = Union[int, Fraction]
HoldingsVector = Sequence[int]
ExpectationVector = Sequence[Number]


def dispersity(holdings: HoldingsVector, expectation: ExpectationVector) -> Fraction:
    """D = sum((X_i - Xe_i)^2) / (m - 1) over the m holders."""
    m = len(holdings)
    if m != len(expectation):
        raise LengthMismatch(f"{m} holdings against {len(expectation)} expectations")
    if m < 2:
        raise LengthMismatch("dispersity needs at least two holders")

    # scale to a common denominator so the sum of squares stays integral
    expected = [Fraction(e) for e in expectation]
    scale = math.lcm(*(e.denominator for e in expected))
    x = np.array([int(v) * scale for v in holdings], dtype=object)
    xe = np.array([int(e * scale) for e in expected], dtype=object)
    deviation = x - xe
    squares = int(np.dot(deviation, deviation))
    return Fraction(squares, scale * scale * (m - 1))


def concentration(d: Number, d_max: Number) -> Fraction:
    """Con% = 100 * D / D_max. Values above 100 are returned as they are."""
    if d_max <= 0:
        raise ZeroDMax("reference dispersity is zero; concentration is undefined")
    if d < 0:
        raise ValueError("dispersity cannot be negative")
    percent = Fraction(100) * Fraction(d) / Fraction(d_max)
    if percent > 100:
        logger.warning(f"Con% of {float(percent):.2f} exceeds 100; the D_max reference looks mischosen")
    return percent


def reference_dmax(phase_start: HoldingsVector, expectation: ExpectationVector) -> Fraction:
    """D_max is the dispersity at the start of the exchange phase."""
    return dispersity(phase_start, expectation)


def aggregation_correlation(
    con_e: Sequence[Number],
    con_g: Sequence[Number],
    t_k: int,
    on_changes: bool = False,
) -> CorrelationSign:
    """
    Sign of the Pearson correlation between currency and goods concentration
    for samples after t_k. With on_changes the per-step differences are
    correlated instead of the levels.
    """
    if len(con_e) != len(con_g):
        raise LengthMismatch("concentration series differ in length")

    frame = pd.DataFrame({
        "con_e": [float(v) for v in con_e[t_k + 1:]],
        "con_g": [float(v) for v in con_g[t_k + 1:]],
    })
    if on_changes:
        frame = frame.diff().dropna()
    if len(frame) < 2:
        raise InsufficientData(f"only {len(frame)} samples after t_k")

    r = frame["con_e"].corr(frame["con_g"])
    if pd.isna(r):
        raise InsufficientData("a series is constant after t_k")
    return CorrelationSign.NEGATIVE if r < 0 else CorrelationSign.NON_NEGATIVE


def goods_expectation(participants: int, with_agency: bool) -> List[int]:
    return [1] * participants + ([0] if with_agency else [])


def currency_expectation(participants: int, total_issued: int, with_agency: bool = True) -> List[Fraction]:
    share = Fraction(total_issued, participants)
    return [share] * participants + ([Fraction(0)] if with_agency else [])


class ConcentrationTracker:
    """
    Replays a ledger over a holdings matrix and keeps each asset's sum of
    squared deviations up to date, so a sample after every transaction costs
    O(1) per touched cell.
    """

    def __init__(
        self,
        holdings: np.ndarray,
        expectations: Sequence[Sequence[Number]],
        row_of: Dict[int, int],
        labels: Sequence[str],
        currency_column: Optional[int] = None,
        reservation_offset: Optional[int] = None,
    ):
        self.holdings = holdings.astype(np.int64).copy()
        self.expectations = [[Fraction(e) for e in col] for col in expectations]
        self.row_of = row_of
        self.labels = list(labels)
        self.currency_column = currency_column
        self.reservation_offset = reservation_offset
        self.holder_count = self.holdings.shape[0]
        if self.holder_count < 2:
            raise LengthMismatch("concentration tracking needs at least two holders")

        self.squares = [self._column_squares(c) for c in range(self.holdings.shape[1])]
        self.reference = list(self.squares)

    def _column_squares(self, column: int) -> Fraction:
        expected = self.expectations[column]
        return sum(((int(x) - e) ** 2 for x, e in zip(self.holdings[:, column], expected)), Fraction(0))

    def _move(self, row: int, column: int, delta: int) -> None:
        old = int(self.holdings[row, column])
        new = old + delta
        e = self.expectations[column][row]
        self.squares[column] += (new - e) ** 2 - (old - e) ** 2
        self.holdings[row, column] = new

    def apply(self, tx: Transaction) -> None:
        sender, receiver = self.row_of[tx.sender], self.row_of[tx.receiver]
        for kind, qty in tx.goods:
            self._move(sender, kind, -qty)
            self._move(receiver, kind, qty)
        if self.reservation_offset is not None:
            for kind, qty in tx.reservation:
                self._move(sender, self.reservation_offset + kind, -qty)
                self._move(receiver, self.reservation_offset + kind, qty)
        if tx.currency and self.currency_column is not None:
            self._move(sender, self.currency_column, -tx.currency)
            self._move(receiver, self.currency_column, tx.currency)

    def dispersity(self, column: int) -> Fraction:
        return self.squares[column] / (self.holder_count - 1)

    def concentration(self, column: int) -> Optional[Fraction]:
        # D_max is the dispersity at phase start; a blank cell when it is zero
        d_max = self.reference[column] / (self.holder_count - 1)
        try:
            return concentration(self.dispersity(column), d_max)
        except ZeroDMax:
            return None

    def column(self, label: str) -> int:
        return self.labels.index(label)
