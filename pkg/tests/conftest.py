from pathlib import Path

import pytest

from data.models import (
    AGENCY_ID,
    EconomyConfig,
    Mode,
    ScenarioConfig,
)
from services import ExchangeBook


@pytest.fixture
def make_config():
    """Build a validated ScenarioConfig; economy keywords go to EconomyConfig."""

    def _make(mode: str = "one_body", economy=None, **fields) -> ScenarioConfig:
        return ScenarioConfig(mode=Mode(mode), economy=EconomyConfig(**(economy or {})), **fields)

    return _make


@pytest.fixture
def canonical_book():
    """Post-harvest exchange book: P_i holds n units of G_i."""

    def _make(n: int, with_agency: bool = False, issuance: int = 0, reservation: bool = False) -> ExchangeBook:
        book = ExchangeBook(list(range(n)), n, with_agency, reservation)
        for i in range(n):
            book.set(i, i, n)
            if reservation:
                book.set(i, book.reservation_offset + i, n)
        if with_agency:
            book.set(AGENCY_ID, book.currency_column, issuance)
        return book

    return _make


@pytest.fixture
def write_scenario(tmp_path: Path):
    def _write(text: str, name: str = "scenario.env") -> Path:
        path = tmp_path / name
        path.write_text(text)
        return path

    return _write
