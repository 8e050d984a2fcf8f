# data/models/errors.py
from typing import Sequence


class SCRError(Exception):
    """Base class for every simulator error."""


class ConfigError(SCRError):
    pass


# core-model

class InsufficientHarvest(SCRError):
    pass


class StarvationError(SCRError):
    def __init__(self, participant_id: int, missing: Sequence[int]):
        self.participant_id = participant_id
        self.missing = list(missing)
        if self.missing:
            detail = ", ".join(f"G{k}" for k in self.missing)
        else:
            detail = "no freed goods left in the pool"
        super().__init__(f"participant {participant_id} starved ({detail})")


# metrics

class LengthMismatch(SCRError):
    pass


class ZeroDMax(SCRError):
    pass


class InsufficientData(SCRError):
    pass


# exchange

class PreconditionViolation(SCRError):
    pass


class InsufficientIssuance(SCRError):
    pass


class StockMismatch(SCRError):
    pass


# monetary

class InvalidSpec(SCRError):
    pass


class ZeroRequired(SCRError):
    pass


class ZeroReservation(SCRError):
    pass


# engine

class InsufficientBalance(SCRError):
    pass


class ScenarioFailure(SCRError):
    """A domain error raised while a period was running."""

    def __init__(self, period: int, cause: SCRError):
        self.period = period
        self.cause = cause
        super().__init__(f"period {period}: {type(cause).__name__}: {cause}")
