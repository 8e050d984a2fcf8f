# agents/verification_agent.py
from fractions import Fraction
from typing import Any, Callable, Dict, List
import logging

import numpy as np
import pandas as pd

from data.models import (
    AGENCY_ID,
    AgencyVariant,
    CorrelationSign,
    CurrencySpec,
    EconomyConfig,
    Mode,
    MoneyPolicy,
    ScenarioConfig,
    format_rational,
)
from services import ExchangeBook
from services import exchange_service, metrics_service, monetary_service, oracle_service
from .simulation_agent import run_scenario

logger = logging.getLogger(__name__)

AGREE = "agree"
DIFFERS = "differs (recorded)"
MISMATCH = "MISMATCH"

SCOPES = ("all", "formulas", "schedules")
EFFICIENCIES = [Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(1)]


def _text(value: Any) -> str:
    if value is None:
        return "-"
    if isinstance(value, Fraction):
        return format_rational(value)
    if hasattr(value, "value"):
        return str(value.value)
    return str(value)


def verdict(oracle: Any, implementation: Any = None, published: Any = None) -> str:
    """MISMATCH only when the implementation disagrees with the oracle."""
    if implementation is not None and implementation != oracle:
        return MISMATCH
    if published is not None and published != oracle:
        return DIFFERS
    return AGREE


class VerificationAgent:
    """Checks every derived number against an independent oracle"""

    def __init__(self, seed: int = 0, cases: int = 1000, schedule_sizes=(2, 3, 4), aggregation_sizes=(3, 200)):
        self.seed = seed
        self.cases = cases
        self.schedule_sizes = tuple(schedule_sizes)
        self.aggregation_sizes = tuple(aggregation_sizes)

    def run(self, scope: str = "all") -> List[Dict[str, str]]:
        if scope not in SCOPES:
            raise ValueError(f"unknown scope {scope!r}; expected one of {', '.join(SCOPES)}")
        checks: List[Callable[[], List[Dict[str, str]]]] = []
        if scope in ("all", "formulas"):
            checks += [
                self._check_dispersity,
                self._check_srf,
                self._check_protocol_lengths,
                self._check_price_scaling,
                self._check_liquidity,
                self._check_aggregation,
            ]
        if scope in ("all", "schedules"):
            checks += [self._check_barter_schedules, self._check_agency_schedules]

        claims = []
        for check in checks:
            claims.extend(check())
        mismatches = sum(1 for c in claims if c["verdict"] == MISMATCH)
        logger.info(f"🔎 Verified {len(claims)} claims ({scope}): {mismatches} mismatches")
        return claims

    @staticmethod
    def exit_code(claims: List[Dict[str, str]]) -> int:
        return 3 if any(c["verdict"] == MISMATCH for c in claims) else 0

    @staticmethod
    def table(claims: List[Dict[str, str]]) -> str:
        frame = pd.DataFrame(claims, columns=["claim", "published", "oracle", "implementation", "verdict"])
        return frame.to_string(index=False)

    def _claim(self, claim: str, oracle: Any, implementation: Any = None, published: Any = None) -> Dict[str, str]:
        return {
            "claim": claim,
            "published": _text(published),
            "oracle": _text(oracle),
            "implementation": _text(implementation),
            "verdict": verdict(oracle, implementation, published),
        }

    # --------------------------------------------------------------- formulas

    def _check_dispersity(self) -> List[Dict[str, str]]:
        rng = np.random.default_rng(self.seed)
        agreed = 0
        for _ in range(self.cases):
            m = int(rng.integers(2, 7))
            holdings = [int(v) for v in rng.integers(0, 6, m)]
            expectation = [Fraction(int(p), int(q)) for p, q in zip(rng.integers(0, 11, m), rng.integers(1, 4, m))]
            if metrics_service.dispersity(holdings, expectation) == oracle_service.dispersity_by_definition(holdings, expectation):
                agreed += 1

        claims = [self._claim(f"dispersity equals its definition ({self.cases} random vectors)",
                              oracle=self.cases, implementation=agreed)]
        for n in (3, 10, 200):
            canonical = [n] + [0] * (n - 1)
            ones = [1] * n
            claims.append(self._claim(
                f"D of one-holder goods, n={n}",
                oracle=oracle_service.dispersity_by_definition(canonical, ones),
                implementation=metrics_service.dispersity(canonical, ones),
                published=n,
            ))
        start = [0, 0, 0, 6]
        expected = metrics_service.currency_expectation(3, 6)
        claims.append(self._claim(
            "D_max of E at agency start, n=3",
            oracle=oracle_service.dispersity_by_definition(start, expected),
            implementation=metrics_service.reference_dmax(start, expected),
            published=16,
        ))
        return claims

    def _check_srf(self) -> List[Dict[str, str]]:
        claims = []
        periods = 50
        for eff in EFFICIENCIES:
            config = ScenarioConfig(
                mode=Mode.ONE_BODY,
                periods=periods,
                money_policy=MoneyPolicy.EXACT,
                economy=EconomyConfig(currency=CurrencySpec(face_value=4, actual_cost=4 - 4 * eff)),
            )
            reports = run_scenario(config).reports
            agreed = sum(
                1 for r in reports
                if oracle_service.srf_closed_form(r.period, eff, 1) == (r.freed_goods, r.liquidity)
            )
            claims.append(self._claim(
                f"freed goods and L match closed form, Eff={format_rational(eff)}, T<={periods}",
                oracle=periods, implementation=agreed,
            ))
        claims.append(self._claim(
            "supportable nP with Eff=1 equals productive count (P=10)",
            oracle=10, implementation=monetary_service.supportable_np(1, 10), published=10,
        ))
        return claims

    def _check_protocol_lengths(self) -> List[Dict[str, str]]:
        claims = []
        for n in (2, 3, 4, 10, 50, 200):
            book = ExchangeBook(list(range(n)), n, with_agency=False)
            for i in range(n):
                book.set(i, i, n)
            ledger = exchange_service.run_barter(book, n)
            claims.append(self._claim(f"barter ledger length, n={n}", oracle=n * (n - 1) // 2,
                                      implementation=len(ledger), published=n * (n - 1) // 2))
        for n in (2, 3, 10, 200):
            for variant, expected in ((AgencyVariant.UNIFORM_CREDIT, 2 * n), (AgencyVariant.LITERAL_PAPER, 2 * n - 1)):
                claims.append(self._claim(
                    f"agency ledger length ({variant.value}), n={n}",
                    oracle=expected,
                    implementation=len(self._agency_ledger(n, variant)),
                    published=expected,
                ))
            claims.append(self._claim(
                f"literal issuance, n={n}", oracle=(n - 1) ** 2,
                implementation=exchange_service.required_issuance(n, AgencyVariant.LITERAL_PAPER),
                published=(n - 1) ** 2,
            ))
        return claims

    @staticmethod
    def _agency_ledger(n: int, variant: AgencyVariant, multiplier: int = 1):
        book = ExchangeBook(list(range(n)), n, with_agency=True)
        for i in range(n):
            book.set(i, i, n)
        book.set(AGENCY_ID, book.currency_column, multiplier * exchange_service.required_issuance(n, variant))
        return exchange_service.run_agency(book, n, variant)

    def _check_price_scaling(self) -> List[Dict[str, str]]:
        claims = []
        baseline = self._agency_ledger(3, AgencyVariant.UNIFORM_CREDIT)
        for multiplier in (1, 2, 10):
            ledger = self._agency_ledger(3, AgencyVariant.UNIFORM_CREDIT, multiplier)
            claims.append(self._claim(
                f"price per unit at {multiplier}x issuance, n=3",
                oracle=Fraction(multiplier), implementation=exchange_service.price_per_unit(ledger),
                published=Fraction(multiplier),
            ))
            claims.append(self._claim(
                f"ledger length unchanged at {multiplier}x issuance, n=3",
                oracle=len(baseline), implementation=len(ledger),
            ))
        return claims

    def _check_liquidity(self) -> List[Dict[str, str]]:
        periods = 100
        config = ScenarioConfig(mode=Mode.ONE_BODY, periods=periods, money_policy=MoneyPolicy.EXACT)
        reports = run_scenario(config).reports
        matched = sum(1 for r in reports if r.liquidity == r.period and r.type2_index == r.period)
        claims = [self._claim(f"L(t) = t and Type II index = t over {periods} periods",
                              oracle=periods, implementation=matched)]

        idle = ScenarioConfig(mode=Mode.ONE_BODY, periods=periods, money_policy=MoneyPolicy.EXACT,
                              economy=EconomyConfig(interest_rate=0))
        reports = run_scenario(idle).reports
        claims.append(self._claim("L stays 0 when i=0", oracle=0,
                                  implementation=sum(1 for r in reports if r.liquidity != 0)))
        return claims

    def _check_aggregation(self) -> List[Dict[str, str]]:
        claims = []
        for n in self.aggregation_sizes:
            config = ScenarioConfig(mode=Mode.AGENCY, periods=1, money_policy=MoneyPolicy.EXACT,
                                    economy=EconomyConfig(n=n))
            agent = run_scenario(config)
            t_k = agent.reports[0].t_k
            con_e = [s.concentrations["con_E"] for s in agent.trace]
            last = f"con_G{config.tracked_kinds()[-1]}"
            con_g = [s.concentrations[last] for s in agent.trace]
            sign = metrics_service.aggregation_correlation(con_e, con_g, t_k)
            claims.append(self._claim(f"E and G concentration move oppositely after t_k, n={n}",
                                      oracle=CorrelationSign.NEGATIVE, implementation=sign,
                                      published=CorrelationSign.NEGATIVE))
            claims.append(self._claim(
                f"E and G concentration changes move oppositely after t_k, n={n}",
                oracle=metrics_service.aggregation_correlation(con_e, con_g, t_k, on_changes=True),
                published=CorrelationSign.NEGATIVE,
            ))
        return claims

    # -------------------------------------------------------------- schedules

    def _check_barter_schedules(self) -> List[Dict[str, str]]:
        claims = []
        for n in self.schedule_sizes:
            book = ExchangeBook(list(range(n)), n, with_agency=False)
            for i in range(n):
                book.set(i, i, n)
            claims.append(self._claim(
                f"fewest barter swaps, n={n}",
                oracle=oracle_service.min_barter_transactions(n),
                implementation=len(exchange_service.run_barter(book, n)),
                published=n * (n - 1) // 2,
            ))
        return claims

    def _check_agency_schedules(self) -> List[Dict[str, str]]:
        claims = []
        for n in self.schedule_sizes:
            for variant in AgencyVariant:
                claims.append(self._claim(
                    f"fewest agency visits ({variant.value}), n={n}",
                    oracle=oracle_service.min_agency_visits(n, variant),
                    implementation=len(self._agency_ledger(n, variant)),
                    published=2 * n,
                ))
            claims.append(self._claim(
                f"fewest agency visits (uniform issuance, two-way visits), n={n}",
                oracle=oracle_service.min_agency_visits(n, AgencyVariant.UNIFORM_CREDIT, mixed_visits=True),
                published=2 * n,
            ))
        return claims

