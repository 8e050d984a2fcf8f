# agents/simulation_agent.py
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional
import logging

import numpy as np

from data.models import (
    AGENCY_ID,
    AgencyState,
    AssetMetric,
    EnvironmentState,
    GoodsAccount,
    GoodsLot,
    InsufficientBalance,
    Mode,
    MoneyPolicy,
    Participant,
    PeriodReport,
    PreconditionViolation,
    Role,
    ScenarioConfig,
    ScenarioFailure,
    SCRError,
    StarvationError,
    StockMismatch,
    TraceSample,
    TransactionLedger,
    holder_label,
)
from services import ConcentrationTracker, ExchangeService, ProductionService
from services import exchange_service, metrics_service, monetary_service, production_service

logger = logging.getLogger(__name__)


@dataclass
class EconomyState:
    participants: List[Participant]
    environment: EnvironmentState = field(default_factory=EnvironmentState)
    agency: Optional[AgencyState] = None
    period: int = 0
    freed_total: int = 0

    @property
    def productive(self) -> List[Participant]:
        return [p for p in self.participants if p.role == Role.PRODUCTIVE]

    @property
    def non_productive(self) -> List[Participant]:
        return [p for p in self.participants if p.role == Role.NON_PRODUCTIVE]

    def participant(self, participant_id: int) -> Participant:
        for p in self.participants:
            if p.id == participant_id:
                return p
        raise PreconditionViolation(f"no participant with id {participant_id}")

    def holders(self) -> list:
        extra = [self.agency] if self.agency is not None else []
        return list(self.participants) + extra + [self.environment]


class SimulationAgent:
    """Runs the SCR period loop for one scenario"""

    def __init__(self, config: ScenarioConfig):
        self.config = config
        eco = config.economy
        self.n = eco.n
        self.eff = monetary_service.efficiency(eco.currency)
        self.rng = np.random.default_rng(config.rng_seed)
        self.production = ProductionService(eco.n, eco.productivity, config.harvest_policy())
        self.exchange = ExchangeService(eco.n, config.trade_reservation, config.barter_order, self.rng)
        self.state = self._initial_state()
        self.ledgers: List[TransactionLedger] = []
        self.trace: List[TraceSample] = []
        self.reports: List[PeriodReport] = []

    def _initial_state(self) -> EconomyState:
        eco = self.config.economy
        participants = [
            Participant(id=i, role=Role.PRODUCTIVE, produces=i, seeds=GoodsLot(kind=i, quantity=1))
            for i in range(eco.n)
        ]
        participants += [
            Participant(id=eco.n + j, role=Role.NON_PRODUCTIVE)
            for j in range(eco.non_productive)
        ]
        agency = None
        if self.config.mode == Mode.AGENCY:
            agency = AgencyState(issuance_variant=self.config.agency_variant)
        return EconomyState(participants=participants, agency=agency)

    @property
    def money_active(self) -> bool:
        return (
            self.config.money_policy != MoneyPolicy.NONE
            and monetary_service.step_function(self.config.economy.interest_rate) == 1
        )

    # ------------------------------------------------------------ operations

    def run_scenario(self) -> List[PeriodReport]:
        logger.info(f"🚀 Running {self.config.mode.value} scenario: n={self.n}, T={self.config.periods}")
        for _ in range(self.config.periods):
            self.step_period()
        logger.info(f"✅ Scenario finished after {len(self.reports)} periods")
        return self.reports

    def step_period(self) -> PeriodReport:
        period = self.state.period + 1
        try:
            report = self._run_period(period)
        except SCRError as e:
            raise ScenarioFailure(period, e) from e
        self.state.period = period
        self.reports.append(report)
        return report

    def trigger_emergency(self, participant_id: int, units: int) -> int:
        """Redeem `units` of E at the environment for fresh goods of the participant's own kind."""
        if units < 0:
            raise ValueError("units must be non-negative")
        p = self.state.participant(participant_id)
        if units == 0:
            return 0
        if p.currency_balance < units:
            raise InsufficientBalance(f"P{p.id} holds {p.currency_balance} E, cannot redeem {units}")
        if p.produces is None:
            raise PreconditionViolation(f"participant {p.id} has no goods kind to redeem for")

        p.currency_balance -= units
        p.consumables.append(GoodsLot(kind=p.produces, quantity=units))
        self.state.environment.redeemed += units
        logger.info(f"🚨 Emergency: P{p.id} redeemed {units} E for G{p.produces}")
        return units

    # ----------------------------------------------------------------- cycle

    def _run_period(self, period: int) -> PeriodReport:
        cfg, n, state = self.config, self.n, self.state
        env = state.environment
        productive = state.productive
        accounts = {k: GoodsAccount(kind=k) for k in range(n)}

        # 1-2: produce and allocate
        for p in productive:
            split = self.production.harvest(p)
            accounts[p.produces].produced += sum(split)
            accounts[p.produces].seeded += split.seed

        # 3: saving replacement
        e_r_issued = freed = absorbed = 0
        if self.money_active:
            for p in productive:
                sub = monetary_service.saving_replacement_step(p, currency_available=1, eff=self.eff)
                if not sub.issued:
                    continue
                env.issued += sub.issued
                e_r_issued += sub.issued
                freed += sub.freed
                absorbed += sub.absorbed
                accounts[sub.kind].absorbed += sub.absorbed
                if sub.freed:
                    env.pool.append(GoodsLot(kind=sub.kind, quantity=sub.freed))
        state.freed_total += freed

        # 4: exchange
        ledger: Optional[TransactionLedger] = None
        assets: List[AssetMetric] = []
        e_t_issued = 0
        circulating = 0
        if cfg.mode == Mode.BARTER:
            result = self.exchange.barter(productive)
        elif cfg.mode == Mode.AGENCY:
            e_t_issued = self._issue_transaction_currency()
            circulating = state.agency.currency_stock
            result = self.exchange.agency(productive, state.agency)
        else:
            result = None
        if result is not None:
            ledger = result.ledger
            self.ledgers.append(ledger)
            assets = self._measure(period, result)
        holdings = self._snapshot()

        # 5: emergencies
        redeemed = 0
        for event in cfg.emergency_events:
            if event.period == period:
                units = self.trigger_emergency(event.participant, event.units)
                if units:
                    accounts[state.participant(event.participant).produces].redeemed += units
                    redeemed += units
        if cfg.emergency_rate > 0:
            for p in productive:
                if p.currency_balance >= 1 and self.rng.random() < float(cfg.emergency_rate):
                    accounts[p.produces].redeemed += self.trigger_emergency(p.id, 1)
                    redeemed += 1

        # 6: consume
        for p in productive:
            outcome = production_service.consume(p, n)
            if outcome.starved:
                raise StarvationError(p.id, outcome.missing)
            for k in range(n):
                accounts[k].consumed += 1
        np_served = 0
        for p in state.non_productive:
            outcome = production_service.consume_freed(p, env.pool)
            if outcome.starved:
                raise StarvationError(p.id, [])
            accounts[outcome.taken].consumed += 1
            np_served += 1

        # 7: close
        depreciation = production_service.age_and_depreciate(state.holders())
        for k, qty in depreciation.per_kind.items():
            accounts[k].expired += qty
        self._audit(period, accounts)

        # 8: report
        return self._report(
            period=period,
            holdings=holdings,
            assets=assets,
            ledger=ledger,
            accounts=list(accounts.values()),
            waste=depreciation.total,
            absorbed=absorbed,
            freed=freed,
            np_served=np_served,
            redeemed=redeemed,
            e_r_issued=e_r_issued,
            e_t_issued=e_t_issued,
            circulating=circulating,
        )

    def _issue_transaction_currency(self) -> int:
        """Top the agency up to the policy's E_T level. Only happens once while E_T keeps returning."""
        agency = self.state.agency
        required = exchange_service.required_issuance(self.n, agency.issuance_variant)
        target = self.config.effective_multiplier * required
        top_up = int(target) - agency.currency_stock
        if top_up <= 0:
            return 0
        agency.currency_stock += top_up
        agency.issued += top_up
        logger.debug(f"agency issued {top_up} E_T (target {target})")
        return top_up

    def _measure(self, period: int, result: exchange_service.ExchangeResult) -> List[AssetMetric]:
        book = result.book
        with_agency = AGENCY_ID in book.row_of
        count = book.participant_count

        goods = metrics_service.goods_expectation(count, with_agency)
        expectations = [goods] * self.n
        if book.reservation_offset is not None:
            expectations += [goods] * self.n
        if with_agency:
            issued = int(result.start[:, book.currency_column].sum())
            expectations.append(metrics_service.currency_expectation(count, issued))
        else:
            expectations.append([0] * len(book.holder_ids))

        tracker = ConcentrationTracker(
            result.start, expectations, book.row_of, book.labels,
            currency_column=book.currency_column, reservation_offset=book.reservation_offset,
        )
        traced = [(f"con_G{k}", tracker.column(f"G{k}")) for k in self.config.tracked_kinds()]
        if with_agency:
            traced.insert(0, ("con_E", book.currency_column))

        def sample(seq: int, phase=None) -> None:
            self.trace.append(TraceSample(
                period=period,
                seq=seq,
                phase=phase,
                concentrations={name: tracker.concentration(col) for name, col in traced},
            ))

        sample(0)
        for tx in result.ledger.transactions:
            tracker.apply(tx)
            sample(tx.seq, tx.phase)

        if not np.array_equal(tracker.holdings, book.matrix):
            raise StockMismatch("ledger replay does not reproduce the final holdings")

        measured = list(range(len(book.labels) - 1))
        if with_agency:
            measured.append(book.currency_column)
        assets = []
        for col in measured:
            con = tracker.concentration(col)
            assets.append(AssetMetric(
                asset=book.labels[col],
                dispersity=tracker.dispersity(col),
                concentration=con,
                over_reference=con is not None and con > 100,
            ))
        return assets

    def _snapshot(self) -> Dict[str, Dict[str, int]]:
        state = self.state
        rows: Dict[str, Dict[str, int]] = {}
        for p in state.participants:
            assets = {f"G{k}": q for k, q in sorted(p.consumable_counts().items()) if q}
            for lot in sorted(p.reservation_goods, key=lambda lot: lot.kind):
                if lot.quantity:
                    assets[f"R{lot.kind}"] = assets.get(f"R{lot.kind}", 0) + lot.quantity
            if p.currency_balance:
                assets["E"] = p.currency_balance
            rows[holder_label(p.id)] = assets
        if state.agency is not None:
            assets = _lot_counts(state.agency.goods_stock)
            if state.agency.currency_stock:
                assets["E"] = state.agency.currency_stock
            rows[holder_label(AGENCY_ID)] = assets
        rows[holder_label(state.environment.holder_id)] = _lot_counts(state.environment.pool)
        return rows

    def _audit(self, period: int, accounts: Dict[int, GoodsAccount]) -> None:
        for account in accounts.values():
            if not account.balances():
                raise StockMismatch(f"goods of kind {account.kind} do not balance in period {period}: {account}")

        for holder in self.state.holders():
            for lots in holder.lot_lists():
                if any(lot.quantity < 0 for lot in lots):
                    raise StockMismatch(f"{holder_label(holder.holder_id)} holds a negative lot")
                if lots:
                    raise StockMismatch(f"{holder_label(holder.holder_id)} carries goods across the close")

        currency = monetary_service.currency_ledger(self.state.participants, self.state.agency, self.state.environment)
        if not currency.is_conserved():
            raise StockMismatch(f"currency is not conserved in period {period}: {currency}")

    def _report(self, period: int, ledger: Optional[TransactionLedger], circulating: int, **values) -> PeriodReport:
        cfg, state = self.config, self.state
        eco = cfg.economy
        productive = len(state.productive)
        agency_mode = cfg.mode == Mode.AGENCY

        policy_set = cfg.money_policy != MoneyPolicy.NONE
        L = Fraction(0)
        if policy_set:
            L = monetary_service.liquidity_state(eco.interest_rate, productive, period, eco.alpha, eco.beta).L
        c_t = self.n if agency_mode else 0
        supportable = monetary_service.supportable_np(self.eff, productive) if self.money_active else 0

        type1 = status = price = None
        if agency_mode and ledger is not None:
            required = exchange_service.required_issuance(self.n, state.agency.issuance_variant)
            type1 = monetary_service.type1_index(circulating, required)
            status = monetary_service.supply_status(type1)
            price = exchange_service.price_per_unit(ledger)

        issued = state.environment.issued + (state.agency.issued if state.agency else 0)
        report = PeriodReport(
            period=period,
            transactions=ledger.count_by_phase() if ledger is not None else {},
            t_k=ledger.t_k if agency_mode and ledger is not None else None,
            freed_goods=state.freed_total,
            supportable_np=supportable,
            total_issued=issued,
            environment_redeemed=state.environment.redeemed,
            agency_currency=state.agency.currency_stock if state.agency else 0,
            reservation_currency=sum(p.currency_balance for p in state.participants),
            liquidity=L,
            e_t_term=eco.gamma * c_t,
            money_demand=monetary_service.money_demand(L, eco.gamma, c_t),
            type1_index=type1,
            supply_status=status,
            price_per_unit=price,
            type2_index=monetary_service.type2_index(L, productive) if policy_set else None,
            **values,
        )
        logger.debug(
            f"period {period}: tx={report.transaction_count} waste={report.waste} "
            f"freed={report.freed_goods} L={report.liquidity}"
        )
        return report


def _lot_counts(lots: List[GoodsLot]) -> Dict[str, int]:
    counts: Dict[str, int] = {}
    for lot in sorted(lots, key=lambda lot: lot.kind):
        if lot.quantity:
            counts[f"G{lot.kind}"] = counts.get(f"G{lot.kind}", 0) + lot.quantity
    return counts


def run_scenario(config: ScenarioConfig) -> SimulationAgent:
    agent = SimulationAgent(config)
    agent.run_scenario()
    return agent
