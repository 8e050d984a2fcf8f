from fractions import Fraction

import pytest

from agents import SimulationAgent, run_scenario
from data.models import (
    CorrelationSign,
    InsufficientBalance,
    InsufficientIssuance,
    Phase,
    PreconditionViolation,
    ScenarioFailure,
    StarvationError,
    SupplyStatus,
)
from services.metrics_service import aggregation_correlation


def strictly_decreasing(values):
    return all(a > b for a, b in zip(values, values[1:]))


def strictly_increasing(values):
    return all(a < b for a, b in zip(values, values[1:]))


def period_trace(agent, period=1):
    return [s for s in agent.trace if s.period == period]


def test_one_body_without_money_is_stationary(make_config):
    reports = run_scenario(make_config(periods=5)).reports
    first = reports[0].model_dump(exclude={"period"})
    for report in reports:
        assert report.model_dump(exclude={"period"}) == first
        assert report.waste == 1
    account = reports[0].accounts[0]
    assert (account.produced, account.consumed, account.expired, account.seeded) == (3, 1, 1, 1)


def test_one_body_saving_replacement(make_config):
    reports = run_scenario(make_config(periods=10, money_policy="exact")).reports
    assert [r.freed_goods for r in reports] == list(range(1, 11))
    assert [r.liquidity for r in reports] == list(range(1, 11))
    assert [r.type2_index for r in reports] == list(range(1, 11))
    assert all(r.supportable_np == 1 and r.e_r_issued == 1 for r in reports)
    assert reports[-1].reservation_currency == 10


def test_zero_efficiency_frees_nothing(make_config):
    config = make_config(periods=6, money_policy="exact", economy={"currency": {"face_value": 1, "actual_cost": 1}})
    reports = run_scenario(config).reports
    assert reports[-1].freed_goods == 0
    assert all(r.absorbed == 1 for r in reports)
    assert reports[-1].liquidity == 6


def test_liquidity_over_a_hundred_periods(make_config):
    reports = run_scenario(make_config(periods=100, money_policy="exact")).reports
    assert [r.liquidity for r in reports] == list(range(1, 101))
    assert [r.type2_index for r in reports] == list(range(1, 101))


def test_no_interest_means_no_liquidity(make_config):
    config = make_config(periods=10, money_policy="exact", economy={"interest_rate": 0})
    reports = run_scenario(config).reports
    assert all(r.liquidity == 0 and r.freed_goods == 0 for r in reports)


def test_non_productive_participant_is_fed(make_config):
    config = make_config(periods=8, money_policy="exact", economy={"non_productive": 1})
    reports = run_scenario(config).reports
    assert all(r.np_served == 1 for r in reports)
    assert all(r.accounts[0].consumed == 2 for r in reports)


def test_non_productive_participant_starves_without_money(make_config):
    with pytest.raises(ScenarioFailure) as exc:
        run_scenario(make_config(periods=3, economy={"non_productive": 1}))
    assert exc.value.period == 1
    assert isinstance(exc.value.cause, StarvationError)


def test_barter_periods(make_config):
    agent = run_scenario(make_config("barter", economy={"n": 3}, periods=2))
    assert [len(ledger) for ledger in agent.ledgers] == [3, 3]
    for report in agent.reports:
        assert report.transactions[Phase.BARTER.value] == 3
        assert all(a.dispersity == 0 for a in report.assets)
        assert report.waste == 3
        assert report.t_k is None


def test_barter_with_reservation_trading(make_config):
    config = make_config("barter", economy={"n": 3}, trade_reservation=True)
    report = run_scenario(config).reports[0]
    assert report.transaction_count == 3
    assert report.holdings["P0"] == {"G0": 1, "G1": 1, "G2": 1, "R0": 1, "R1": 1, "R2": 1}
    assert report.waste == 9


def test_agency_exact_n3(make_config):
    agent = run_scenario(make_config("agency", economy={"n": 3}, periods=3, money_policy="exact"))
    reports = agent.reports
    assert all(r.transaction_count == 6 and r.t_k == 3 for r in reports)
    assert [r.e_t_issued for r in reports] == [6, 0, 0]
    assert all(r.e_r_issued == 3 for r in reports)
    assert all(r.agency_currency == 6 for r in reports)
    assert all(r.type1_index == 1 and r.supply_status == SupplyStatus.EXACT for r in reports)
    assert all(r.price_per_unit == 1 for r in reports)
    final = reports[-1]
    assert all(a.dispersity == 0 for a in final.assets if a.asset.startswith("G"))
    assert final.asset("E").concentration == 100
    assert reports[-1].money_demand == 3 * 3 + 2 * 3


def test_agency_doubled_issuance(make_config):
    reports = run_scenario(make_config("agency", economy={"n": 3}, periods=4, money_policy="multiplier(2)")).reports
    assert all(r.type1_index == 2 and r.price_per_unit == 2 for r in reports)
    assert all(r.transaction_count == 6 for r in reports)
    assert reports[0].supply_status == SupplyStatus.INFLATED


def test_agency_literal_variant(make_config):
    config = make_config("agency", economy={"n": 3}, money_policy="exact", agency_variant="literal_paper")
    report = run_scenario(config).reports[0]
    assert report.transaction_count == 5
    assert report.transactions[Phase.COLLAPSED.value] == 1
    assert report.e_t_issued == 4


def test_agency_without_money_fails(make_config):
    with pytest.raises(ScenarioFailure) as exc:
        run_scenario(make_config("agency", economy={"n": 3}))
    assert isinstance(exc.value.cause, InsufficientIssuance)
    assert exc.value.period == 1


def test_agency_under_issuance_fails(make_config):
    with pytest.raises(ScenarioFailure) as exc:
        run_scenario(make_config("agency", economy={"n": 3}, money_policy="multiplier(1/2)"))
    assert isinstance(exc.value.cause, InsufficientIssuance)


def test_oversized_harvest_breaks_protocol_precondition(make_config):
    with pytest.raises(ScenarioFailure) as exc:
        run_scenario(make_config("barter", economy={"n": 3, "productivity": 7}))
    assert isinstance(exc.value.cause, PreconditionViolation)


def test_concentration_trace_n3(make_config):
    agent = run_scenario(make_config("agency", economy={"n": 3}, money_policy="exact"))
    trace = period_trace(agent)
    t_k = agent.reports[0].t_k
    assert [s.seq for s in trace] == list(range(7))

    con_e = [s.concentrations["con_E"] for s in trace]
    assert con_e == [100, 50, Fraction(50, 3), 0, Fraction(50, 3), 50, 100]
    for k in range(3):
        sell = [s.concentrations[f"con_G{k}"] for s in trace[:t_k + 1]]
        assert sell == [100] * (t_k + 1)

    last = [s.concentrations["con_G2"] for s in trace]
    assert last[t_k:] == [100, Fraction(100, 3), 0, 0]
    assert aggregation_correlation(con_e, last, t_k) == CorrelationSign.NEGATIVE


@pytest.mark.slow
def test_concentration_trace_n200(make_config):
    n = 200
    agent = run_scenario(make_config("agency", economy={"n": n}, money_policy="exact"))
    trace = period_trace(agent)
    t_k = agent.reports[0].t_k
    assert t_k == n and len(trace) == 2 * n + 1
    assert set(trace[0].concentrations) == {"con_E", "con_G0", f"con_G{n - 1}"}

    con_e = [s.concentrations["con_E"] for s in trace]
    assert strictly_decreasing(con_e[:t_k + 1]) and con_e[t_k] == 0
    assert strictly_increasing(con_e[t_k:]) and con_e[-1] == 100

    last = [s.concentrations[f"con_G{n - 1}"] for s in trace]
    assert last[:t_k + 1] == [100] * (t_k + 1)
    assert strictly_decreasing(last[t_k:2 * n]) and last[2 * n - 1] == 0 and last[-1] == 0
    assert aggregation_correlation(con_e, last, t_k) == CorrelationSign.NEGATIVE


def test_scheduled_emergency(make_config):
    config = make_config("agency", economy={"n": 3}, periods=3, money_policy="exact", emergency_events="2:0:1")
    agent = run_scenario(config)
    second = agent.reports[1]
    assert second.redeemed == 1
    assert second.environment_redeemed == 1
    assert second.accounts[0].redeemed == 1
    assert agent.state.participant(0).currency_balance == 2
    assert agent.reports[-1].total_issued == 6 + 9


def test_trigger_emergency(make_config):
    agent = SimulationAgent(make_config(periods=1))
    p = agent.state.participant(0)
    p.currency_balance = 5
    assert agent.trigger_emergency(0, 2) == 2
    assert p.currency_balance == 3
    assert p.consumable_counts()[0] == 2
    assert agent.state.environment.redeemed == 2

    assert agent.trigger_emergency(0, 0) == 0
    assert p.currency_balance == 3


def test_trigger_emergency_without_balance(make_config):
    agent = SimulationAgent(make_config(periods=1))
    with pytest.raises(InsufficientBalance):
        agent.trigger_emergency(0, 1)


def test_emergency_without_balance_fails_the_period(make_config):
    config = make_config("barter", economy={"n": 3}, periods=2, emergency_events="2:1:1")
    with pytest.raises(ScenarioFailure) as exc:
        run_scenario(config)
    assert exc.value.period == 2
    assert isinstance(exc.value.cause, InsufficientBalance)


def test_runs_are_deterministic(make_config):
    config = make_config(
        "barter", economy={"n": 4}, periods=5, money_policy="exact",
        barter_order="random", emergency_rate="1/2", rng_seed=42,
    )
    first, second = run_scenario(config), run_scenario(config)
    assert [r.model_dump() for r in first.reports] == [r.model_dump() for r in second.reports]
    assert [l.model_dump() for l in first.ledgers] == [l.model_dump() for l in second.ledgers]
