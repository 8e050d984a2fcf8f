import time

import pytest

from agents import VerificationAgent
from agents.verification_agent import AGREE, DIFFERS, MISMATCH, verdict
from services import metrics_service


def by_claim(claims):
    return {c["claim"]: c for c in claims}


def test_verdicts():
    assert verdict(6, 6, 6) == AGREE
    assert verdict(5, 5, 6) == DIFFERS
    assert verdict(5, None, 6) == DIFFERS
    assert verdict(5, 4, 5) == MISMATCH


def test_schedule_table_small_sizes():
    agent = VerificationAgent(schedule_sizes=(2, 3))
    claims = by_claim(agent.run("schedules"))

    assert claims["fewest barter swaps, n=3"]["oracle"] == "3"
    assert claims["fewest barter swaps, n=3"]["verdict"] == AGREE
    assert claims["fewest agency visits (uniform_credit), n=3"]["verdict"] == AGREE
    literal = claims["fewest agency visits (literal_paper), n=3"]
    assert (literal["oracle"], literal["implementation"], literal["published"]) == ("5", "5", "6")
    assert literal["verdict"] == DIFFERS
    assert claims["fewest agency visits (uniform issuance, two-way visits), n=2"]["oracle"] == "3"
    assert agent.exit_code(list(claims.values())) == 0


def test_dispersity_checks_agree():
    claims = VerificationAgent(cases=200)._check_dispersity()
    assert all(c["verdict"] != MISMATCH for c in claims)
    assert claims[0]["implementation"] == "200"


def test_broken_dispersity_is_caught(monkeypatch):
    original = metrics_service.dispersity
    monkeypatch.setattr(metrics_service, "dispersity", lambda x, xe: original(x, xe) + 1)
    agent = VerificationAgent(cases=50)
    claims = agent._check_dispersity()
    assert any(c["verdict"] == MISMATCH for c in claims)
    assert agent.exit_code(claims) == 3


def test_aggregation_records_per_step_reading():
    claims = by_claim(VerificationAgent(aggregation_sizes=(3,))._check_aggregation())
    levels = claims["E and G concentration move oppositely after t_k, n=3"]
    assert levels["verdict"] == AGREE
    changes = claims["E and G concentration changes move oppositely after t_k, n=3"]
    assert (changes["oracle"], changes["published"]) == ("non-negative", "negative")
    assert changes["verdict"] == DIFFERS


def test_table_lists_every_claim():
    agent = VerificationAgent(schedule_sizes=(2,))
    claims = agent.run("schedules")
    table = agent.table(claims)
    assert "verdict" in table.splitlines()[0]
    assert len(table.splitlines()) == len(claims) + 1


def test_unknown_scope():
    with pytest.raises(ValueError):
        VerificationAgent().run("everything")


@pytest.mark.slow
def test_full_verification_passes():
    agent = VerificationAgent()
    claims = agent.run("all")
    assert agent.exit_code(claims) == 0, agent.table([c for c in claims if c["verdict"] == MISMATCH])
    assert {c["claim"].split(", n=")[-1] for c in claims if c["claim"].startswith("fewest")} >= {"2", "3", "4"}


@pytest.mark.slow
def test_schedule_searches_finish_within_a_minute():
    agent = VerificationAgent()
    start = time.perf_counter()
    claims = agent._check_barter_schedules() + agent._check_agency_schedules()
    assert time.perf_counter() - start < 60
    assert agent.exit_code(claims) == 0
