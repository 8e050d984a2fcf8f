from fractions import Fraction
from pathlib import Path

import pytest

from data.models import AgencyVariant, ConfigError, Mode, MoneyPolicy
from data.processors import ConfigProcessor, SCRSettings, load_config

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"


def test_load_agency_scenario(write_scenario):
    path = write_scenario(
        "# doubled issuance\n"
        "mode=agency\n"
        "n=3\n"
        "periods=5\n"
        "money_policy=multiplier(2)\n"
        "agency_variant=literal_paper\n"
        "emergency_events=2:0:1;3:2:1\n"
        "emergency_rate=1/4\n"
    )
    config = load_config(path)

    assert config.mode == Mode.AGENCY
    assert config.money_policy == MoneyPolicy.MULTIPLIER
    assert config.money_multiplier == 2
    assert config.effective_multiplier == 2
    assert config.agency_variant == AgencyVariant.LITERAL_PAPER
    assert [(e.period, e.participant, e.units) for e in config.emergency_events] == [(2, 0, 1), (3, 2, 1)]
    assert config.emergency_rate == Fraction(1, 4)
    assert config.economy.productivity == 3 + 2
    assert config.economy.c_portion == 3


def test_one_body_defaults(write_scenario):
    config = load_config(write_scenario("mode=one_body\nface_value=4\nactual_cost=1\n"))
    assert config.economy.n == 1
    assert config.economy.productivity == 3
    assert config.economy.currency.actual_cost == 1
    assert config.effective_multiplier == 0


@pytest.mark.parametrize("value, expected", [
    ("auto", [0, 1, 2]),
    ("all", [0, 1, 2]),
    ("0;2", [0, 2]),
])
def test_trace_kinds(write_scenario, value, expected):
    config = load_config(write_scenario(f"mode=barter\nn=3\ntrace_kinds={value}\n"))
    assert config.tracked_kinds() == expected


def test_large_economy_tracks_first_and_last_kind(write_scenario):
    config = load_config(write_scenario("mode=agency\nn=50\nmoney_policy=exact\n"))
    assert config.tracked_kinds() == [0, 49]


def test_seed_override_from_settings(write_scenario):
    path = write_scenario("mode=barter\nn=3\nrng_seed=5\n")
    assert load_config(path).rng_seed == 5
    assert load_config(path, SCRSettings(seed=99)).rng_seed == 99


def test_settings_read_environment(monkeypatch):
    monkeypatch.setenv("SCR_WORKERS", "4")
    monkeypatch.setenv("SCR_LOG_LEVEL", "DEBUG")
    settings = SCRSettings()
    assert settings.workers == 4
    assert settings.log_level == "DEBUG"
    assert settings.seed is None


@pytest.mark.parametrize("text, fragment", [
    ("mode=barter\nn=3\ncolour=blue\n", "unknown keys colour"),
    ("mode=barter\nn 3\n", "expected key=value"),
    ("mode=swap\n", "mode"),
    ("mode=barter\nn=1\n", "n >= 2"),
    ("mode=one_body\nn=2\n", "n=1"),
    ("mode=barter\nn=3\nmoney_policy=exact\ntrade_reservation=true\n", "trade_reservation"),
    ("mode=agency\nn=3\nmoney_policy=multiplier(1/3)\n", "whole number"),
    ("mode=barter\nn=3\nemergency_rate=3/2\n", "probability"),
    ("mode=barter\nn=3\nemergency_events=1:7:1\n", "unknown participant"),
    ("mode=barter\nn=3\nperiods=2\nemergency_events=3:0:1\n", "after the last period"),
    ("mode=barter\nn=3\nemergency_events=1:0\n", "period:participant:units"),
    ("mode=barter\nn=3\ntrace_kinds=5\n", "trace_kinds"),
    ("mode=barter\nn=3\nproductivity=4\n", "productivity"),
    ("mode=one_body\nface_value=1\nactual_cost=2\n", "currency"),
])
def test_invalid_scenarios(write_scenario, text, fragment):
    with pytest.raises(ConfigError) as exc:
        load_config(write_scenario(text))
    assert fragment in str(exc.value)


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        ConfigProcessor().load(tmp_path / "missing.env")


def test_shipped_scenarios_load():
    for path in sorted(SCENARIOS.glob("*.env")):
        assert load_config(path).periods >= 1
