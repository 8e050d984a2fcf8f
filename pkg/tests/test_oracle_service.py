from fractions import Fraction

import numpy as np
import pytest

from data.models import AgencyVariant, LengthMismatch, ScheduleSearchProblem
from services.metrics_service import dispersity
from services.oracle_service import (
    barter_lower_bound,
    canonical_holdings,
    dispersity_by_definition,
    min_agency_visits,
    min_barter_transactions,
    solve_schedule,
    srf_closed_form,
)

UNIFORM = AgencyVariant.UNIFORM_CREDIT
LITERAL = AgencyVariant.LITERAL_PAPER


def test_dispersity_by_definition_examples():
    assert dispersity_by_definition([3, 0, 0], [1, 1, 1]) == 3
    assert dispersity_by_definition([4, 2], [4, 2]) == 0
    with pytest.raises(LengthMismatch):
        dispersity_by_definition([1, 2, 3], [1, 2])


def test_dual_dispersity_on_random_vectors():
    rng = np.random.default_rng(2024)
    for _ in range(1000):
        m = int(rng.integers(2, 7))
        x = [int(v) for v in rng.integers(0, 6, m)]
        xe = [Fraction(int(p), int(q)) for p, q in zip(rng.integers(0, 11, m), rng.integers(1, 4, m))]
        assert dispersity(x, xe) == dispersity_by_definition(x, xe)


@pytest.mark.parametrize("periods, eff, reservation, expected", [
    (10, 1, 1, (10, 10)),
    (0, Fraction(1, 2), 3, (0, 0)),
    (4, Fraction(3, 4), 1, (3, 4)),
])
def test_srf_closed_form(periods, eff, reservation, expected):
    assert srf_closed_form(periods, eff, reservation) == expected


@pytest.mark.parametrize("n, expected", [(2, 1), (3, 3)])
def test_min_barter_transactions(n, expected):
    assert min_barter_transactions(n) == expected


@pytest.mark.slow
def test_min_barter_transactions_n4():
    assert min_barter_transactions(4) == 6


@pytest.mark.parametrize("n, variant, expected", [
    (2, UNIFORM, 4),
    (3, UNIFORM, 6),
    (2, LITERAL, 3),
    (3, LITERAL, 5),
])
def test_min_agency_visits(n, variant, expected):
    assert min_agency_visits(n, variant) == expected


def test_two_way_visits_save_one_visit():
    assert min_agency_visits(3, UNIFORM, mixed_visits=True) == 5


@pytest.mark.parametrize("variant, expected", [(UNIFORM, 6), (LITERAL, 5)])
def test_monotone_visits_are_opt_in(variant, expected):
    assert min_agency_visits(3, variant) == expected
    assert min_agency_visits(3, variant, monotone=True) == expected


@pytest.mark.slow
@pytest.mark.parametrize("variant, expected", [(UNIFORM, 8), (LITERAL, 7)])
def test_min_agency_visits_n4(variant, expected):
    assert min_agency_visits(4, variant) == expected


@pytest.mark.slow
def test_two_way_visits_n4():
    assert min_agency_visits(4, UNIFORM, mixed_visits=True) == 7


@pytest.mark.parametrize("n", [2, 3])
def test_best_first_agrees_with_breadth_first_barter(n):
    assert min_barter_transactions(n, method="bfs") == min_barter_transactions(n)


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("variant", [UNIFORM, LITERAL])
def test_best_first_agrees_with_breadth_first_agency(n, variant):
    assert min_agency_visits(n, variant, method="bfs") == min_agency_visits(n, variant)


def test_schedule_search_scope():
    with pytest.raises(ValueError):
        min_barter_transactions(5)


def test_bound_stops_search():
    problem = ScheduleSearchProblem(holdings=canonical_holdings(3), move_set="barter", bound=2)
    assert solve_schedule(problem) is None
    assert solve_schedule(problem, method="bfs") is None


def test_barter_lower_bound():
    assert barter_lower_bound(canonical_holdings(3)) == 3
    assert barter_lower_bound(((1, 1), (1, 1))) == 0
