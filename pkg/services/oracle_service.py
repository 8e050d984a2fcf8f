# services/oracle_service.py
"""
Brute-force reference implementations.

Nothing here imports the metrics or exchange services: every value is
recomputed from the definitions so it can be compared against them.
"""
import heapq
import math
from collections import deque
from fractions import Fraction
from itertools import count, product
from typing import Callable, Hashable, Iterable, Optional, Sequence, Tuple
import logging

from data.models import (
    AgencyVariant,
    LengthMismatch,
    ScheduleSearchProblem,
)

logger = logging.getLogger(__name__)

State = Tuple[Tuple[int, ...], ...]


def dispersity_by_definition(holdings: Sequence, expectation: Sequence) -> Fraction:
    if len(holdings) != len(expectation):
        raise LengthMismatch(f"{len(holdings)} holdings against {len(expectation)} expectations")
    if len(holdings) < 2:
        raise LengthMismatch("dispersity needs at least two holders")

    total = Fraction(0)
    for i in range(len(holdings)):
        diff = Fraction(holdings[i]) - Fraction(expectation[i])
        total += diff * diff
    return total / (len(holdings) - 1)


def srf_closed_form(periods: int, eff, reservation: int) -> Tuple[int, int]:
    """Freed goods and trapped liquidity after `periods` of saving replacement."""
    if periods < 0:
        raise ValueError("periods must be non-negative")
    freed = math.floor(Fraction(eff) * periods * reservation)
    return freed, reservation * periods


# ------------------------------------------------------------------ search

def breadth_first_search(
    start: Hashable,
    is_goal: Callable[[Hashable], bool],
    neighbours: Callable[[Hashable], Iterable[Hashable]],
    bound: Optional[int] = None,
) -> Optional[int]:
    """Length of the shortest move sequence from start to a goal state."""
    if is_goal(start):
        return 0
    visited = {start}
    layer = deque([start])
    depth = 0
    while layer and (bound is None or depth < bound):
        depth += 1
        next_layer = deque()
        for state in layer:
            for nxt in neighbours(state):
                if nxt in visited:
                    continue
                if is_goal(nxt):
                    return depth
                visited.add(nxt)
                next_layer.append(nxt)
        layer = next_layer
    return None


def best_first_search(
    start: Hashable,
    is_goal: Callable[[Hashable], bool],
    neighbours: Callable[[Hashable], Iterable[Hashable]],
    lower_bound: Callable[[Hashable], int],
    bound: Optional[int] = None,
) -> Optional[int]:
    """
    Shortest move sequence using an admissible, consistent lower bound on
    the moves still needed. Exhaustive over every state with g + h below
    the answer, so the result is the true minimum.
    """
    tie = count()
    best = {start: 0}
    frontier = [(lower_bound(start), 0, next(tie), start)]
    while frontier:
        _, neg_g, _, state = heapq.heappop(frontier)
        g = -neg_g
        if g > best.get(state, g):
            continue
        if is_goal(state):
            return g
        if bound is not None and g >= bound:
            continue
        for nxt in neighbours(state):
            if g + 1 < best.get(nxt, g + 2):
                best[nxt] = g + 1
                heapq.heappush(frontier, (g + 1 + lower_bound(nxt), -(g + 1), next(tie), nxt))
    return None


# ------------------------------------------------------------------ barter

def canonical_holdings(n: int) -> State:
    """P_i holds n units of G_i and nothing else."""
    return tuple(tuple(n if k == i else 0 for k in range(n)) for i in range(n))


def _even(n: int) -> State:
    return tuple(tuple(1 for _ in range(n)) for _ in range(n))


def barter_moves(state: State) -> Iterable[State]:
    """One unit of one kind for one unit of another, between two participants."""
    n = len(state)
    for a in range(n):
        for b in range(a + 1, n):
            for x in range(n):
                if state[a][x] == 0:
                    continue
                for y in range(n):
                    if y == x or state[b][y] == 0:
                        continue
                    ha, hb = list(state[a]), list(state[b])
                    ha[x] -= 1
                    ha[y] += 1
                    hb[y] -= 1
                    hb[x] += 1
                    nxt = list(state)
                    nxt[a], nxt[b] = tuple(ha), tuple(hb)
                    yield tuple(nxt)


def barter_lower_bound(state: State) -> int:
    # a swap hands out two units, so it can cover at most two gaps
    missing = sum(1 for row in state for q in row if q == 0)
    return (missing + 1) // 2


# ------------------------------------------------------------------ agency

def _agency_moves(problem: ScheduleSearchProblem) -> Callable[[State], Iterable[State]]:
    n = problem.n
    totals = [sum(row[k] for row in problem.holdings) for k in range(n)]
    initial = [sum(row) for row in problem.holdings]

    def moves(state: State) -> Iterable[State]:
        at_agency = [totals[k] - sum(row[k] for row in state) for k in range(n)]
        # a participant's E is what it delivered minus what it took, at 1 E per unit
        credit = [initial[p] - sum(state[p]) for p in range(n)]
        agency_e = problem.issuance - sum(credit)

        for p in range(n):
            held = state[p]
            if problem.monotone:
                ranges = [
                    range(1, held[k] + 1) if k == p else range(held[k], min(1, held[k] + at_agency[k]) + 1)
                    for k in range(n)
                ]
            else:
                ranges = [range(0, held[k] + at_agency[k] + 1) for k in range(n)]

            for new in product(*ranges):
                if new == held:
                    continue
                if not problem.mixed_visits:
                    sells = all(new[k] <= held[k] for k in range(n))
                    buys = all(new[k] >= held[k] for k in range(n))
                    if not (sells or buys):
                        continue
                new_credit = initial[p] - sum(new)
                if new_credit < 0 or new_credit - credit[p] > agency_e:
                    continue
                nxt = list(state)
                nxt[p] = tuple(new)
                yield tuple(nxt)

    return moves


def _agency_lower_bound(problem: ScheduleSearchProblem) -> Callable[[State], int]:
    def single_direction(state: State) -> int:
        # a sell visit cannot also buy: surplus and gaps need separate visits
        return sum((max(row) > 1) + (min(row) == 0) for row in state)

    def mixed(state: State) -> int:
        return sum(1 for row in state if any(q != 1 for q in row))

    return mixed if problem.mixed_visits else single_direction


def solve_schedule(problem: ScheduleSearchProblem, method: str = "best_first") -> Optional[int]:
    goal = _even(problem.n)

    def is_goal(state: State) -> bool:
        return state == goal

    if problem.move_set == "barter":
        neighbours, lower_bound = barter_moves, barter_lower_bound
    else:
        neighbours, lower_bound = _agency_moves(problem), _agency_lower_bound(problem)

    if method == "bfs":
        return breadth_first_search(problem.holdings, is_goal, neighbours, problem.bound)
    return best_first_search(problem.holdings, is_goal, neighbours, lower_bound, problem.bound)


def _check_scope(n: int) -> None:
    if n not in (2, 3, 4):
        raise ValueError("schedule search is limited to n in {2, 3, 4}")


def min_barter_transactions(n: int, method: str = "best_first") -> int:
    _check_scope(n)
    problem = ScheduleSearchProblem(holdings=canonical_holdings(n), move_set="barter")
    result = solve_schedule(problem, method)
    logger.debug(f"barter search n={n} ({method}): {result}")
    return result


def min_agency_visits(
    n: int,
    variant: AgencyVariant,
    mixed_visits: Optional[bool] = None,
    method: str = "best_first",
    monotone: bool = False,
) -> int:
    """
    Fewest agency visits that reach the even distribution. Uniform credit
    visits go one way (sell or buy); the literal variant lets a visit do
    both. The search is exhaustive unless monotone restricts it to visits
    that never undo progress.
    """
    _check_scope(n)
    issuance = (n - 1) ** 2 if variant == AgencyVariant.LITERAL_PAPER else n * (n - 1)
    if mixed_visits is None:
        mixed_visits = variant == AgencyVariant.LITERAL_PAPER
    problem = ScheduleSearchProblem(
        holdings=canonical_holdings(n),
        move_set="agency",
        issuance=issuance,
        mixed_visits=mixed_visits,
        monotone=monotone,
    )
    result = solve_schedule(problem, method)
    logger.debug(f"agency search n={n} {variant.value} mixed={mixed_visits}: {result}")
    return result
