"""Redistributing the total endowment to make or break an equilibrium."""

from __future__ import annotations

from collections.abc import Iterator
from math import comb

from .energy import DEFAULT_BUDGET
from .equilibrium import is_nash_equilibrium
from .feasibility import SearchBudgetExceeded
from .game import Game
from .strategy import Profile

DEFAULT_ENUM_CAP = 10**7


class EnumerationTooLarge(RuntimeError):
    pass


def count_redistributions(g: Game) -> int:
    return comb(g.total_endowment + g.n - 1, g.n - 1)


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first, *rest)


def enumerate_redistributions(g: Game, cap: int = DEFAULT_ENUM_CAP) -> Iterator[dict[str, int]]:
    """Every split of the total endowment over the players, in lexicographic order."""
    count = count_redistributions(g)
    if count > cap:
        raise EnumerationTooLarge(
            f"{count} redistributions exceed the cap of {cap}; "
            "rational elimination only needs the single-player allocations"
        )
    for parts in _compositions(g.total_endowment, g.n):
        yield dict(zip(g.players, parts))


def single_player_allocations(g: Game) -> list[dict[str, int]]:
    """The allocations giving the whole total to one player, in player order."""
    total = g.total_endowment
    return [{p: total if p == q else 0 for p in g.players} for q in g.players]


def rational_construction(
    g: Game, profile: Profile, budget: int = DEFAULT_BUDGET, cap: int = DEFAULT_ENUM_CAP
) -> dict[str, int] | None:
    """First redistribution making ``profile`` an equilibrium, or ``None``.

    Raises :class:`SearchBudgetExceeded` if none was found but some candidate
    stayed undecided.
    """
    undecided = False
    for e in enumerate_redistributions(g, cap):
        outcome = is_nash_equilibrium(g.with_endowment(e), profile, budget).outcome
        if outcome == "equilibrium":
            return e
        undecided |= outcome == "unknown"
    if undecided:
        raise SearchBudgetExceeded("some redistribution could not be decided")
    return None


def rational_elimination(g: Game, profile: Profile, budget: int = DEFAULT_BUDGET) -> dict[str, int] | None:
    """First single-player allocation under which ``profile`` is not an equilibrium, or ``None``."""
    undecided = False
    for e in single_player_allocations(g):
        outcome = is_nash_equilibrium(g.with_endowment(e), profile, budget).outcome
        if outcome == "not-equilibrium":
            return e
        undecided |= outcome == "unknown"
    if undecided:
        raise SearchBudgetExceeded("some allocation could not be decided")
    return None


def rational_elimination_exhaustive(
    g: Game, profile: Profile, budget: int = DEFAULT_BUDGET, cap: int = DEFAULT_ENUM_CAP
) -> dict[str, int] | None:
    """Rational elimination over every redistribution; slow, used to cross-check the shortcut."""
    undecided = False
    for e in enumerate_redistributions(g, cap):
        outcome = is_nash_equilibrium(g.with_endowment(e), profile, budget).outcome
        if outcome == "not-equilibrium":
            return e
        undecided |= outcome == "unknown"
    if undecided:
        raise SearchBudgetExceeded("some redistribution could not be decided")
    return None
