"""Payoffs and Nash-equilibrium membership for finite-memory profiles."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

from .deviation import RationalDeviation, has_rational_deviation
from .energy import DEFAULT_BUDGET
from .feasibility import SearchBudgetExceeded, Violation, is_feasible
from .game import Game
from .ltl import eval_lasso
from .strategy import Profile, induced_lasso


def payoff(g: Game, profile: Profile, player: str) -> int:
    """1 if the profile is feasible and its play satisfies ``player``'s objective, else 0."""
    if not is_feasible(g, profile):
        return 0
    return int(eval_lasso(g.objectives[player], induced_lasso(g, profile).lasso))


def payoffs(g: Game, profile: Profile) -> dict[str, int]:
    if not is_feasible(g, profile):
        return {p: 0 for p in g.players}
    lasso = induced_lasso(g, profile).lasso
    return {p: int(eval_lasso(g.objectives[p], lasso)) for p in g.players}


@dataclass(frozen=True)
class NemVerdict:
    outcome: Literal["equilibrium", "not-equilibrium", "unknown"]
    violation: Violation | None = None
    deviation: RationalDeviation | None = None
    unknown_player: str | None = None

    def __post_init__(self):
        reasons = (self.violation is not None) + (self.deviation is not None)
        if (self.outcome == "not-equilibrium") != (reasons == 1) or reasons > 1:
            raise ValueError("a negative verdict carries exactly one reason")
        if (self.outcome == "unknown") != (self.unknown_player is not None):
            raise ValueError("an unknown verdict names the undecided player")

    @property
    def deviator(self) -> str | None:
        return self.deviation.deviator if self.deviation else None


def is_nash_equilibrium(g: Game, profile: Profile, budget: int = DEFAULT_BUDGET) -> NemVerdict:
    """Feasibility first, then a deviation search for each unsatisfied player in order.

    A found deviation is re-simulated and must give its player payoff 1.
    """
    result = is_feasible(g, profile)
    if not result:
        return NemVerdict("not-equilibrium", violation=result.violation)
    undecided = None
    for player, value in payoffs(g, profile).items():
        if value:
            continue
        try:
            found = has_rational_deviation(g, profile, player, budget)
        except SearchBudgetExceeded:
            undecided = undecided or player
            continue
        if found is not None:
            deviated = profile.replace(g.index(player), found.machine)
            if payoff(g, deviated, player) != 1:
                raise AssertionError(f"extracted deviation of {player!r} does not reach payoff 1")
            return NemVerdict("not-equilibrium", deviation=found)
    if undecided is not None:
        return NemVerdict("unknown", unknown_player=undecided)
    return NemVerdict("equilibrium")
