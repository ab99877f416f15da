"""The deviation game of one player against the fixed machines of the others.

Vertices pair a state of the deviator's objective automaton with the
memories of every other player.  An edge reads one full round: the others
play what their machines prescribe and the deviator picks any valuation of
their own atoms.  Edge weights are the round's action costs of all players,
so a winning energy-Büchi play is exactly a deviation that keeps everyone's
endowment nonnegative and satisfies the deviator's objective.
"""

from __future__ import annotations

from collections.abc import Hashable
from dataclasses import dataclass, field

from .buchi import DEFAULT_MAX_STATES, BuchiAutomaton, ltl_to_buchi
from .energy import DEFAULT_BUDGET, Witness, solve_energy_buchi
from .feasibility import is_feasible
from .game import Game, valuation_cost
from .ltl import eval_lasso
from .strategy import Profile, StrategyMachine, induced_lasso, make_machine
from .valuation import Valuation, all_valuations

Vertex = tuple[int, tuple[str, ...]]


class DeviationPreconditionError(ValueError):
    """The profile is infeasible or the player is already satisfied."""


@dataclass
class DeviationGame:
    """One-player weighted Büchi game for ``deviator``; successors are built on demand."""

    game: Game
    profile: Profile
    deviator: str
    automaton: BuchiAutomaton
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._i = self.game.index(self.deviator)
        self._others = [k for k in range(self.game.n) if k != self._i]
        self._free = all_valuations(self.game.atoms_of_player(self.deviator))

    @property
    def dim(self) -> int:
        return self.game.n

    @property
    def initial(self) -> Vertex:
        return (self.automaton.initial, tuple(self.profile[k].initial for k in self._others))

    @property
    def credit(self) -> tuple[int, ...]:
        return self.game.endowment_vector()

    def is_accepting(self, v: Vertex) -> bool:
        return v[0] in self.automaton.accepting

    def successors(self, v: Vertex) -> list[tuple[Valuation, Vertex, tuple[int, ...]]]:
        if v in self._cache:
            return self._cache[v]
        q, mems = v
        g = self.game
        fixed = Valuation((), ())
        weight = [0] * g.n
        for k, m in zip(self._others, mems):
            chosen = self.profile[k].choose(m)
            fixed = fixed | chosen
            weight[k] = valuation_cost(g, chosen)
        out = []
        for mine in self._free:
            x = fixed | mine
            weight[self._i] = valuation_cost(g, mine)
            nxt = tuple(self.profile[k].update(m, x) for k, m in zip(self._others, mems))
            for r in self.automaton.successors(q, self.automaton.letter(x)):
                out.append((x, (r, nxt), tuple(weight)))
        self._cache[v] = out
        return out


def build_deviation_game(
    g: Game, profile: Profile, player: str, max_states: int = DEFAULT_MAX_STATES
) -> DeviationGame:
    if player not in g.players:
        raise ValueError(f"unknown player {player!r}")
    return DeviationGame(g, profile, player, ltl_to_buchi(g.objectives[player], max_states))


@dataclass(frozen=True)
class RationalDeviation:
    deviator: str
    witness: Witness
    machine: StrategyMachine


def deviation_to_strategy(witness: Witness, g: Game, player: str) -> StrategyMachine:
    """A machine replaying the witness: stem positions, then the segment in a loop."""
    steps = list(witness.stem) + list(witness.segment)
    states = [str(k) for k in range(len(steps))]
    loop = len(witness.stem)
    mine = g.atoms_of_player(player)
    choice = {s: step.label.restrict(mine) for s, step in zip(states, steps)}
    updates = {
        s: [(None, states[k + 1] if k + 1 < len(states) else states[loop])] for k, s in enumerate(states)
    }
    return make_machine(g, player, states, "0", choice, updates)


def has_rational_deviation(
    g: Game, profile: Profile, player: str, budget: int = DEFAULT_BUDGET
) -> RationalDeviation | None:
    """Search for a deviation of ``player`` that yields payoff 1.

    Requires a feasible profile under which ``player`` has payoff 0.  Raises
    :class:`~ebgcheck.feasibility.SearchBudgetExceeded` when undecided.
    """
    if not is_feasible(g, profile):
        raise DeviationPreconditionError("deviations are only defined for feasible profiles")
    if eval_lasso(g.objectives[player], induced_lasso(g, profile).lasso):
        raise DeviationPreconditionError(f"player {player!r} already has payoff 1")
    game = build_deviation_game(g, profile, player)
    witness = solve_energy_buchi(game, game.credit, budget)
    if witness is None:
        return None
    machine = deviation_to_strategy(witness, g, player)
    return RationalDeviation(player, witness, machine)


def vertex_text(v: Hashable) -> str:
    q, mems = v
    return f"q{q}[{','.join(mems)}]"
