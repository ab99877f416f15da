"""Nash-equilibrium verification for iterated electric boolean games with LTL objectives."""

from .buchi import AutomatonTooLarge, BuchiAutomaton, accepts_lasso, ltl_to_buchi
from .deviation import (
    DeviationGame,
    DeviationPreconditionError,
    RationalDeviation,
    build_deviation_game,
    deviation_to_strategy,
    has_rational_deviation,
)
from .energy import ExplicitGame, Witness, pumping_check, solve_energy_buchi
from .equilibrium import NemVerdict, is_nash_equilibrium, payoff, payoffs
from .feasibility import (
    SearchBudgetExceeded,
    build_product,
    find_nonnegative_reachable_cycle,
    is_feasible,
)
from .formats import FormatError, parse_game, parse_game_file, parse_strategy_file, serialize_game
from .game import Game, GameValidationError, validate_game, valuation_cost
from .ltl import Lasso, eval_lasso, format_formula, parse_ltl
from .redistribution import enumerate_redistributions, rational_construction, rational_elimination
from .strategy import (
    Profile,
    StrategyError,
    StrategyMachine,
    endowment_trace,
    induced_lasso,
    make_machine,
    make_profile,
    parse_strategy,
)
from .valuation import Valuation, all_valuations

__all__ = [
    "AutomatonTooLarge",
    "BuchiAutomaton",
    "DeviationGame",
    "DeviationPreconditionError",
    "ExplicitGame",
    "FormatError",
    "Game",
    "GameValidationError",
    "Lasso",
    "NemVerdict",
    "Profile",
    "RationalDeviation",
    "SearchBudgetExceeded",
    "StrategyError",
    "StrategyMachine",
    "Valuation",
    "Witness",
    "accepts_lasso",
    "all_valuations",
    "build_deviation_game",
    "build_product",
    "deviation_to_strategy",
    "endowment_trace",
    "enumerate_redistributions",
    "eval_lasso",
    "find_nonnegative_reachable_cycle",
    "format_formula",
    "has_rational_deviation",
    "induced_lasso",
    "is_feasible",
    "is_nash_equilibrium",
    "ltl_to_buchi",
    "make_machine",
    "make_profile",
    "parse_game",
    "parse_game_file",
    "parse_ltl",
    "parse_strategy",
    "parse_strategy_file",
    "payoff",
    "payoffs",
    "pumping_check",
    "rational_construction",
    "rational_elimination",
    "serialize_game",
    "solve_energy_buchi",
    "validate_game",
    "valuation_cost",
]
