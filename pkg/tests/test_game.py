import pytest
from hypothesis import given
from hypothesis import strategies as st

from ebgcheck.game import GameValidationError, validate_game, valuation_cost
from ebgcheck.valuation import Valuation

from gen import load_kids_example


def raw(**over):
    base = {
        "players": ["1", "2"],
        "atoms": {"1": ["p"], "2": ["q"]},
        "objectives": {"1": "G ((q -> X p) & (!q -> X !p))", "2": "G q"},
        "costs": {("p", True): 1, ("p", False): -1, ("q", True): 0, ("q", False): 0},
        "endowment": {"1": 0, "2": 0},
    }
    base.update(over)
    return base


def test_valid_game():
    g = validate_game(raw())
    assert g.players == ("1", "2")
    assert g.atoms == ("p", "q")
    assert g.costs[("p", False)] == -1
    assert validate_game(g) == g


@pytest.mark.parametrize(
    "over, message",
    [
        ({"atoms": {"1": ["p"], "2": ["p", "q"]}}, "partition"),
        ({"endowment": {"1": -1, "2": 0}}, "negative"),
        ({"objectives": {"1": "G r", "2": "G q"}}, "undeclared atoms"),
        ({"players": ["1", "1"]}, "duplicate"),
        ({"costs": {("p", True): 1, ("p", False): -1, ("q", True): 0}}, "not total"),
        ({"endowment": {"1": 0}}, "missing endowment"),
        ({"costs": {("p", True): 1, ("p", False): -1, ("q", True): 0, ("q", False): 0, ("r", True): 0}}, "partition"),
        ({"costs": {("p", True): 2**63, ("p", False): -1, ("q", True): 0, ("q", False): 0}}, None),
    ],
)
def test_invalid_games(over, message):
    with pytest.raises((GameValidationError, OverflowError)) as err:
        validate_game(raw(**over))
    if message:
        assert message in str(err.value)


def test_mom_costs():
    g, _ = load_kids_example()
    assert valuation_cost(g, Valuation(["gI", "gJ"], ["gI", "gJ"])) == 10
    assert valuation_cost(g, Valuation(["gI", "gJ"], [])) == -2
    zero = validate_game(raw(costs={k: 0 for k in [("p", True), ("p", False), ("q", True), ("q", False)]}))
    assert valuation_cost(zero, Valuation(["p", "q"], ["p"])) == 0


def test_cost_outside_game():
    with pytest.raises(KeyError):
        valuation_cost(validate_game(raw()), Valuation(["z"], []))


@given(st.sets(st.sampled_from(["rI", "rJ", "gI", "gJ"])), st.sets(st.sampled_from(["rI", "rJ", "gI", "gJ"])))
def test_cost_additivity(left, true):
    g, _ = load_kids_example()
    right = {"rI", "rJ", "gI", "gJ"} - left
    v = Valuation(left | right, true)
    assert valuation_cost(g, v) == valuation_cost(g, v.restrict(left)) + valuation_cost(g, v.restrict(right))


def test_with_endowment():
    g = validate_game(raw())
    h = g.with_endowment((3, 1))
    assert h.endowment == {"1": 3, "2": 1} and h.objectives == g.objectives
