import random

import pytest

from ebgcheck.strategy import (
    StrategyError,
    constant_machine,
    cyclic_machine,
    endowment_trace,
    format_strategy,
    induced_lasso,
    make_machine,
    make_profile,
    parse_strategy,
    step,
)
from ebgcheck.valuation import Valuation

from gen import load_dev_example, load_kids_example, random_game, random_profile, simulate_energies


def test_fig1_machines():
    g, profile = load_kids_example()
    mom = profile[2]
    assert mom.states == tuple("012345")
    assert mom.choose("5") == Valuation(["gI", "gJ"], ["gI", "gJ"])
    assert mom.choose("0") == Valuation(["gI", "gJ"], [])
    assert len(profile[0].states) == 1


def test_fig1_play():
    g, profile = load_kids_example()
    play = induced_lasso(g, profile)
    assert play.stem_length == 0 and play.cycle_length == 6
    assert [sorted(x.true_atoms) for x in play.lasso.cycle] == [["rI", "rJ"]] * 5 + [["gI", "gJ", "rI", "rJ"]]
    assert endowment_trace(g, profile, "M", 6).values == (0, 2, 4, 6, 8, 10, 0)


def test_example3_plays():
    g, sigma, tau = load_dev_example()
    play = induced_lasso(g, sigma)
    assert play.lasso.stem == () and play.lasso.cycle == (Valuation(["p", "q"]),)
    assert endowment_trace(g, tau, "1", 3).values == (0, 1, 0, -1)
    assert endowment_trace(g, sigma, "2", 4).values == (0,) * 5


def test_foreign_atom_choice():
    g, _, _ = load_dev_example()
    with pytest.raises(StrategyError, match="other players"):
        make_machine(g, "1", ["0"], "0", {"0": {"p": True, "q": True}}, {"0": [("*", "0")]})
    with pytest.raises(StrategyError, match="omits"):
        make_machine(g, "1", ["0"], "0", {"0": {}}, {"0": [("*", "0")]})


def test_non_exhaustive_guards():
    g, _, _ = load_dev_example()
    with pytest.raises(StrategyError):
        make_machine(g, "1", ["0"], "0", {"0": {"p": True}}, {"0": [("q", "0")]})
    m = make_machine(g, "1", ["0"], "0", {"0": {"p": True}}, {"0": [("q", "0"), ("!q", "0")]})
    assert m.update("0", Valuation(["p", "q"])) == "0"


def test_unknown_state_and_temporal_guard():
    g, _, _ = load_dev_example()
    with pytest.raises(StrategyError):
        make_machine(g, "1", ["0"], "0", {"0": {"p": True}}, {"0": [("*", "7")]})
    with pytest.raises(StrategyError):
        make_machine(g, "1", ["0"], "0", {"0": {"p": True}}, {"0": [("X q", "0"), ("*", "0")]})


def test_parse_errors_have_line_numbers():
    g, _, _ = load_dev_example()
    with pytest.raises(StrategyError, match="line 2"):
        parse_strategy("init 0\nstate 0 pick p=true\n", g, "1")
    with pytest.raises(StrategyError, match="init"):
        parse_strategy("state 0 choose p=true\nfrom 0 on * goto 0\n", g, "1")


def test_format_round_trip_random():
    rng = random.Random(3)
    for _ in range(100):
        g = random_game(rng)
        for m in random_profile(rng, g).machines:
            assert parse_strategy(format_strategy(m, g.atoms), g, m.owner) == m


def test_profile_owner_check():
    g, sigma, _ = load_dev_example()
    with pytest.raises(StrategyError):
        make_profile(g, [sigma[1], sigma[0]])
    with pytest.raises(StrategyError):
        make_profile(g, {"1": sigma[0]})


def test_constructors():
    g, _, _ = load_dev_example()
    m = cyclic_machine(g, "1", [{"p": True}, {"p": False}])
    c = constant_machine(g, "2", {"q": True})
    play = induced_lasso(g, make_profile(g, [m, c]))
    assert play.cycle_length == 2


def test_lasso_matches_resimulation():
    rng = random.Random(4)
    for _ in range(150):
        g = random_game(rng)
        profile = random_profile(rng, g)
        play = induced_lasso(g, profile)
        assert len(play.lasso) <= __import__("math").prod(len(m.states) for m in profile.machines) + 1
        mem = profile.initial_memory()
        horizon = play.stem_length + 3 * play.cycle_length
        for t in range(horizon):
            x, mem = step(profile, mem)
            assert x == play.lasso[t]
            if t == 0:
                for m in profile.machines:
                    assert x.restrict(m.choose(m.initial).domain) == m.choose(m.initial)
        sim = simulate_energies(g, profile, horizon)
        for k, p in enumerate(g.players):
            trace = endowment_trace(g, profile, p, horizon).values
            assert trace == tuple(e[k] for e in sim)
            s, c = play.stem_length, play.cycle_length
            diffs = {trace[t + c] - trace[t] for t in range(s, horizon - c + 1)}
            assert len(diffs) <= 1


def test_negative_horizon():
    g, sigma, _ = load_dev_example()
    with pytest.raises(ValueError):
        endowment_trace(g, sigma, "1", -1)
