import random

import pytest

from ebgcheck.buchi import AutomatonTooLarge, BuchiAutomaton, accepts_lasso, ltl_to_buchi
from ebgcheck.ltl import Lasso, Not, eval_lasso, parse_ltl
from ebgcheck.valuation import Valuation

from gen import random_formula, random_lasso


def word(stem, cycle, atoms=("p",)):
    mk = lambda s: Valuation(atoms, [a for a, ch in zip(atoms, s) if ch == "1"])
    return Lasso(tuple(mk(s) for s in stem), tuple(mk(s) for s in cycle))


def test_always():
    aut = ltl_to_buchi(parse_ltl("G p"))
    assert aut.atoms == {"p"}
    assert accepts_lasso(aut, word([], ["1"]))
    assert not accepts_lasso(aut, word([], ["1", "0"]))
    assert not accepts_lasso(aut, word(["0"], ["1"]))


@pytest.mark.parametrize("k", range(4))
def test_eventually(k):
    aut = ltl_to_buchi(parse_ltl("F p"))
    assert accepts_lasso(aut, word(["0"] * k, ["1"]))
    assert not accepts_lasso(aut, word(["0"] * k, ["0"]))


def test_example_objective():
    phi = parse_ltl("G ((q -> X p) & (!q -> X !p))")
    aut = ltl_to_buchi(phi)
    good = word([], ["00"], ("p", "q"))
    bad = word(["01"], ["11", "10"], ("p", "q"))
    assert accepts_lasso(aut, good) and eval_lasso(phi, good)
    assert not accepts_lasso(aut, bad) and not eval_lasso(phi, bad)


def test_mom_cycle_restricted():
    aut = ltl_to_buchi(parse_ltl("G F gI"))
    rho = word([], ["0"] * 5 + ["1"], ("gI",))
    assert accepts_lasso(aut, rho)


def test_lasso_with_extra_atoms():
    aut = ltl_to_buchi(parse_ltl("G p"))
    assert accepts_lasso(aut, word([], ["10"], ("p", "z")))
    with pytest.raises(ValueError):
        accepts_lasso(aut, word([], ["1"], ("z",)))


def test_resource_limit():
    with pytest.raises(AutomatonTooLarge):
        ltl_to_buchi(parse_ltl("a U (b U (c U d))"), max_states=8)


def test_invalid_automaton():
    with pytest.raises(ValueError):
        BuchiAutomaton(1, 0, frozenset({"p"}), ({frozenset({"q"}): (0,)},), frozenset())


def test_text_export():
    text = ltl_to_buchi(parse_ltl("G p")).to_text()
    assert text.startswith("states ")
    assert "{p=T}" in text


def test_equivalence_and_complement():
    rng = random.Random(5)
    atoms = ["a", "b", "c"]
    for _ in range(300):
        f = random_formula(rng, atoms, rng.randint(0, 6))
        rho = random_lasso(rng, atoms)
        expected = eval_lasso(f, rho)
        assert accepts_lasso(ltl_to_buchi(f), rho) == expected
        assert accepts_lasso(ltl_to_buchi(Not(f)), rho) != expected
        rotated = Lasso(rho.stem + rho.cycle[:1], rho.cycle[1:] + rho.cycle[:1])
        assert accepts_lasso(ltl_to_buchi(f), rotated) == expected
