import random

import pytest

from ebgcheck.feasibility import SearchBudgetExceeded, build_product, find_nonnegative_reachable_cycle, is_feasible

from gen import load_dev_example, load_kids_example, random_game, random_profile, simulate_energies


def graph(edges):
    return lambda u: edges.get(u, ())


def test_product_fig1():
    g, profile = load_kids_example()
    prod = build_product(g, profile)
    assert len(prod.vertices) == 6
    assert [prod.weight[u][2] for u in prod.vertices] == [-2, -2, -2, -2, -2, 10]
    assert all(w[0] == w[1] == 0 for w in prod.weight.values())
    assert all(prod.successor[u] in prod.vertices for u in prod.vertices)


def test_product_example3():
    g, sigma, _ = load_dev_example()
    prod = build_product(g, sigma)
    assert len(prod.vertices) == 1
    (u,) = prod.vertices
    assert prod.successor[u] == u and prod.weight[u] == (-1, 0)


def test_feasibility_examples():
    g, sigma, tau = load_dev_example()
    assert is_feasible(g, sigma)
    bad = is_feasible(g, tau)
    assert not bad
    assert (bad.violation.player, bad.violation.step, bad.violation.value) == ("1", 3, -1)
    kg, kp = load_kids_example()
    assert is_feasible(kg, kp)


def test_cycle_search_examples():
    assert find_nonnegative_reachable_cycle(graph({0: [(0, (0,))]}), 0, (0,)) is not None
    assert find_nonnegative_reachable_cycle(graph({0: [(0, (1,))]}), 0, (5,)) is None
    w = find_nonnegative_reachable_cycle(graph({0: [(1, (2,))], 1: [(0, (-2,))]}), 0, (2,))
    assert w is not None and w.path[0] == 0 and w.path[-1] == w.path[w.cycle_start]
    assert w.energies[-1] >= w.energies[w.cycle_start]


def test_cycle_search_budget():
    edges = {0: [(0, (-1,)), (1, (0,))], 1: [(1, (1,))]}
    with pytest.raises(SearchBudgetExceeded):
        find_nonnegative_reachable_cycle(graph({k: [(k + 1, (0,))] for k in range(100)}), 0, (0,), node_cap=10)
    assert find_nonnegative_reachable_cycle(graph(edges), 0, (0,)) is not None


def test_feasibility_against_simulation():
    rng = random.Random(8)
    for _ in range(300):
        g = random_game(rng)
        profile = random_profile(rng, g)
        result = is_feasible(g, profile)
        play = result.graph.play
        s, c = play.stem_length, play.cycle_length
        first = simulate_energies(g, profile, s + c)
        horizon = s + c * (max(max(e) for e in first) + 2)
        sim = simulate_energies(g, profile, horizon)
        negatives = [(t, k, e[k]) for t, e in enumerate(sim) for k in range(g.n) if e[k] < 0]
        assert bool(result) == (not negatives)
        if negatives:
            t, k, value = negatives[0]
            v = result.violation
            assert (v.step, v.player, v.value) == (t, g.players[k], value)
        # deterministic graphs: the general search agrees
        succ = lambda u: [(result.graph.successor[u], result.graph.weight[u])]
        found = find_nonnegative_reachable_cycle(succ, result.graph.start, g.endowment_vector())
        assert (found is not None) == bool(result)
        # monotone in the endowment
        if result:
            richer = g.with_endowment([x + rng.randint(0, 3) for x in g.endowment_vector()])
            assert is_feasible(richer, profile)
