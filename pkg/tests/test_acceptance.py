"""Acceptance criteria, one test each; every test prints a single PASS/FAIL line."""

import random
import time

import pytest

from ebgcheck.buchi import accepts_lasso, ltl_to_buchi
from ebgcheck.cli import main
from ebgcheck.deviation import has_rational_deviation
from ebgcheck.energy import pumping_check, solve_energy_buchi
from ebgcheck.equilibrium import is_nash_equilibrium, payoff, payoffs
from ebgcheck.feasibility import SearchBudgetExceeded, is_feasible
from ebgcheck.ltl import eval_lasso
from ebgcheck.redistribution import rational_construction, rational_elimination, rational_elimination_exhaustive
from ebgcheck.strategy import endowment_trace

from gen import (
    FIXTURES,
    brute_force_energy_buchi,
    load_dev_example,
    load_kids_example,
    random_energy_game,
    random_formula,
    random_game,
    random_lasso,
    random_machine,
    random_profile,
    simulate_energies,
)


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail, elapsed, limit):
        ok = ok and elapsed < limit
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {number}: {detail} ({elapsed:.2f}s, limit {limit}s)")
        assert ok, detail

    return emit


def test_criterion_1_example3_regression(report, capsys):
    start = time.perf_counter()
    g, sigma, tau = load_dev_example()
    ne = is_nash_equilibrium(g, sigma).outcome == "equilibrium"
    no_dev = has_rational_deviation(g, sigma, "2") is None
    trace = endowment_trace(g, tau, "1", 3).values
    v = is_feasible(g, tau).violation
    dev = FIXTURES / "dev"
    code = main(["check-ne", str(dev / "game.ebg"), "-s", str(dev / "sigma1.strat"), "-s", str(dev / "sigma2.strat")])
    code2 = main(["feasible", str(dev / "game.ebg"), "-s", str(dev / "sigma1.strat"), "-s", str(dev / "tau.strat")])
    out = capsys.readouterr().out
    ok = (
        ne
        and no_dev
        and trace == (0, 1, 0, -1)
        and (v.player, v.step, v.value) == ("1", 3, -1)
        and code == 0
        and code2 == 1
        and "violation.step=3" in out
    )
    report(1, ok, f"NE={ne}, no deviation for 2={no_dev}, E1={list(trace)}, violation=({v.player},{v.step},{v.value})", time.perf_counter() - start, 1)


def test_criterion_2_kids_regression(report):
    start = time.perf_counter()
    g, profile = load_kids_example()
    ne = is_nash_equilibrium(g, profile).outcome == "equilibrium"
    pay = payoffs(g, profile)
    trace = endowment_trace(g, profile, "M", 6).values
    ok = ne and set(pay.values()) == {1} and trace == (0, 2, 4, 6, 8, 10, 0)
    report(2, ok, f"NE={ne}, payoffs={pay}, Mom={list(trace)}", time.perf_counter() - start, 1)


def test_criterion_3_ltl_buchi_equivalence(report):
    start = time.perf_counter()
    rng = random.Random(1003)
    atoms = ["a", "b", "c"]
    disagreements = 0
    total = 1200
    for _ in range(total):
        used = atoms[: rng.randint(1, 3)]
        f = random_formula(rng, used, rng.randint(0, 6))
        rho = random_lasso(rng, atoms)
        disagreements += eval_lasso(f, rho) != accepts_lasso(ltl_to_buchi(f), rho)
    report(3, disagreements == 0, f"{total} pairs, {disagreements} disagreements", time.perf_counter() - start, 30)


def test_criterion_4_feasibility_oracle(report):
    start = time.perf_counter()
    rng = random.Random(1004)
    disagreements = 0
    total = 600
    for _ in range(total):
        g = random_game(rng)
        profile = random_profile(rng, g)
        result = is_feasible(g, profile)
        play = result.graph.play
        s, c = play.stem_length, play.cycle_length
        peak = max(max(e) for e in simulate_energies(g, profile, s + c))
        sim = simulate_energies(g, profile, s + c * (peak + 2))
        negatives = [(t, g.players[k], e[k]) for t, e in enumerate(sim) for k in range(g.n) if e[k] < 0]
        if bool(result) == bool(negatives):
            disagreements += 1
        elif negatives:
            v = result.violation
            disagreements += (v.step, v.player, v.value) != negatives[0]
    report(4, disagreements == 0, f"{total} profiles, {disagreements} disagreements", time.perf_counter() - start, 30)


def test_criterion_5_energy_buchi_solver(report):
    start = time.perf_counter()
    rng = random.Random(1005)
    total, disagreements, unknown, yes, bad_witness = 600, 0, 0, 0, 0
    for _ in range(total):
        game, credit = random_energy_game(rng)
        try:
            w = solve_energy_buchi(game, credit)
        except SearchBudgetExceeded:
            unknown += 1
            continue
        disagreements += (w is not None) != brute_force_energy_buchi(game, credit)
        if w is not None:
            yes += 1
            bad_witness += not pumping_check(game, w, credit, repetitions=3)
    ok = disagreements == 0 and unknown == 0 and bad_witness == 0
    detail = f"{total} games ({yes} winning), {disagreements} disagreements, {unknown} unknown, {bad_witness} failed pumping checks"
    report(5, ok, detail, time.perf_counter() - start, 60)


def test_criterion_6_nem_witness_soundness(report):
    start = time.perf_counter()
    rng = random.Random(1006)
    g, sigma, _ = load_dev_example()
    suites = [(g, sigma), load_kids_example()]
    while len(suites) < 300:
        g = random_game(rng)
        suites.append((g, random_profile(rng, g)))
    deviations = equilibria = probes = failures = unknown = 0
    for g, profile in suites:
        verdict = is_nash_equilibrium(g, profile)
        if verdict.outcome == "unknown":
            unknown += 1
        elif verdict.deviation is not None:
            deviations += 1
            p = verdict.deviator
            failures += payoff(g, profile.replace(g.index(p), verdict.deviation.machine), p) != 1
        elif verdict.outcome == "equilibrium":
            equilibria += 1
            for p, value in payoffs(g, profile).items():
                if value:
                    continue
                for _ in range(200):
                    probes += 1
                    tau = random_machine(rng, g, p, max_states=3)
                    failures += payoff(g, profile.replace(g.index(p), tau), p) != 0
    ok = failures == 0 and unknown == 0 and deviations > 0 and equilibria > 0
    detail = f"{deviations} deviator verdicts, {equilibria} equilibria, {probes} random probes, {failures} failures, {unknown} unknown"
    report(6, ok, detail, time.perf_counter() - start, 60)


def test_criterion_7_elimination_shortcut(report):
    start = time.perf_counter()
    rng = random.Random(1007)
    total, disagreements, rc_failures, found = 220, 0, 0, 0
    for _ in range(total):
        g = random_game(rng, total=rng.randint(0, 5))
        profile = random_profile(rng, g, max_states=2)
        fast = rational_elimination(g, profile)
        slow = rational_elimination_exhaustive(g, profile)
        disagreements += (fast is None) != (slow is None)
        found += fast is not None
        built = rational_construction(g, profile)
        if built is not None:
            rc_failures += is_nash_equilibrium(g.with_endowment(built), profile).outcome != "equilibrium"
    ok = disagreements == 0 and rc_failures == 0
    detail = f"{total} games ({found} eliminable), {disagreements} disagreements, {rc_failures} RC re-check failures"
    report(7, ok, detail, time.perf_counter() - start, 120)
