"""Product graph of a profile and the feasibility decision.

Weights are costs: a configuration's energy is the initial credit minus the
weights accumulated so far, matching the compound-endowment recurrence.
"""

from __future__ import annotations

from collections.abc import Callable, Hashable, Iterable, Sequence
from dataclasses import dataclass
from typing import Literal

from .game import Game, checked
from .strategy import InducedPlay, Profile, action_costs, induced_lasso

Vector = tuple[int, ...]


class SearchBudgetExceeded(RuntimeError):
    """A bounded search ran out of budget before reaching a verdict."""


@dataclass(frozen=True)
class ProductGraph:
    """Reachable part of the joint-memory graph; every vertex has one successor."""

    vertices: tuple[tuple[str, ...], ...]
    successor: dict[tuple[str, ...], tuple[str, ...]]
    weight: dict[tuple[str, ...], Vector]
    start: tuple[str, ...]
    play: InducedPlay

    def edges(self):
        for u in self.vertices:
            yield u, self.successor[u], self.weight[u]


def build_product(g: Game, profile: Profile) -> ProductGraph:
    """Joint memories reachable from the initial one, with per-player action costs."""
    play = induced_lasso(g, profile)
    costs = action_costs(g, profile, play)
    mems = play.memories
    successor = {}
    for k, u in enumerate(mems):
        nxt = k + 1 if k + 1 < len(mems) else play.stem_length
        successor[u] = mems[nxt]
    return ProductGraph(mems, successor, dict(zip(mems, costs)), mems[0], play)


@dataclass(frozen=True)
class Violation:
    """Earliest step at which some compound endowment is negative."""

    player: str
    step: int
    value: int
    kind: Literal["prefix", "cycle"]


@dataclass(frozen=True)
class FeasibilityResult:
    feasible: bool
    violation: Violation | None
    graph: ProductGraph

    def __bool__(self) -> bool:
        return self.feasible


def is_feasible(g: Game, profile: Profile) -> FeasibilityResult:
    """Decide feasibility on the unique lasso of the product graph.

    Feasible iff the energies stay nonnegative along the stem and one
    traversal of the cycle, and the cycle's total cost is at most zero in
    every dimension.  On failure the earliest violating step is reported;
    for a positive-cost cycle that step is computed in closed form.
    """
    graph = build_product(g, profile)
    play = graph.play
    stem, cyc = play.stem_length, play.cycle_length
    costs = [graph.weight[u] for u in play.memories]
    n = g.n
    energy = [list(g.endowment_vector())]
    for t in range(stem + cyc):
        energy.append([checked(energy[-1][i] - costs[t][i]) for i in range(n)])

    best: tuple[int, int, int, str] | None = None  # (step, player index, value, kind)
    for t, row in enumerate(energy):
        for i, e in enumerate(row):
            if e < 0:
                best = (t, i, e, "prefix")
                break
        if best is not None:
            break
    if best is None:
        for i in range(n):
            total = sum(costs[stem + r][i] for r in range(cyc))
            if total <= 0:
                continue
            for r in range(cyc):
                level = energy[stem + r][i]
                repeats = level // total + 1
                step = stem + repeats * cyc + r
                value = checked(level - repeats * total)
                candidate = (step, i, value, "cycle")
                if best is None or candidate[:2] < best[:2]:
                    best = candidate
    if best is None:
        return FeasibilityResult(True, None, graph)
    step, i, value, kind = best
    return FeasibilityResult(False, Violation(g.players[i], step, value, kind), graph)


# -- general d-weighted graphs ----------------------------------------------


@dataclass(frozen=True)
class CycleWitness:
    """Path ``u0 … v … v``: the vertices of the lasso and the energy after each edge."""

    path: tuple[Hashable, ...]
    cycle_start: int
    energies: tuple[Vector, ...]

    @property
    def stem(self) -> tuple[Hashable, ...]:
        return self.path[: self.cycle_start]

    @property
    def cycle(self) -> tuple[Hashable, ...]:
        return self.path[self.cycle_start : -1]


def find_nonnegative_reachable_cycle(
    successors: Callable[[Hashable], Iterable[tuple[Hashable, Sequence[int]]]],
    u0: Hashable,
    credit: Sequence[int],
    node_cap: int = 10**6,
) -> CycleWitness | None:
    """Search a d-weighted graph for a nonnegative cycle reachable from ``u0``.

    Looks for a path ``u0 … v … v`` whose energies (``credit`` minus the
    accumulated weights) stay nonnegative and whose final ``v`` has at least
    the energy of the earlier ``v``.  Depth-first over configurations,
    closing a branch as soon as it covers one of its own ancestors; branches
    terminate by Dickson's lemma.  Configurations dominated by one whose
    subtree was already exhausted are skipped.  Raises
    :class:`SearchBudgetExceeded` after ``node_cap`` configurations.
    """
    start = (u0, tuple(credit))
    if any(c < 0 for c in start[1]):
        raise ValueError("credit must be nonnegative")
    exhausted: dict[Hashable, list[Vector]] = {}
    path = [start]
    on_path: dict[Hashable, list[int]] = {u0: [0]}
    iters = [iter(successors(u0))]
    expanded = 1
    while iters:
        try:
            v, w = next(iters[-1])
        except StopIteration:
            u, e = path.pop()
            iters.pop()
            on_path[u].pop()
            exhausted.setdefault(u, []).append(e)
            continue
        e = tuple(checked(x - y) for x, y in zip(path[-1][1], w))
        if any(x < 0 for x in e):
            continue
        for k in on_path.get(v, ()):
            if all(a >= b for a, b in zip(e, path[k][1])):
                full = path + [(v, e)]
                return CycleWitness(tuple(c[0] for c in full), k, tuple(c[1] for c in full))
        if any(all(a <= b for a, b in zip(e, old)) for old in exhausted.get(v, ())):
            continue
        expanded += 1
        if expanded > node_cap:
            raise SearchBudgetExceeded(f"nonnegative-cycle search exceeded {node_cap} configurations")
        on_path.setdefault(v, []).append(len(path))
        path.append((v, e))
        iters.append(iter(successors(v)))
    return None
