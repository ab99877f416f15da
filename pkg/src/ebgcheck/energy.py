"""One-player multi-dimensional energy Büchi games.

A game is a finite graph with a start vertex, accepting vertices and
edges carrying a label and an integer cost vector.  The player wins from an
initial credit if some infinite path keeps ``credit - accumulated cost``
nonnegative in every dimension and visits accepting vertices infinitely
often.  That happens iff there is a *self-covering accepting segment*: a
path to some vertex ``v`` followed by a cycle ``v … v`` that passes an
accepting vertex and ends with componentwise at least the energy it
started with.  Repeating the cycle forever is then winning.

The solver brackets the unbounded energy space between two finite graphs
indexed by an energy bound ``B`` that doubles each round:

* an under-approximation that clamps energies at ``B``; an accepting cycle
  there is turned into a real self-covering segment (real energies dominate
  the clamped ones, so the segment's real net effect is nonnegative);
* an over-approximation that replaces energies above ``B`` by ω; the
  ω-coordinates only need a nonnegative net effect around a cycle, which is
  decided by a circulation linear program.  If no strongly connected piece
  of it supports an accepting nonnegative circulation, no winning path
  exists.

Either answer is exact.  When neither side decides before the configuration
budget runs out, :class:`SearchBudgetExceeded` is raised instead of a guess.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Hashable, Iterable, Sequence
from dataclasses import dataclass, field
from typing import Any, Protocol

import networkx as nx
import numpy as np
from scipy.optimize import linprog
from scipy.sparse import coo_matrix

from .feasibility import SearchBudgetExceeded
from .game import checked

Vector = tuple[int, ...]
DEFAULT_BUDGET = 10**6


class WeightedBuchiGame(Protocol):
    initial: Hashable
    dim: int

    def successors(self, v: Hashable) -> Iterable[tuple[Any, Hashable, Vector]]: ...

    def is_accepting(self, v: Hashable) -> bool: ...


@dataclass
class ExplicitGame:
    """A one-player game given by explicit adjacency lists."""

    initial: Hashable
    dim: int
    edges: dict[Hashable, list[tuple[Any, Hashable, Vector]]]
    accepting: frozenset = frozenset()

    def successors(self, v):
        return self.edges.get(v, ())

    def is_accepting(self, v) -> bool:
        return v in self.accepting


@dataclass(frozen=True)
class Step:
    source: Hashable
    label: Any
    target: Hashable
    weight: Vector


@dataclass(frozen=True)
class Witness:
    """Stem to a pivot vertex, then a self-covering segment returning to it."""

    stem: tuple[Step, ...]
    segment: tuple[Step, ...]
    start_energy: Vector
    end_energy: Vector

    @property
    def pivot(self) -> Hashable:
        return self.segment[0].source


def replay(steps: Sequence[Step], energy: Sequence[int]) -> list[Vector]:
    """Energies after each step (first entry is ``energy`` itself)."""
    out = [tuple(energy)]
    for s in steps:
        out.append(tuple(checked(e - w) for e, w in zip(out[-1], s.weight)))
    return out


def pumping_check(game: WeightedBuchiGame, witness: Witness, credit: Sequence[int], repetitions: int = 3) -> bool:
    """Replay the stem, then the segment ``repetitions`` times.

    Every energy must stay nonnegative, each pass must end with at least the
    energy it started with and must visit an accepting vertex.
    """
    path = list(witness.stem)
    for a, b in zip(path, path[1:]):
        if a.target != b.source:
            return False
    seg = witness.segment
    if not seg or seg[0].source != seg[-1].target:
        return False
    if path and path[-1].target != seg[0].source:
        return False
    if not path and seg[0].source != game.initial:
        return False
    if path and path[0].source != game.initial:
        return False
    energies = replay(path, credit)
    if any(x < 0 for e in energies for x in e):
        return False
    level = energies[-1]
    for _ in range(repetitions):
        trace = replay(seg, level)
        if any(x < 0 for e in trace for x in e):
            return False
        if not all(b >= a for a, b in zip(level, trace[-1])):
            return False
        if not any(game.is_accepting(s.source) for s in seg):
            return False
        level = trace[-1]
    return True


# -- vertex graph -------------------------------------------------------------


@dataclass
class _Arena:
    """Reachable vertex graph with edges projected onto the binding dimensions."""

    vertices: list[Hashable]
    out: dict[Hashable, list[tuple[Any, Hashable, Vector]]]
    accepting: set[Hashable]
    active: tuple[int, ...]  # dimensions in which some edge has positive cost
    dim: int
    proj: dict[Hashable, list[Vector]] = field(default_factory=dict)


def _explore(game: WeightedBuchiGame, budget: int) -> _Arena:
    seen = {game.initial: None}
    queue = deque([game.initial])
    out: dict[Hashable, list] = {}
    while queue:
        v = queue.popleft()
        edges = []
        for label, target, weight in game.successors(v):
            weight = tuple(weight)
            if len(weight) != game.dim:
                raise ValueError(f"weight {weight} does not have {game.dim} dimensions")
            edges.append((label, target, weight))
            if target not in seen:
                seen[target] = None
                if len(seen) > budget:
                    raise SearchBudgetExceeded(f"game graph exceeds {budget} vertices")
                queue.append(target)
        out[v] = edges
    vertices = list(seen)
    active = tuple(
        d for d in range(game.dim) if any(w[d] > 0 for edges in out.values() for _, _, w in edges)
    )
    arena = _Arena(vertices, out, {v for v in vertices if game.is_accepting(v)}, active, game.dim)
    arena.proj = {v: [tuple(w[d] for d in active) for _, _, w in out[v]] for v in vertices}
    return arena


# -- nonnegative circulations ---------------------------------------------------


def _accepting_circulation(
    nodes: Iterable[Hashable],
    edges: list[tuple[Hashable, Hashable, Vector]],
    accepting: set[Hashable],
) -> bool:
    """Does some strongly connected edge set through an accepting node admit a
    positive circulation whose total gain is nonnegative in every coordinate?

    ``edges`` carry gain vectors (possibly empty).  Edges that can occur in no
    such circulation are discarded and the remaining graph is split into
    strongly connected pieces until every piece is fully usable.
    """
    work = [(set(nodes), edges)]
    while work:
        nodes_now, es = work.pop()
        for comp, comp_edges in _scc_pieces(nodes_now, es):
            if not comp & accepting:
                continue
            usable = _usable_edges(comp, comp_edges)
            if len(usable) == len(comp_edges):
                return True
            if usable:
                work.append((comp, [comp_edges[k] for k in usable]))
    return False


def _scc_pieces(nodes, edges):
    graph = nx.DiGraph()
    graph.add_nodes_from(nodes)
    graph.add_edges_from((u, v) for u, v, _ in edges)
    member = {}
    comps = []
    for idx, comp in enumerate(nx.strongly_connected_components(graph)):
        comps.append(comp)
        for v in comp:
            member[v] = idx
    grouped: dict[int, list] = {}
    for e in edges:
        if member[e[0]] == member[e[1]]:
            grouped.setdefault(member[e[0]], []).append(e)
    return [(comps[idx], es) for idx, es in grouped.items()]


def _usable_edges(nodes, edges) -> list[int]:
    """Indices of edges lying on the support of some nonnegative-gain circulation."""
    if not edges:
        return []
    dims = len(edges[0][2])
    idx = list(range(len(edges)))
    # an edge losing in a coordinate where nothing gains can never be compensated
    while True:
        gaining = [any(edges[k][2][d] > 0 for k in idx) for d in range(dims)]
        kept = [k for k in idx if all(gaining[d] or edges[k][2][d] >= 0 for d in range(dims))]
        if len(kept) == len(idx):
            break
        idx = kept
    if not idx:
        return []
    if all(x >= 0 for k in idx for x in edges[k][2]):
        return idx
    m = len(idx)
    node_list = sorted({edges[k][0] for k in idx} | {edges[k][1] for k in idx}, key=repr)
    row_of = {v: r for r, v in enumerate(node_list)}
    # variables: x_0..x_{m-1} (flow), y_0..y_{m-1} (support indicators)
    eq_rows, eq_cols, eq_vals = [], [], []
    for j, k in enumerate(idx):
        u, v, _ = edges[k]
        if u != v:
            eq_rows += [row_of[u], row_of[v]]
            eq_cols += [j, j]
            eq_vals += [1.0, -1.0]
    a_eq = coo_matrix((eq_vals, (eq_rows, eq_cols)), shape=(len(node_list), 2 * m))
    ub_rows, ub_cols, ub_vals = [], [], []
    for j in range(m):
        ub_rows += [j, j]
        ub_cols += [m + j, j]
        ub_vals += [1.0, -1.0]
    for d in range(dims):
        r = m + d
        for j, k in enumerate(idx):
            g = edges[k][2][d]
            if g:
                ub_rows.append(r)
                ub_cols.append(j)
                ub_vals.append(-float(g))
    a_ub = coo_matrix((ub_vals, (ub_rows, ub_cols)), shape=(m + dims, 2 * m))
    c = np.concatenate([np.zeros(m), -np.ones(m)])
    bounds = [(0, None)] * m + [(0, 1)] * m
    res = linprog(
        c,
        A_ub=a_ub.tocsr(),
        b_ub=np.zeros(m + dims),
        A_eq=a_eq.tocsr(),
        b_eq=np.zeros(len(node_list)),
        bounds=bounds,
        method="highs",
    )
    if res.status != 0:
        raise RuntimeError(f"circulation program failed: {res.message}")
    return [k for j, k in enumerate(idx) if res.x[m + j] > 0.5]


# -- the two abstractions ------------------------------------------------------------


def _clamped_graph(arena: _Arena, credit: Vector, bound: int, budget: int):
    """Configurations with energies clamped at ``bound`` (an under-approximation)."""
    start = (arena.vertices[0], tuple(min(bound, credit[d]) for d in arena.active))
    index = {start: 0}
    configs = [start]
    moves: list[list[tuple[int, int]]] = []  # (edge number, target config)
    queue = deque([start])
    while queue:
        v, e = queue.popleft()
        row = []
        for k, w in enumerate(arena.proj[v]):
            nxt = tuple(min(bound, a - b) for a, b in zip(e, w))
            if any(x < 0 for x in nxt):
                continue
            target = (arena.out[v][k][1], nxt)
            if target not in index:
                index[target] = len(configs)
                configs.append(target)
                if len(configs) > budget:
                    raise SearchBudgetExceeded(f"energy search exceeded {budget} configurations")
                queue.append(target)
            row.append((k, index[target]))
        moves.append(row)
    return configs, moves


def _promoted_graph(arena: _Arena, credit: Vector, bound: int, budget: int):
    """Configurations where energies above ``bound`` become ω (None); an over-approximation."""

    def cap(x):
        return None if x is None or x > bound else x

    start = (arena.vertices[0], tuple(cap(credit[d]) for d in arena.active))
    index = {start: 0}
    configs = [start]
    moves: list[list[tuple[int, int]]] = []
    queue = deque([start])
    while queue:
        v, e = queue.popleft()
        row = []
        for k, w in enumerate(arena.proj[v]):
            nxt = tuple(None if a is None else a - b for a, b in zip(e, w))
            if any(x is not None and x < 0 for x in nxt):
                continue
            target = (arena.out[v][k][1], tuple(cap(x) for x in nxt))
            if target not in index:
                index[target] = len(configs)
                configs.append(target)
                if len(configs) > budget:
                    raise SearchBudgetExceeded(f"energy search exceeded {budget} configurations")
                queue.append(target)
            row.append((k, index[target]))
        moves.append(row)
    return configs, moves


def _config_digraph(moves) -> nx.DiGraph:
    graph = nx.DiGraph()
    graph.add_nodes_from(range(len(moves)))
    for src, row in enumerate(moves):
        graph.add_edges_from((src, dst) for _, dst in row)
    return graph


def _over_approx_winning(arena: _Arena, configs, moves) -> bool:
    graph = _config_digraph(moves)
    for comp in nx.strongly_connected_components(graph):
        if not any(configs[c][0] in arena.accepting for c in comp):
            continue
        some = next(iter(comp))
        omega = [j for j, x in enumerate(configs[some][1]) if x is None]
        edges = []
        for src in comp:
            v = configs[src][0]
            for k, dst in moves[src]:
                if dst in comp:
                    gain = tuple(-arena.proj[v][k][j] for j in omega)
                    edges.append((src, dst, gain))
        if not edges:
            continue
        accepting = {c for c in comp if configs[c][0] in arena.accepting}
        if _accepting_circulation(comp, edges, accepting):
            return True
    return False


def _under_approx_witness(arena: _Arena, configs, moves) -> tuple[list[int], list[int], list[int], list[int]] | None:
    """Config path to an accepting config on a cycle, and that cycle, as (configs, edge numbers)."""
    graph = _config_digraph(moves)
    best = None
    for comp in nx.strongly_connected_components(graph):
        if len(comp) == 1:
            (c,) = comp
            if not graph.has_edge(c, c):
                continue
        for c in sorted(comp):
            if configs[c][0] in arena.accepting:
                if best is None or c < best[0]:
                    best = (c, comp)
                break
    if best is None:
        return None
    pivot, comp = best
    stem = nx.shortest_path(graph, 0, pivot)
    # shortest cycle through the pivot
    sub = graph.subgraph(comp)
    dist = nx.single_source_shortest_path(sub.reverse(copy=False), pivot)
    back = min((dst for _, dst in moves[pivot] if dst in dist), key=lambda d: (len(dist[d]), d))
    cycle = [pivot] + list(reversed(dist[back]))
    return stem, _edge_numbers(moves, stem), cycle, _edge_numbers(moves, cycle)


def _edge_numbers(moves, path: list[int]) -> list[int]:
    out = []
    for a, b in zip(path, path[1:]):
        out.append(min(k for k, dst in moves[a] if dst == b))
    return out


def _steps(arena: _Arena, configs, path: list[int], numbers: list[int]) -> tuple[Step, ...]:
    steps = []
    for c, k in zip(path, numbers):
        v = configs[c][0]
        label, target, weight = arena.out[v][k]
        steps.append(Step(v, label, target, weight))
    return tuple(steps)


def _pure_buchi_witness(arena: _Arena, credit: Vector) -> Witness | None:
    # no dimension can ever decrease: plain accepting-lasso search on the vertex graph
    configs = [(v, ()) for v in arena.vertices]
    index = {v: k for k, v in enumerate(arena.vertices)}
    moves = [[(k, index[t]) for k, (_, t, _) in enumerate(arena.out[v])] for v in arena.vertices]
    found = _under_approx_witness(arena, configs, moves)
    if found is None:
        return None
    return _finish(arena, configs, found, credit)


def _finish(arena, configs, found, credit) -> Witness:
    stem_cfg, stem_k, cyc_cfg, cyc_k = found
    stem = _steps(arena, configs, stem_cfg, stem_k)
    segment = _steps(arena, configs, cyc_cfg, cyc_k)
    start = replay(stem, credit)[-1]
    end = replay(segment, start)[-1]
    return Witness(stem, segment, start, end)


def solve_energy_buchi(
    game: WeightedBuchiGame,
    credit: Sequence[int],
    budget: int = DEFAULT_BUDGET,
) -> Witness | None:
    """Return a self-covering accepting witness, or ``None`` if the player cannot win.

    Raises :class:`SearchBudgetExceeded` when ``budget`` configurations did
    not suffice to decide.
    """
    credit = tuple(credit)
    if len(credit) != game.dim:
        raise ValueError(f"credit has {len(credit)} dimensions, game has {game.dim}")
    if any(c < 0 for c in credit):
        raise ValueError("credit must be nonnegative")
    arena = _explore(game, budget)
    if not arena.accepting:
        return None
    if not arena.active:
        return _pure_buchi_witness(arena, credit)

    # everything ω: necessary condition independent of the credit
    vertex_edges = [
        (v, t, tuple(-x for x in arena.proj[v][k])) for v in arena.vertices for k, (_, t, _) in enumerate(arena.out[v])
    ]
    if not _accepting_circulation(arena.vertices, vertex_edges, arena.accepting):
        return None

    spent = 0
    bound = max([1] + [credit[d] for d in arena.active])
    while True:
        configs, moves = _clamped_graph(arena, credit, bound, budget - spent)
        spent += len(configs)
        found = _under_approx_witness(arena, configs, moves)
        if found is not None:
            witness = _finish(arena, configs, found, credit)
            if not pumping_check(game, witness, credit):
                raise AssertionError("extracted energy witness failed its pumping check")
            return witness
        configs, moves = _promoted_graph(arena, credit, bound, budget - spent)
        spent += len(configs)
        if not _over_approx_winning(arena, configs, moves):
            return None
        bound *= 2
