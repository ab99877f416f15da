"""Büchi automata over valuation alphabets and the LTL translation."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import networkx as nx

from .ltl import Atom, Formula, Lasso, Next, Not, And, TrueConst, Until, atoms_of, subformulas, to_core
from .valuation import Valuation

DEFAULT_MAX_STATES = 2**20


class AutomatonTooLarge(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class BuchiAutomaton:
    """Nondeterministic Büchi automaton with state-based acceptance.

    States are ``0 .. num_states-1``.  Letters are total valuations over
    ``atoms``, stored as the frozenset of atoms that are true.
    """

    num_states: int
    initial: int
    atoms: frozenset[str]
    delta: tuple[dict[frozenset[str], tuple[int, ...]], ...]
    accepting: frozenset[int]

    def __post_init__(self):
        if self.num_states < 1:
            raise ValueError("automaton needs at least one state")
        if not 0 <= self.initial < self.num_states:
            raise ValueError("initial state out of range")
        if not all(0 <= q < self.num_states for q in self.accepting):
            raise ValueError("accepting state out of range")
        if len(self.delta) != self.num_states:
            raise ValueError("one transition map per state is required")
        for moves in self.delta:
            for letter, targets in moves.items():
                if not letter <= self.atoms:
                    raise ValueError(f"label {sorted(letter)} is not a valuation over {sorted(self.atoms)}")
                if not all(0 <= q < self.num_states for q in targets):
                    raise ValueError("transition target out of range")

    def letter(self, v: Valuation) -> frozenset[str]:
        """Project a valuation over a superset of ``atoms`` onto a letter."""
        return v.true_atoms & self.atoms

    def successors(self, q: int, letter: frozenset[str]) -> tuple[int, ...]:
        return self.delta[q].get(letter, ())

    def transitions(self):
        for q, moves in enumerate(self.delta):
            for letter in sorted(moves, key=sorted):
                for r in moves[letter]:
                    yield q, letter, r

    @property
    def num_transitions(self) -> int:
        return sum(len(t) for moves in self.delta for t in moves.values())

    def to_text(self) -> str:
        """Plain adjacency listing: one ``src {label} dst`` line per transition."""
        atoms = sorted(self.atoms)
        lines = [
            f"states {self.num_states}",
            f"initial {self.initial}",
            f"atoms {' '.join(atoms)}".rstrip(),
            f"accepting {' '.join(str(q) for q in sorted(self.accepting))}".rstrip(),
        ]
        for q, letter, r in self.transitions():
            lines.append(f"{q} {Valuation(self.atoms, letter).format(atoms)} {r}")
        return "\n".join(lines) + "\n"


def accepts_lasso(aut: BuchiAutomaton, rho: Lasso) -> bool:
    """Whether some run of ``aut`` on ``rho`` visits accepting states infinitely often.

    Searches the product of automaton states with the |stem|+|cycle| lasso
    positions for a reachable cycle through an accepting product vertex.
    """
    if not aut.atoms <= rho.atoms:
        raise ValueError(f"lasso lacks atoms {sorted(aut.atoms - rho.atoms)}")
    n = len(rho)
    letters = [aut.letter(rho[t]) for t in range(n)]
    start = (aut.initial, 0)
    graph = nx.DiGraph()
    graph.add_node(start)
    queue = deque([start])
    while queue:
        q, t = queue.popleft()
        nt = rho.successor(t)
        for r in aut.successors(q, letters[t]):
            target = (r, nt)
            if target not in graph:
                graph.add_node(target)
                queue.append(target)
            graph.add_edge((q, t), target)
    return any(
        _nontrivial(graph, comp) and any(q in aut.accepting for q, _ in comp)
        for comp in nx.strongly_connected_components(graph)
    )


def _nontrivial(graph: nx.DiGraph, comp) -> bool:
    if len(comp) > 1:
        return True
    (node,) = comp
    return graph.has_edge(node, node)


@lru_cache(maxsize=256)
def ltl_to_buchi(phi: Formula, max_states: int = DEFAULT_MAX_STATES) -> BuchiAutomaton:
    """Translate ``phi`` into a Büchi automaton over valuations of ``atoms_of(phi)``.

    Tableau construction: a tableau state fixes the current letter plus the
    truth of every ``X ψ`` and ``X (ψ U χ)`` obligation, which determines the
    truth of every subformula at that position.  Each until contributes one
    generalised acceptance set, removed afterwards with a round-robin counter.
    States that cannot reach an accepting cycle are pruned.
    """
    core = to_core(phi)
    atoms = sorted(atoms_of(phi))
    subs = subformulas(core)
    nexts = [s for s in subs if isinstance(s, Next)]
    untils = [s for s in subs if isinstance(s, Until)]
    # elementary obligations: operand that must hold at the next position
    obligations = list(dict.fromkeys([s.operand for s in nexts] + untils))
    k = len(atoms) + len(obligations)
    if 2**k * max(1, len(untils)) > max_states:
        raise AutomatonTooLarge(
            f"tableau for {phi} would have up to {2**k * max(1, len(untils))} states (limit {max_states})"
        )

    def truth(letter: frozenset[str], promised: tuple[bool, ...]) -> dict[Formula, bool]:
        promise = dict(zip(obligations_keys, promised))
        value: dict[Formula, bool] = {}
        for s in subs:
            if isinstance(s, Atom):
                value[s] = s.name in letter
            elif isinstance(s, TrueConst):
                value[s] = True
            elif isinstance(s, Not):
                value[s] = not value[s.operand]
            elif isinstance(s, And):
                value[s] = value[s.left] and value[s.right]
            elif isinstance(s, Next):
                value[s] = promise[("X", s.operand)]
            elif isinstance(s, Until):
                value[s] = value[s.right] or (value[s.left] and promise[("X", s)])
        return value

    obligations_keys = [("X", o) for o in obligations]
    tableau = []  # (letter, promised, values)
    for bits in product((False, True), repeat=len(atoms)):
        letter = frozenset(a for a, b in zip(atoms, bits) if b)
        for promised in product((False, True), repeat=len(obligations)):
            tableau.append((letter, promised, truth(letter, promised)))

    # states grouped by the truth of the obligation operands they realise
    by_signature: dict[tuple[bool, ...], list[int]] = {}
    for idx, (_, _, values) in enumerate(tableau):
        by_signature.setdefault(tuple(values[o] for o in obligations), []).append(idx)

    fair = [
        frozenset(idx for idx, (_, _, values) in enumerate(tableau) if values[u.right] or not values[u])
        for u in untils
    ] or [frozenset(range(len(tableau)))]
    m = len(fair)

    # degeneralised states: (tableau index, counter); None stands for the fresh initial state
    index: dict[object, int] = {None: 0}
    order: list[object] = [None]
    edges: list[dict[frozenset[str], list[int]]] = [{}]
    queue = deque([None])

    def node(key) -> int:
        if key not in index:
            if len(order) >= max_states:
                raise AutomatonTooLarge(f"automaton for {phi} exceeds {max_states} states")
            index[key] = len(order)
            order.append(key)
            edges.append({})
            queue.append(key)
        return index[key]

    while queue:
        key = queue.popleft()
        src = index[key]
        if key is None:
            targets = [t for t, (_, _, values) in enumerate(tableau) if values[core]]
            counter_next = 0
        else:
            tab, counter = key
            targets = by_signature.get(tableau[tab][1], [])
            counter_next = (counter + 1) % m if tab in fair[counter] else counter
        for t in targets:
            dst = node((t, counter_next))
            edges[src].setdefault(tableau[t][0], []).append(dst)

    accepting = {
        i for i, key in enumerate(order) if key is not None and key[1] == 0 and key[0] in fair[0]
    }
    return _prune(len(order), edges, accepting, frozenset(atoms))


def _prune(num: int, edges, accepting: set[int], atoms: frozenset[str]) -> BuchiAutomaton:
    graph = nx.DiGraph()
    graph.add_nodes_from(range(num))
    for src, moves in enumerate(edges):
        for targets in moves.values():
            graph.add_edges_from((src, t) for t in targets)
    good_seeds = set()
    for comp in nx.strongly_connected_components(graph):
        if _nontrivial(graph, comp) and comp & accepting:
            good_seeds |= comp
    useful = set(good_seeds)
    reverse = graph.reverse(copy=False)
    for s in good_seeds:
        useful |= nx.descendants(reverse, s)
    keep = [0] + sorted(s for s in useful if s != 0)
    renumber = {old: new for new, old in enumerate(keep)}
    delta = []
    for old in keep:
        moves = {}
        for letter, targets in edges[old].items():
            kept = tuple(sorted({renumber[t] for t in targets if t in renumber}))
            if kept:
                moves[letter] = kept
        delta.append(moves)
    return BuchiAutomaton(
        num_states=len(keep),
        initial=0,
        atoms=atoms,
        delta=tuple(delta),
        accepting=frozenset(renumber[s] for s in accepting if s in renumber),
    )
