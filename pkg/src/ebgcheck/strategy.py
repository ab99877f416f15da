"""Finite-memory strategy machines, profiles and the plays they induce."""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass

from .game import Game, checked, valuation_cost
from .ltl import Formula, Lasso, LtlSyntaxError, UnknownAtomError, atoms_of, eval_propositional, is_propositional, parse_ltl
from .valuation import Valuation, all_valuations

# Exhaustiveness of a guard list is checked by enumeration up to this many atoms.
MAX_ENUMERATED_GUARD_ATOMS = 16


class StrategyError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class StrategyMachine:
    """Memory, initial memory, ordered update guards and a choice per memory state.

    ``updates[m]`` lists ``(guard, successor)`` pairs tried in order on the
    full valuation of the round just played; ``None`` is the catch-all guard.
    """

    owner: str
    states: tuple[str, ...]
    initial: str
    choice: Mapping[str, Valuation]
    updates: Mapping[str, tuple[tuple[Formula | None, str], ...]]

    def choose(self, m: str) -> Valuation:
        return self.choice[m]

    def update(self, m: str, x: Valuation) -> str:
        for guard, target in self.updates[m]:
            if guard is None or eval_propositional(guard, x):
                return target
        raise StrategyError(f"no guard of state {m!r} matches {x!r}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StrategyMachine):
            return NotImplemented
        return (
            self.owner == other.owner
            and self.states == other.states
            and self.initial == other.initial
            and dict(self.choice) == dict(other.choice)
            and {m: tuple(u) for m, u in self.updates.items()}
            == {m: tuple(u) for m, u in other.updates.items()}
        )

    __hash__ = None


def make_machine(
    g: Game,
    owner: str,
    states: Sequence[str],
    initial: str,
    choice: Mapping[str, Valuation | Mapping[str, bool]],
    updates: Mapping[str, Iterable[tuple[Formula | str | None, str]]],
) -> StrategyMachine:
    """Validate the parts of a machine for ``owner`` in ``g``.

    Guards may be given as formulas or text (``"*"`` is the catch-all).
    """
    if owner not in g.players:
        raise StrategyError(f"unknown player {owner!r}")
    states = tuple(states)
    if not states:
        raise StrategyError("a machine needs at least one memory state")
    if len(set(states)) != len(states):
        raise StrategyError("duplicate memory state")
    if initial not in states:
        raise StrategyError(f"initial memory state {initial!r} is not declared")
    mine = frozenset(g.owned[owner])
    all_atoms = frozenset(g.atoms)

    ch: dict[str, Valuation] = {}
    for m in states:
        if m not in choice:
            raise StrategyError(f"memory state {m!r} has no choice")
        v = choice[m]
        if not isinstance(v, Valuation):
            v = Valuation.of(v)
        if v.domain != mine:
            foreign = sorted(v.domain - mine)
            missing = sorted(mine - v.domain)
            detail = f"assigns atoms of other players {foreign}" if foreign else f"omits owned atoms {missing}"
            raise StrategyError(f"choice at {m!r} is not a valuation over {owner}'s atoms: it {detail}")
        ch[m] = v
    stray = set(choice) - set(states)
    if stray:
        raise StrategyError(f"choice given for undeclared memory states {sorted(stray)}")

    up: dict[str, tuple[tuple[Formula | None, str], ...]] = {}
    for m in states:
        rules = []
        for guard, target in updates.get(m, ()):
            if target not in states:
                raise StrategyError(f"transition from {m!r} to unknown memory state {target!r}")
            if isinstance(guard, str):
                guard = None if guard.strip() == "*" else _parse_guard(guard, all_atoms)
            if guard is not None:
                if not is_propositional(guard):
                    raise StrategyError(f"guard {guard} uses temporal operators")
                if not atoms_of(guard) <= all_atoms:
                    raise StrategyError(f"guard {guard} mentions unknown atoms")
            rules.append((guard, target))
        _check_exhaustive(m, rules)
        up[m] = tuple(rules)
    stray = set(updates) - set(states)
    if stray:
        raise StrategyError(f"transitions given from undeclared memory states {sorted(stray)}")
    return StrategyMachine(owner, states, initial, ch, up)


def _parse_guard(text: str, atoms: frozenset[str]) -> Formula:
    try:
        return parse_ltl(text, atoms)
    except (LtlSyntaxError, UnknownAtomError) as exc:
        raise StrategyError(f"bad guard {text!r}: {exc}") from None


def _check_exhaustive(m: str, rules: list[tuple[Formula | None, str]]) -> None:
    if any(guard is None for guard, _ in rules):
        return
    guard_atoms = sorted(set().union(*(atoms_of(guard) for guard, _ in rules)))
    if len(guard_atoms) > MAX_ENUMERATED_GUARD_ATOMS:
        raise StrategyError(
            f"memory state {m!r} needs a catch-all guard '*': its guards mention "
            f"{len(guard_atoms)} atoms, too many to check exhaustiveness"
        )
    for v in all_valuations(guard_atoms):
        if not any(eval_propositional(guard, v) for guard, _ in rules):
            raise StrategyError(f"guards of memory state {m!r} do not cover {v.format()}")


def constant_machine(g: Game, owner: str, choice: Mapping[str, bool] | Valuation) -> StrategyMachine:
    """One memory state that always plays ``choice``."""
    return make_machine(g, owner, ["0"], "0", {"0": choice}, {"0": [(None, "0")]})


def cyclic_machine(g: Game, owner: str, choices: Sequence[Mapping[str, bool] | Valuation]) -> StrategyMachine:
    """Plays ``choices`` in order forever, ignoring what the others do."""
    states = [str(k) for k in range(len(choices))]
    return make_machine(
        g,
        owner,
        states,
        "0",
        dict(zip(states, choices)),
        {s: [(None, states[(k + 1) % len(states)])] for k, s in enumerate(states)},
    )


@dataclass(frozen=True)
class Profile:
    """One machine per player, in the game's player order."""

    machines: tuple[StrategyMachine, ...]

    def __getitem__(self, i: int) -> StrategyMachine:
        return self.machines[i]

    def __len__(self) -> int:
        return len(self.machines)

    def replace(self, i: int, machine: StrategyMachine) -> Profile:
        ms = list(self.machines)
        ms[i] = machine
        return Profile(tuple(ms))

    def initial_memory(self) -> tuple[str, ...]:
        return tuple(m.initial for m in self.machines)


def make_profile(g: Game, machines: Iterable[StrategyMachine] | Mapping[str, StrategyMachine]) -> Profile:
    if isinstance(machines, Mapping):
        missing = [p for p in g.players if p not in machines]
        if missing:
            raise StrategyError(f"no strategy for players {missing}")
        machines = [machines[p] for p in g.players]
    machines = tuple(machines)
    if tuple(m.owner for m in machines) != g.players:
        raise StrategyError(
            f"profile owners {[m.owner for m in machines]} do not match players {list(g.players)}"
        )
    return Profile(machines)


def joint_valuation(profile: Profile, memory: Sequence[str]) -> Valuation:
    x = Valuation((), ())
    for machine, m in zip(profile.machines, memory):
        x = x | machine.choose(m)
    return x


def step(profile: Profile, memory: Sequence[str]) -> tuple[Valuation, tuple[str, ...]]:
    """The round played from joint ``memory`` and the joint memory after it."""
    x = joint_valuation(profile, memory)
    return x, tuple(machine.update(m, x) for machine, m in zip(profile.machines, memory))


@dataclass(frozen=True)
class InducedPlay:
    """The lasso induced by a profile with the joint memory at each position."""

    lasso: Lasso
    memories: tuple[tuple[str, ...], ...]

    @property
    def stem_length(self) -> int:
        return len(self.lasso.stem)

    @property
    def cycle_length(self) -> int:
        return len(self.lasso.cycle)


def induced_lasso(g: Game, profile: Profile) -> InducedPlay:
    """Simulate joint memories until one repeats; the repeat closes the cycle."""
    memory = profile.initial_memory()
    first_seen: dict[tuple[str, ...], int] = {}
    plays: list[Valuation] = []
    memories: list[tuple[str, ...]] = []
    while memory not in first_seen:
        first_seen[memory] = len(plays)
        memories.append(memory)
        x, memory = step(profile, memory)
        plays.append(x)
    loop_start = first_seen[memory]
    lasso = Lasso(tuple(plays[:loop_start]), tuple(plays[loop_start:]))
    return InducedPlay(lasso, tuple(memories))


def action_costs(g: Game, profile: Profile, play: InducedPlay) -> list[tuple[int, ...]]:
    """Per position, the cost of each player's own action."""
    return [
        tuple(valuation_cost(g, machine.choose(mem[k])) for k, machine in enumerate(profile.machines))
        for mem in play.memories
    ]


@dataclass(frozen=True)
class EndowmentTrace:
    player: str
    values: tuple[int, ...]


def endowment_trace(g: Game, profile: Profile, player: str, horizon: int) -> EndowmentTrace:
    """Compound endowment of ``player`` at steps 0..horizon."""
    if horizon < 0:
        raise ValueError("horizon must be nonnegative")
    i = g.index(player)
    play = induced_lasso(g, profile)
    costs = [c[i] for c in action_costs(g, profile, play)]
    stem, cyc = play.stem_length, play.cycle_length
    values = [g.endowment[player]]
    for t in range(horizon):
        pos = t if t < stem else stem + (t - stem) % cyc
        values.append(checked(values[-1] - costs[pos]))
    return EndowmentTrace(player, tuple(values))


def _parse_bool(word: str) -> bool:
    lowered = word.lower()
    if lowered in ("true", "t", "1"):
        return True
    if lowered in ("false", "f", "0"):
        return False
    raise StrategyError(f"expected true or false, got {word!r}")


def parse_strategy(text: str, g: Game, owner: str) -> StrategyMachine:
    """Read a machine for ``owner`` from the line-oriented strategy format::

        init <state>
        state <name> choose <atom>=<true|false>,...
        from <state> on <guard|*> goto <state>

    Transitions of a state are tried in file order; ``#`` starts a comment.
    """
    initial = None
    states: list[str] = []
    choice: dict[str, dict[str, bool]] = {}
    updates: dict[str, list[tuple[str, str]]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        keyword, _, rest = line.partition(" ")
        rest = rest.strip()
        try:
            if keyword == "init":
                if initial is not None:
                    raise StrategyError("init given twice")
                initial = rest
            elif keyword == "state":
                name, _, body = rest.partition(" ")
                body = body.strip()
                if not name or not (body == "choose" or body.startswith("choose ")):
                    raise StrategyError("expected 'state <name> choose <atom>=<bool>,...'")
                if name in choice:
                    raise StrategyError(f"memory state {name!r} declared twice")
                assignment: dict[str, bool] = {}
                for item in body[len("choose"):].replace(",", " ").split():
                    atom, eq, value = item.partition("=")
                    if not eq:
                        raise StrategyError(f"expected <atom>=<bool>, got {item!r}")
                    if atom in assignment:
                        raise StrategyError(f"atom {atom!r} assigned twice")
                    assignment[atom] = _parse_bool(value)
                states.append(name)
                choice[name] = assignment
            elif keyword == "from":
                src, sep, tail = rest.partition(" on ")
                guard, sep2, dst = tail.rpartition(" goto ")
                if not (sep and sep2 and src.strip() and guard.strip() and dst.strip()):
                    raise StrategyError("expected 'from <state> on <guard> goto <state>'")
                src = src.strip()
                if src not in choice:
                    raise StrategyError(f"transition from unknown memory state {src!r}")
                updates.setdefault(src, []).append((guard.strip(), dst.strip()))
            else:
                raise StrategyError(f"unknown keyword {keyword!r}")
        except StrategyError as exc:
            raise StrategyError(f"line {lineno}: {exc}") from None
    if initial is None:
        raise StrategyError("missing 'init' line")
    return make_machine(g, owner, states, initial, choice, updates)


def format_strategy(machine: StrategyMachine, atom_order: Sequence[str] | None = None) -> str:
    """Text in the format read by :func:`parse_strategy`."""
    order = list(atom_order) if atom_order is not None else None
    lines = [f"init {machine.initial}"]
    for m in machine.states:
        v = machine.choice[m]
        atoms = [a for a in (order or sorted(v.domain)) if a in v.domain]
        body = ",".join(f"{a}={'true' if v[a] else 'false'}" for a in atoms)
        lines.append(f"state {m} choose {body}".rstrip())
    for m in machine.states:
        for guard, target in machine.updates[m]:
            lines.append(f"from {m} on {'*' if guard is None else guard} goto {target}")
    return "\n".join(lines) + "\n"
