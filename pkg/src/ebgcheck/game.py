"""Electric boolean games: players, owned atoms, objectives, costs, endowments."""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

from .ltl import Atom, Formula, atoms_of, parse_ltl
from .valuation import Valuation

INT64_MAX = 2**63 - 1
INT64_MIN = -(2**63)


class GameValidationError(ValueError):
    pass


def checked(value: int) -> int:
    """Return ``value`` unchanged, or raise if it leaves the signed 64-bit range."""
    if not INT64_MIN <= value <= INT64_MAX:
        raise OverflowError(f"resource arithmetic overflowed 64 bits: {value}")
    return value


@dataclass(frozen=True, eq=False)
class Game:
    """A validated electric boolean game; build one with :func:`validate_game`."""

    players: tuple[str, ...]
    owned: Mapping[str, frozenset[str]]
    objectives: Mapping[str, Formula]
    costs: Mapping[tuple[str, bool], int]
    endowment: Mapping[str, int]
    atoms: tuple[str, ...] = field(init=False)
    owner: Mapping[str, str] = field(init=False)

    def __post_init__(self):
        # atom order: by owning player, then by name
        atoms = tuple(a for p in self.players for a in sorted(self.owned[p]))
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "owner", {a: p for p in self.players for a in self.owned[p]})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Game):
            return NotImplemented
        return (
            self.players == other.players
            and dict(self.owned) == dict(other.owned)
            and dict(self.objectives) == dict(other.objectives)
            and dict(self.costs) == dict(other.costs)
            and dict(self.endowment) == dict(other.endowment)
        )

    __hash__ = None

    @property
    def n(self) -> int:
        return len(self.players)

    def index(self, player: str) -> int:
        return self.players.index(player)

    def atoms_of_player(self, player: str) -> tuple[str, ...]:
        """Owned atoms of ``player`` in game atom order."""
        return tuple(a for a in self.atoms if self.owner[a] == player)

    @property
    def total_endowment(self) -> int:
        return sum(self.endowment.values())

    def endowment_vector(self) -> tuple[int, ...]:
        return tuple(self.endowment[p] for p in self.players)

    def with_endowment(self, endowment: Mapping[str, int] | Iterable[int]) -> Game:
        if not isinstance(endowment, Mapping):
            endowment = dict(zip(self.players, endowment))
        return validate_game(
            {
                "players": self.players,
                "atoms": self.owned,
                "objectives": self.objectives,
                "costs": self.costs,
                "endowment": endowment,
            }
        )


def validate_game(raw: Game | Mapping) -> Game:
    """Check a raw game description and return the validated :class:`Game`.

    ``raw`` maps ``players`` (sequence of names), ``atoms`` (player -> atoms),
    ``objectives`` (player -> LTL text or Formula), ``costs`` ((atom, bool) ->
    int) and ``endowment`` (player -> nonnegative int).  A :class:`Game` is
    revalidated from its own fields.
    """
    if isinstance(raw, Game):
        raw = {
            "players": raw.players,
            "atoms": raw.owned,
            "objectives": raw.objectives,
            "costs": raw.costs,
            "endowment": raw.endowment,
        }
    players = list(raw["players"])
    if not players:
        raise GameValidationError("a game needs at least one player")
    seen: set[str] = set()
    for p in players:
        if not isinstance(p, str) or not p or any(c.isspace() for c in p):
            raise GameValidationError(f"invalid player name {p!r}")
        if p in seen:
            raise GameValidationError(f"duplicate player {p!r}")
        seen.add(p)

    atoms_raw = raw.get("atoms", {})
    unknown_owners = set(atoms_raw) - seen
    if unknown_owners:
        raise GameValidationError(f"atoms assigned to undeclared players {sorted(unknown_owners)}")
    owned: dict[str, frozenset[str]] = {}
    owner_of: dict[str, str] = {}
    for p in players:
        mine = list(atoms_raw.get(p, ()))
        for a in mine:
            if a in owner_of and owner_of[a] != p:
                raise GameValidationError(
                    f"partition violation: atom {a!r} owned by both {owner_of[a]!r} and {p!r}"
                )
            owner_of[a] = p
        owned[p] = frozenset(mine)
    all_atoms = frozenset(owner_of)
    for a in sorted(all_atoms):
        try:
            Atom(a)
        except ValueError as exc:
            raise GameValidationError(str(exc)) from None

    costs_raw = raw.get("costs", {})
    costs: dict[tuple[str, bool], int] = {}
    for (a, b), c in costs_raw.items():
        if a not in all_atoms:
            raise GameValidationError(f"partition violation: cost given for unowned atom {a!r}")
        if isinstance(c, bool) or not isinstance(c, int):
            raise GameValidationError(f"cost of ({a}, {b}) must be an integer")
        costs[(a, bool(b))] = checked(c)
    for a in sorted(all_atoms):
        for b in (True, False):
            if (a, b) not in costs:
                raise GameValidationError(f"cost function is not total: missing c({a}, {str(b).lower()})")

    endow_raw = raw.get("endowment", {})
    extra = set(endow_raw) - seen
    if extra:
        raise GameValidationError(f"endowment for undeclared players {sorted(extra)}")
    endowment: dict[str, int] = {}
    for p in players:
        if p not in endow_raw:
            raise GameValidationError(f"missing endowment for player {p!r}")
        e = endow_raw[p]
        if isinstance(e, bool) or not isinstance(e, int):
            raise GameValidationError(f"endowment of {p!r} must be an integer")
        if e < 0:
            raise GameValidationError(f"negative endowment {e} for player {p!r}")
        endowment[p] = checked(e)

    obj_raw = raw.get("objectives", {})
    extra = set(obj_raw) - seen
    if extra:
        raise GameValidationError(f"objectives for undeclared players {sorted(extra)}")
    objectives: dict[str, Formula] = {}
    for p in players:
        if p not in obj_raw:
            raise GameValidationError(f"missing objective for player {p!r}")
        phi = obj_raw[p]
        if isinstance(phi, str):
            phi = parse_ltl(phi)
        stray = atoms_of(phi) - all_atoms
        if stray:
            raise GameValidationError(f"objective of {p!r} mentions undeclared atoms {sorted(stray)}")
        objectives[p] = phi

    return Game(tuple(players), owned, objectives, costs, endowment)


def valuation_cost(g: Game, v: Valuation) -> int:
    """Sum of per-atom costs of ``v``; its domain may be any subset of the game's atoms."""
    total = 0
    for a in v.domain:
        if a not in g.owner:
            raise KeyError(f"atom {a!r} is not an atom of the game")
        total = checked(total + g.costs[(a, a in v.true_atoms)])
    return total
