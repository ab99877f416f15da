"""Line-oriented text formats for games and strategy machines."""

from __future__ import annotations

from pathlib import Path

from .game import Game, GameValidationError, validate_game
from .ltl import LtlSyntaxError, format_formula, parse_ltl
from .strategy import StrategyMachine, format_strategy, parse_strategy


class FormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def parse_game(text: str) -> Game:
    """Read ``player``, ``atoms``, ``cost``, ``endow`` and ``objective`` lines."""
    players: list[str] = []
    atoms: dict[str, list[str]] = {}
    costs: dict[tuple[str, bool], int] = {}
    endowment: dict[str, int] = {}
    objectives = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        keyword, _, rest = line.partition(" ")
        rest = rest.strip()
        if keyword == "player":
            if not rest or " " in rest:
                raise FormatError("expected 'player <name>'", lineno)
            players.append(rest)
        elif keyword in ("atoms", "objective"):
            who, colon, body = rest.partition(":")
            who = who.strip()
            if not colon or not who:
                raise FormatError(f"expected '{keyword} <player>: ...'", lineno)
            if keyword == "atoms":
                atoms.setdefault(who, []).extend(body.split())
            else:
                if who in objectives:
                    raise FormatError(f"second objective for {who!r}", lineno)
                try:
                    objectives[who] = parse_ltl(body)
                except LtlSyntaxError as exc:
                    raise FormatError(str(exc), lineno) from None
        elif keyword == "cost":
            parts = rest.split()
            if len(parts) != 3 or parts[1] not in ("true", "false"):
                raise FormatError("expected 'cost <atom> <true|false> <int>'", lineno)
            key = (parts[0], parts[1] == "true")
            if key in costs:
                raise FormatError(f"duplicate cost for {parts[0]} {parts[1]}", lineno)
            costs[key] = _int(parts[2], lineno)
        elif keyword == "endow":
            parts = rest.split()
            if len(parts) != 2:
                raise FormatError("expected 'endow <player> <nat>'", lineno)
            if parts[0] in endowment:
                raise FormatError(f"duplicate endowment for {parts[0]!r}", lineno)
            endowment[parts[0]] = _int(parts[1], lineno)
        else:
            raise FormatError(f"unknown keyword {keyword!r}", lineno)
    try:
        return validate_game(
            {"players": players, "atoms": atoms, "costs": costs, "endowment": endowment, "objectives": objectives}
        )
    except GameValidationError as exc:
        raise FormatError(str(exc)) from None


def _int(word: str, lineno: int) -> int:
    try:
        return int(word)
    except ValueError:
        raise FormatError(f"{word!r} is not an integer", lineno) from None


def serialize_game(g: Game) -> str:
    lines = [f"player {p}" for p in g.players]
    for p in g.players:
        if g.owned[p]:
            lines.append(f"atoms {p}: {' '.join(g.atoms_of_player(p))}")
    for a in g.atoms:
        for b in (True, False):
            lines.append(f"cost {a} {str(b).lower()} {g.costs[(a, b)]}")
    lines += [f"endow {p} {g.endowment[p]}" for p in g.players]
    lines += [f"objective {p}: {format_formula(g.objectives[p])}" for p in g.players]
    return "\n".join(lines) + "\n"


def parse_game_file(path: str | Path) -> Game:
    return parse_game(Path(path).read_text(encoding="utf-8"))


def parse_strategy_file(path: str | Path, g: Game, player: str) -> StrategyMachine:
    return parse_strategy(Path(path).read_text(encoding="utf-8"), g, player)


def serialize_strategy(machine: StrategyMachine, g: Game) -> str:
    return format_strategy(machine, g.atoms)
