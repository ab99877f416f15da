"""Command-line front end.

Every command prints a short report followed by a block of ``key=value``
lines with stable names.  Exit codes: 0 affirmative, 1 negative, 2 unknown,
3 input error.
"""

from __future__ import annotations

import argparse
import sys
from collections.abc import Sequence

from .buchi import AutomatonTooLarge
from .deviation import DeviationPreconditionError, has_rational_deviation, vertex_text
from .energy import DEFAULT_BUDGET, Step
from .equilibrium import is_nash_equilibrium, payoffs
from .feasibility import SearchBudgetExceeded, is_feasible
from .formats import FormatError, parse_game_file, parse_strategy_file, serialize_strategy
from .game import Game, GameValidationError
from .redistribution import DEFAULT_ENUM_CAP, EnumerationTooLarge, rational_construction, rational_elimination
from .strategy import Profile, StrategyError, endowment_trace, induced_lasso, make_profile

EXIT_YES, EXIT_NO, EXIT_UNKNOWN, EXIT_INPUT = 0, 1, 2, 3


class InputError(Exception):
    pass


class Report:
    def __init__(self):
        self.lines: list[str] = []
        self.fields: list[tuple[str, str]] = []

    def say(self, text: str = "") -> None:
        self.lines.append(text)

    def put(self, key: str, value) -> None:
        self.fields.append((key, str(value)))

    def render(self) -> str:
        block = "\n".join(f"{k}={v}" for k, v in self.fields)
        return "\n".join(self.lines) + "\n\n" + block + "\n"


def _player(g: Game, text: str | None) -> str:
    if text is None:
        raise InputError("this command needs --player")
    if text in g.players:
        return text
    if text.isdigit() and 1 <= int(text) <= g.n:
        return g.players[int(text) - 1]
    raise InputError(f"unknown player {text!r}")


def _profile(g: Game, paths: Sequence[str]) -> Profile:
    by_player: dict[str, str] = {}
    positional = []
    for item in paths:
        name, eq, path = item.partition("=")
        if eq and name in g.players:
            by_player[name] = path
        else:
            positional.append(item)
    free = [p for p in g.players if p not in by_player]
    if len(positional) > len(free):
        raise InputError("more strategy files than players")
    by_player.update(zip(free, positional))
    missing = [p for p in g.players if p not in by_player]
    if missing:
        raise InputError(f"no strategy file for players {missing}")
    return make_profile(g, [parse_strategy_file(by_player[p], g, p) for p in g.players])


def _steps_text(steps: Sequence[Step], g: Game) -> str:
    return " ; ".join(f"{vertex_text(s.source)} {s.label.format(g.atoms)}" for s in steps)


def _alloc_text(e: dict[str, int]) -> str:
    return ",".join(f"{p}:{v}" for p, v in e.items())


def cmd_validate(g: Game, args, r: Report) -> int:
    r.say(f"game with {g.n} players and {len(g.atoms)} atoms is valid")
    if args.strategy:
        profile = _profile(g, args.strategy)
        r.say(f"profile with memory sizes {[len(m.states) for m in profile.machines]} is valid")
    r.put("verdict", "valid")
    return EXIT_YES


def cmd_simulate(g: Game, args, r: Report) -> int:
    profile = _profile(g, args.strategy)
    play = induced_lasso(g, profile)
    lasso = play.lasso
    traces = {p: endowment_trace(g, profile, p, args.steps).values for p in g.players}
    r.say("step  " + "  ".join(g.players) + "  valuation")
    for t in range(args.steps + 1):
        row = "  ".join(str(traces[p][t]) for p in g.players)
        label = lasso[t].format(g.atoms) if t < args.steps else ""
        r.say(f"{t:<5} {row}  {label}".rstrip())
    r.put("verdict", "simulated")
    r.put("play.stem", " ; ".join(x.format(g.atoms) for x in lasso.stem))
    r.put("play.cycle", " ; ".join(x.format(g.atoms) for x in lasso.cycle))
    for p in g.players:
        r.put(f"endowment.{p}", ",".join(map(str, traces[p])))
    return EXIT_YES


def cmd_feasible(g: Game, args, r: Report) -> int:
    result = is_feasible(g, _profile(g, args.strategy))
    if result:
        r.say("the profile is feasible")
        r.put("verdict", "feasible")
        return EXIT_YES
    v = result.violation
    r.say(f"the profile is infeasible: endowment of {v.player} is {v.value} at step {v.step}")
    r.put("verdict", "infeasible")
    _put_violation(r, v)
    return EXIT_NO


def _put_violation(r: Report, v) -> None:
    r.put("violation.player", v.player)
    r.put("violation.step", v.step)
    r.put("violation.value", v.value)


def cmd_payoff(g: Game, args, r: Report) -> int:
    values = payoffs(g, _profile(g, args.strategy))
    chosen = [_player(g, args.player)] if args.player else list(g.players)
    for p in chosen:
        r.say(f"payoff of {p}: {values[p]}")
    ok = all(values[p] for p in chosen)
    r.put("verdict", "satisfied" if ok else "unsatisfied")
    for p in chosen:
        r.put(f"payoff.{p}", values[p])
    return EXIT_YES if ok else EXIT_NO


def cmd_deviation(g: Game, args, r: Report) -> int:
    player = _player(g, args.player)
    profile = _profile(g, args.strategy)
    try:
        found = has_rational_deviation(g, profile, player, args.budget)
    except DeviationPreconditionError as exc:
        raise InputError(str(exc)) from None
    except SearchBudgetExceeded as exc:
        r.say(f"undecided: {exc}")
        r.put("verdict", "unknown")
        return EXIT_UNKNOWN
    if found is None:
        r.say(f"{player} has no rational deviation")
        r.put("verdict", "no-deviation")
        return EXIT_NO
    _report_deviation(g, found, r)
    r.put("verdict", "deviation")
    _put_deviation(g, found, r)
    return EXIT_YES


def _report_deviation(g: Game, found, r: Report) -> None:
    r.say(f"{found.deviator} has a rational deviation:")
    r.say(serialize_strategy(found.machine, g).rstrip())


def _put_deviation(g: Game, found, r: Report) -> None:
    r.put("deviator", found.deviator)
    r.put("witness.stem", _steps_text(found.witness.stem, g))
    r.put("witness.cycle", _steps_text(found.witness.segment, g))


def cmd_check_ne(g: Game, args, r: Report) -> int:
    verdict = is_nash_equilibrium(g, _profile(g, args.strategy), args.budget)
    r.put("verdict", verdict.outcome)
    if verdict.outcome == "equilibrium":
        r.say("the profile is a Nash equilibrium")
        return EXIT_YES
    if verdict.outcome == "unknown":
        r.say(f"undecided: the search for {verdict.unknown_player} ran out of budget")
        r.put("unknown.player", verdict.unknown_player)
        return EXIT_UNKNOWN
    if verdict.violation is not None:
        v = verdict.violation
        r.say(f"not an equilibrium: endowment of {v.player} is {v.value} at step {v.step}")
        _put_violation(r, v)
    else:
        r.say("not an equilibrium")
        _report_deviation(g, verdict.deviation, r)
        _put_deviation(g, verdict.deviation, r)
    return EXIT_NO


def _redistribution(kind: str):
    def command(g: Game, args, r: Report) -> int:
        profile = _profile(g, args.strategy)
        try:
            if kind == "rc":
                e = rational_construction(g, profile, args.budget, args.enum_cap)
            else:
                e = rational_elimination(g, profile, args.budget)
        except SearchBudgetExceeded as exc:
            r.say(f"undecided: {exc}")
            r.put("verdict", "unknown")
            return EXIT_UNKNOWN
        if e is None:
            r.say("no suitable redistribution exists")
            r.put("verdict", "none")
            return EXIT_NO
        goal = "is" if kind == "rc" else "is not"
        r.say(f"under {_alloc_text(e)} the profile {goal} a Nash equilibrium")
        r.put("verdict", "found")
        r.put("redistribution", _alloc_text(e))
        for p, v in e.items():
            r.put(f"endowment.{p}", v)
        return EXIT_YES

    return command


COMMANDS = {
    "validate": cmd_validate,
    "simulate": cmd_simulate,
    "feasible": cmd_feasible,
    "payoff": cmd_payoff,
    "deviation": cmd_deviation,
    "check-ne": cmd_check_ne,
    "rc": _redistribution("rc"),
    "re": _redistribution("re"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ebgcheck", description="Verify strategy profiles of iterated electric boolean games.")
    parser.add_argument("command", choices=list(COMMANDS))
    parser.add_argument("game", help="game description file")
    parser.add_argument(
        "-s",
        "--strategy",
        action="append",
        default=[],
        metavar="[PLAYER=]FILE",
        help="strategy file; unnamed files are assigned to players in declaration order",
    )
    parser.add_argument("--player", help="player name or 1-based index")
    parser.add_argument("--steps", type=int, default=10, help="simulation horizon (default 10)")
    parser.add_argument(
        "--budget", type=int, default=DEFAULT_BUDGET, help=f"deviation search budget in configurations (default {DEFAULT_BUDGET})"
    )
    parser.add_argument(
        "--enum-cap", type=int, default=DEFAULT_ENUM_CAP, help=f"maximum redistributions enumerated (default {DEFAULT_ENUM_CAP})"
    )
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_YES
    if args.steps < 0 or args.budget < 1 or args.enum_cap < 1:
        print("error: --steps must be nonnegative, --budget and --enum-cap positive", file=sys.stderr)
        return EXIT_INPUT
    report = Report()
    try:
        g = parse_game_file(args.game)
        code = COMMANDS[args.command](g, args, report)
    except (
        OSError,
        FormatError,
        GameValidationError,
        StrategyError,
        InputError,
        EnumerationTooLarge,
        AutomatonTooLarge,
        OverflowError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(report.render())
    return code


if __name__ == "__main__":
    sys.exit(main())
