"""LTL syntax trees, a text parser, and exact evaluation on lassos.

Surface syntax (tightest binding first)::

    !  X  F  G      unary prefix operators (also ~, ¬)
    U               until, right associative
    &               conjunction (also &&, ∧)
    |               disjunction (also ||, ∨)
    ->              implication, right associative (also →)

``true`` and ``false`` are constants; parentheses group.  Operators that are
letters must be separated from atom names, e.g. ``G F p`` rather than ``GFp``.
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from .valuation import Valuation

KEYWORDS = frozenset({"X", "F", "G", "U", "true", "false"})


class LtlSyntaxError(ValueError):
    def __init__(self, message: str, text: str, position: int):
        super().__init__(f"{message} at position {position} in {text!r}")
        self.text = text
        self.position = position


class UnknownAtomError(ValueError):
    def __init__(self, atom: str):
        super().__init__(f"unknown atom {atom!r}")
        self.atom = atom


@dataclass(frozen=True)
class Formula:
    def __str__(self) -> str:
        return format_formula(self)


@dataclass(frozen=True)
class TrueConst(Formula):
    pass


@dataclass(frozen=True)
class FalseConst(Formula):
    pass


@dataclass(frozen=True)
class Atom(Formula):
    name: str

    def __post_init__(self):
        if not _IDENT.fullmatch(self.name) or self.name in KEYWORDS:
            raise ValueError(f"invalid atom name {self.name!r}")


@dataclass(frozen=True)
class Not(Formula):
    operand: Formula


@dataclass(frozen=True)
class Next(Formula):
    operand: Formula


@dataclass(frozen=True)
class Eventually(Formula):
    operand: Formula


@dataclass(frozen=True)
class Always(Formula):
    operand: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Until(Formula):
    left: Formula
    right: Formula


UNARY = (Not, Next, Eventually, Always)
BINARY = (And, Or, Implies, Until)
TEMPORAL = (Next, Eventually, Always, Until)


def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, UNARY):
        return (f.operand,)
    if isinstance(f, BINARY):
        return (f.left, f.right)
    return ()


def subformulas(f: Formula) -> list[Formula]:
    """Distinct subformulas of ``f``, children before parents."""
    seen: dict[Formula, None] = {}
    stack: list[tuple[Formula, bool]] = [(f, False)]
    while stack:
        node, expanded = stack.pop()
        if node in seen:
            continue
        if expanded:
            seen[node] = None
        else:
            stack.append((node, True))
            stack.extend((c, False) for c in reversed(children(node)))
    return list(seen)


def atoms_of(f: Formula) -> frozenset[str]:
    return frozenset(s.name for s in subformulas(f) if isinstance(s, Atom))


def size(f: Formula) -> int:
    """Number of operator nodes (atoms and constants are not counted)."""
    if isinstance(f, (Atom, TrueConst, FalseConst)):
        return 0
    return 1 + sum(size(c) for c in children(f))


def is_propositional(f: Formula) -> bool:
    return not any(isinstance(s, TEMPORAL) for s in subformulas(f))


def to_core(f: Formula) -> Formula:
    """Rewrite into the core grammar: atoms, true, ¬, ∧, X, U."""
    if isinstance(f, (Atom, TrueConst)):
        return f
    if isinstance(f, FalseConst):
        return Not(TrueConst())
    if isinstance(f, Not):
        return Not(to_core(f.operand))
    if isinstance(f, Next):
        return Next(to_core(f.operand))
    if isinstance(f, And):
        return And(to_core(f.left), to_core(f.right))
    if isinstance(f, Until):
        return Until(to_core(f.left), to_core(f.right))
    if isinstance(f, Or):
        return Not(And(Not(to_core(f.left)), Not(to_core(f.right))))
    if isinstance(f, Implies):
        return Not(And(to_core(f.left), Not(to_core(f.right))))
    if isinstance(f, Eventually):
        return Until(TrueConst(), to_core(f.operand))
    if isinstance(f, Always):
        return Not(Until(TrueConst(), Not(to_core(f.operand))))
    raise TypeError(f"not a formula: {f!r}")


def eval_propositional(f: Formula, v: Valuation) -> bool:
    """Truth of a temporal-free formula under a single valuation."""
    if isinstance(f, Atom):
        return v[f.name]
    if isinstance(f, TrueConst):
        return True
    if isinstance(f, FalseConst):
        return False
    if isinstance(f, Not):
        return not eval_propositional(f.operand, v)
    if isinstance(f, And):
        return eval_propositional(f.left, v) and eval_propositional(f.right, v)
    if isinstance(f, Or):
        return eval_propositional(f.left, v) or eval_propositional(f.right, v)
    if isinstance(f, Implies):
        return (not eval_propositional(f.left, v)) or eval_propositional(f.right, v)
    raise ValueError(f"temporal operator in propositional context: {f}")


# -- printing --------------------------------------------------------------

_UNARY_SYMBOL = {Not: "!", Next: "X ", Eventually: "F ", Always: "G "}
_BINARY_SYMBOL = {And: "&", Or: "|", Implies: "->", Until: "U"}


def format_formula(f: Formula) -> str:
    """Fully parenthesised text that parses back to an equal tree."""
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, TrueConst):
        return "true"
    if isinstance(f, FalseConst):
        return "false"
    if isinstance(f, UNARY):
        return _UNARY_SYMBOL[type(f)] + format_formula(f.operand)
    if isinstance(f, BINARY):
        return f"({format_formula(f.left)} {_BINARY_SYMBOL[type(f)]} {format_formula(f.right)})"
    raise TypeError(f"not a formula: {f!r}")


# -- parsing ---------------------------------------------------------------

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_TOKEN = re.compile(
    r"\s*(?:(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>->|→|&&|\|\||[!~¬&|∧∨()]))"
)
_CANONICAL = {"~": "!", "¬": "!", "&&": "&", "∧": "&", "||": "|", "∨": "|", "→": "->"}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos == len(text):
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            raise LtlSyntaxError(f"unexpected character {text[pos]!r}", text, pos)
        start = m.start("ident") if m.group("ident") else m.start("op")
        if m.group("ident"):
            word = m.group("ident")
            kind = "kw" if word in KEYWORDS else "ident"
            tokens.append((kind, word, start))
        else:
            op = m.group("op")
            tokens.append(("op", _CANONICAL.get(op, op), start))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, known_atoms: frozenset[str] | None):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.known = known_atoms

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def accept(self, value: str) -> bool:
        kind, tok, _ = self.peek()
        if kind in ("op", "kw") and tok == value:
            self.i += 1
            return True
        return False

    def fail(self, message: str):
        raise LtlSyntaxError(message, self.text, self.peek()[2])

    def parse(self) -> Formula:
        f = self.implication()
        if self.peek()[0] != "eof":
            self.fail(f"unexpected {self.peek()[1]!r}")
        return f

    def implication(self) -> Formula:
        left = self.disjunction()
        if self.accept("->"):
            return Implies(left, self.implication())
        return left

    def disjunction(self) -> Formula:
        left = self.conjunction()
        while self.accept("|"):
            left = Or(left, self.conjunction())
        return left

    def conjunction(self) -> Formula:
        left = self.until()
        while self.accept("&"):
            left = And(left, self.until())
        return left

    def until(self) -> Formula:
        left = self.unary()
        if self.accept("U"):
            return Until(left, self.until())
        return left

    def unary(self) -> Formula:
        for symbol, ctor in (("!", Not), ("X", Next), ("F", Eventually), ("G", Always)):
            if self.accept(symbol):
                return ctor(self.unary())
        return self.primary()

    def primary(self) -> Formula:
        kind, tok, _ = self.peek()
        if kind == "eof":
            self.fail("missing operand")
        if self.accept("("):
            f = self.implication()
            if not self.accept(")"):
                self.fail("expected ')'")
            return f
        if self.accept("true"):
            return TrueConst()
        if self.accept("false"):
            return FalseConst()
        if kind == "ident":
            if self.known is not None and tok not in self.known:
                raise UnknownAtomError(tok)
            self.i += 1
            return Atom(tok)
        self.fail(f"unexpected {tok!r}")


def parse_ltl(text: str, known_atoms: Iterable[str] | None = None) -> Formula:
    """Parse LTL text; atoms must belong to ``known_atoms`` when it is given."""
    if not text or not text.strip():
        raise LtlSyntaxError("empty formula", text, 0)
    known = frozenset(known_atoms) if known_atoms is not None else None
    return _Parser(text, known).parse()


# -- lassos ----------------------------------------------------------------


@dataclass(frozen=True)
class Lasso:
    """Ultimately periodic play ``stem · cycle^ω``."""

    stem: tuple[Valuation, ...]
    cycle: tuple[Valuation, ...]

    def __post_init__(self):
        object.__setattr__(self, "stem", tuple(self.stem))
        object.__setattr__(self, "cycle", tuple(self.cycle))
        if not self.cycle:
            raise ValueError("lasso cycle must be nonempty")
        domains = {v.domain for v in self.stem + self.cycle}
        if len(domains) != 1:
            raise ValueError("lasso valuations must share one domain")

    @property
    def atoms(self) -> frozenset[str]:
        return self.cycle[0].domain

    def __len__(self) -> int:
        """Number of distinct positions, |stem| + |cycle|."""
        return len(self.stem) + len(self.cycle)

    def __getitem__(self, t: int) -> Valuation:
        if t < 0:
            raise IndexError(t)
        if t < len(self.stem):
            return self.stem[t]
        return self.cycle[(t - len(self.stem)) % len(self.cycle)]

    def successor(self, t: int) -> int:
        """Position index that follows ``t`` among the |stem|+|cycle| positions."""
        return t + 1 if t + 1 < len(self) else len(self.stem)

    def prefix(self, n: int) -> list[Valuation]:
        return [self[t] for t in range(n)]


def eval_lasso(f: Formula, rho: Lasso) -> bool:
    """Whether ``rho`` satisfies ``f``.

    Every subformula is tabulated over the |stem|+|cycle| positions; F and U
    are least fixpoints, G a greatest one, each reached by backward sweeps
    that wrap around the cycle (two sweeps always suffice).
    """
    n = len(rho)
    succ = [rho.successor(t) for t in range(n)]
    table: dict[Formula, list[bool]] = {}
    for g in subformulas(f):
        if isinstance(g, Atom):
            row = [rho[t][g.name] for t in range(n)]
        elif isinstance(g, TrueConst):
            row = [True] * n
        elif isinstance(g, FalseConst):
            row = [False] * n
        elif isinstance(g, Not):
            row = [not x for x in table[g.operand]]
        elif isinstance(g, And):
            row = [a and b for a, b in zip(table[g.left], table[g.right])]
        elif isinstance(g, Or):
            row = [a or b for a, b in zip(table[g.left], table[g.right])]
        elif isinstance(g, Implies):
            row = [(not a) or b for a, b in zip(table[g.left], table[g.right])]
        elif isinstance(g, Next):
            sub = table[g.operand]
            row = [sub[succ[t]] for t in range(n)]
        elif isinstance(g, Until):
            row = _fixpoint(table[g.left], table[g.right], succ, least=True)
        elif isinstance(g, Eventually):
            row = _fixpoint([True] * n, table[g.operand], succ, least=True)
        elif isinstance(g, Always):
            row = _fixpoint(table[g.operand], [False] * n, succ, least=False)
        else:
            raise TypeError(f"not a formula: {g!r}")
        table[g] = row
    return table[f][0]


def _fixpoint(hold: Sequence[bool], release: Sequence[bool], succ: Sequence[int], least: bool):
    # row[t] = release[t] or (hold[t] and row[succ[t]])
    n = len(hold)
    row = [not least] * n
    changed = True
    while changed:
        changed = False
        for t in range(n - 1, -1, -1):
            value = release[t] or (hold[t] and row[succ[t]])
            if value != row[t]:
                row[t] = value
                changed = True
    return row
