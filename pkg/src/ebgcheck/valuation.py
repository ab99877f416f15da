"""Truth assignments over finite atom sets."""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping
from itertools import product


class Valuation(Mapping):
    """Immutable total map from a finite atom set to booleans.

    Two valuations are equal when they have the same domain and agree on it.
    """

    __slots__ = ("_domain", "_true", "_hash")

    def __init__(self, domain: Iterable[str], true_atoms: Iterable[str] = ()):
        self._domain = frozenset(domain)
        self._true = frozenset(true_atoms)
        if not self._true <= self._domain:
            extra = sorted(self._true - self._domain)
            raise ValueError(f"atoms {extra} are set true but lie outside the domain")
        self._hash = hash((self._domain, self._true))

    @classmethod
    def of(cls, mapping: Mapping[str, bool]) -> Valuation:
        return cls(mapping.keys(), (a for a, v in mapping.items() if v))

    @property
    def domain(self) -> frozenset[str]:
        return self._domain

    @property
    def true_atoms(self) -> frozenset[str]:
        return self._true

    def __getitem__(self, atom: str) -> bool:
        if atom not in self._domain:
            raise KeyError(atom)
        return atom in self._true

    def __iter__(self) -> Iterator[str]:
        return iter(sorted(self._domain))

    def __len__(self) -> int:
        return len(self._domain)

    def __contains__(self, atom: object) -> bool:
        return atom in self._domain

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Valuation):
            return self._domain == other._domain and self._true == other._true
        return NotImplemented

    def __hash__(self) -> int:
        return self._hash

    def restrict(self, atoms: Iterable[str]) -> Valuation:
        """Restriction to ``atoms``; every atom must be in the domain."""
        atoms = frozenset(atoms)
        missing = atoms - self._domain
        if missing:
            raise KeyError(f"atoms {sorted(missing)} not in valuation domain")
        return Valuation(atoms, self._true & atoms)

    def union(self, other: Valuation) -> Valuation:
        overlap = self._domain & other._domain
        if (self._true & overlap) != (other._true & overlap):
            raise ValueError("valuations disagree on a shared atom")
        return Valuation(self._domain | other._domain, self._true | other._true)

    def __or__(self, other: Valuation) -> Valuation:
        return self.union(other)

    def format(self, order: Iterable[str] | None = None) -> str:
        atoms = list(order) if order is not None else sorted(self._domain)
        return "{" + ", ".join(
            f"{a}={'T' if a in self._true else 'F'}" for a in atoms if a in self._domain
        ) + "}"

    def __repr__(self) -> str:
        return f"Valuation({self.format()})"


def all_valuations(atoms: Iterable[str]) -> list[Valuation]:
    """Every valuation over ``atoms`` in binary counting order.

    The first atom of ``atoms`` is the most significant bit, so the all-false
    valuation comes first and the all-true one last.
    """
    atoms = list(atoms)
    domain = frozenset(atoms)
    return [
        Valuation(domain, (a for a, bit in zip(atoms, bits) if bit))
        for bits in product((False, True), repeat=len(atoms))
    ]
