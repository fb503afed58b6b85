"""Alphabets, symbol sequences and token-file ingestion.

A sequence of ``N`` symbols is indexed ``0 .. n`` with ``n = N - 1``; every
window in this package is an inclusive index pair.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Union


@dataclass(frozen=True)
class Alphabet:
    """Ordered set of distinct tokens; a token's position is its symbol id."""

    tokens: tuple[str, ...]
    lookup: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        tokens = tuple(self.tokens)
        lookup = {tok: i for i, tok in enumerate(tokens)}
        if len(lookup) != len(tokens):
            raise ValueError("alphabet tokens must be distinct")
        object.__setattr__(self, "tokens", tokens)
        object.__setattr__(self, "lookup", lookup)

    @classmethod
    def of_size(cls, size: int) -> "Alphabet":
        return cls(tuple(str(i) for i in range(size)))

    def __len__(self) -> int:
        return len(self.tokens)

    def encode(self, tokens: Iterable[str]) -> tuple[int, ...]:
        return tuple(self.lookup[t] for t in tokens)

    def decode(self, symbols: Iterable[int]) -> list[str]:
        return [self.tokens[s] for s in symbols]


@dataclass(frozen=True)
class Sequence:
    """Observed data ``X_0 .. X_n`` as symbol ids into ``alphabet``."""

    symbols: tuple[int, ...]
    alphabet: Alphabet

    def __post_init__(self) -> None:
        symbols = tuple(int(s) for s in self.symbols)
        if not symbols:
            raise ValueError("empty sequence")
        size = len(self.alphabet)
        if any(s < 0 or s >= size for s in symbols):
            raise ValueError("symbol id outside alphabet")
        object.__setattr__(self, "symbols", symbols)

    @property
    def n(self) -> int:
        """Largest index, so the data is ``X_0 .. X_n``."""
        return len(self.symbols) - 1

    def __len__(self) -> int:
        return len(self.symbols)

    def tokens(self) -> list[str]:
        return self.alphabet.decode(self.symbols)


SymbolsLike = Union[Sequence, tuple, list]


def as_symbols(seq: SymbolsLike) -> tuple[int, ...]:
    """Accept a :class:`Sequence` or a plain list/tuple of symbol ids."""
    if isinstance(seq, Sequence):
        return seq.symbols
    return tuple(seq)


def ingest(text: str) -> tuple[Alphabet, Sequence]:
    """Parse whitespace-separated tokens; symbol ids follow first appearance."""
    words = text.split()
    if not words:
        raise ValueError("empty sequence")
    alphabet = Alphabet(tuple(dict.fromkeys(words)))
    return alphabet, Sequence(alphabet.encode(words), alphabet)


def read_sequence(path) -> Sequence:
    with open(path, encoding="utf-8") as fh:
        return ingest(fh.read())[1]


def write_tokens(path, seq: Sequence) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(" ".join(seq.tokens()))
        fh.write("\n")


def split_index(n: int) -> int:
    """First index of the second half: ``ceil(n / 2)``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return (n + 1) // 2
