"""Block occurrence counts inside an index window.

A block of length ``m + 1`` occurs at end position ``t`` when
``X[t-m .. t]`` equals it; occurrences may overlap.  Within a window
``[n1, n2]`` only end positions ``t`` in ``[n1 + m, n2]`` are admissible, so
the whole block lies inside the window.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from markov_order.sequence import SymbolsLike, as_symbols

Block = tuple  # tuple[int, ...], oldest symbol first


@dataclass(frozen=True)
class Window:
    n1: int
    n2: int

    def __post_init__(self) -> None:
        if not 0 <= self.n1 <= self.n2:
            raise ValueError(f"invalid window [{self.n1}, {self.n2}]")

    def __len__(self) -> int:
        return self.n2 - self.n1 + 1

    def check(self, symbols) -> None:
        if self.n2 >= len(symbols):
            raise ValueError(f"window end {self.n2} beyond sequence end {len(symbols) - 1}")


def _count(symbols: tuple[int, ...], n1: int, n2: int, block: Block) -> int:
    """Occurrences of ``block`` ending in ``[n1 + len - 1, n2]``; 0 for an inverted range."""
    m = len(block) - 1
    return sum(1 for t in range(n1 + m, n2 + 1) if symbols[t - m : t + 1] == block)


def count_block(seq: SymbolsLike, w: Window, block) -> int:
    symbols = as_symbols(seq)
    w.check(symbols)
    block = tuple(block)
    if not block:
        raise ValueError("block must be non-empty")
    return _count(symbols, w.n1, w.n2, block)


def occurrence_positions(seq: SymbolsLike, w: Window, block) -> list[int]:
    """End positions of every occurrence of ``block`` in ``w``, ascending."""
    symbols = as_symbols(seq)
    w.check(symbols)
    block = tuple(block)
    if not block:
        raise ValueError("block must be non-empty")
    m = len(block) - 1
    return [t for t in range(w.n1 + m, w.n2 + 1) if symbols[t - m : t + 1] == block]


def level_counter(symbols: tuple[int, ...], n1: int, n2: int, length: int) -> Counter:
    """Counts of every ``length``-block whose occurrence lies inside ``[n1, n2]``."""
    stop = n2 - length + 2  # one past the last admissible start
    if stop <= n1:
        return Counter()
    return Counter(zip(*(symbols[n1 + j : stop + j] for j in range(length))))


@dataclass(frozen=True)
class WindowCounts:
    window: Window
    max_len: int
    counts: dict = field(repr=False)

    def __getitem__(self, block) -> int:
        return self.counts.get(tuple(block), 0)

    def level(self, length: int) -> dict:
        return {b: c for b, c in self.counts.items() if len(b) == length}


def build_counts(seq: SymbolsLike, w: Window, max_len: int) -> WindowCounts:
    """Materialize counts of all blocks of length ``1 .. max_len`` in one go."""
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    symbols = as_symbols(seq)
    w.check(symbols)
    counts: dict = {}
    for length in range(1, max_len + 1):
        level = level_counter(symbols, w.n1, w.n2, length)
        if not level:
            break
        counts.update(level)
    return WindowCounts(w, max_len, counts)


def ratio(numerator: int, denominator: int) -> float:
    """Integer ratio with ``0/0`` (and any ``x/0``) taken as 0."""
    return numerator / denominator if denominator else 0.0


def empirical_conditional(seq: SymbolsLike, w: Window, context, x: int) -> float:
    """Frequency of ``x`` right after ``context`` within ``w``.

    The numerator counts ``(context, x)`` ending in ``[n1 + k, n2]``; the
    denominator counts ``context`` ending in ``[n1 + k - 1, n2 - 1]``.  With an
    empty context the denominator is the window length, i.e. a marginal
    frequency.
    """
    symbols = as_symbols(seq)
    w.check(symbols)
    context = tuple(context)
    numerator = _count(symbols, w.n1, w.n2, context + (x,))
    if context:
        denominator = _count(symbols, w.n1, w.n2 - 1, context)
    else:
        denominator = len(w)
    return ratio(numerator, denominator)
