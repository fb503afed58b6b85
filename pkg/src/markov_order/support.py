"""Data-driven support sets.

``support_first_half`` holds the ``(k+1)``-blocks seen at least once before the
split point; ``support_second_half`` holds those seen more than ``n**(1-gamma)``
times after it.  Only blocks in both are trusted by the estimator.
"""

from __future__ import annotations

from dataclasses import dataclass

from markov_order.counting import level_counter
from markov_order.sequence import SymbolsLike, as_symbols, split_index

# counts this close to the threshold are not "greater"
THRESHOLD_SLACK = 1e-9


@dataclass(frozen=True)
class SupportSet:
    k: int
    blocks: frozenset

    def __post_init__(self) -> None:
        if any(len(b) != self.k + 1 for b in self.blocks):
            raise ValueError(f"support blocks must have length {self.k + 1}")

    def __contains__(self, block) -> bool:
        return tuple(block) in self.blocks

    def __len__(self) -> int:
        return len(self.blocks)

    def __iter__(self):
        return iter(sorted(self.blocks))


def frequency_threshold(n: int, gamma: float) -> float:
    return float(n) ** (1.0 - gamma)


def exceeds(count: int, threshold: float) -> bool:
    return count > threshold + THRESHOLD_SLACK


def _prefix(seq: SymbolsLike, n: int) -> tuple[int, ...]:
    symbols = as_symbols(seq)
    if not 0 <= n < len(symbols):
        raise ValueError(f"n={n} outside sequence of length {len(symbols)}")
    return symbols[: n + 1]


def _check_gamma(gamma: float) -> None:
    if not 0.0 < gamma < 1.0:
        raise ValueError("gamma must lie in (0, 1)")


def first_half_blocks(symbols: tuple[int, ...], n: int, length: int) -> set:
    """Distinct ``length``-blocks inside ``X_0 .. X_{ceil(n/2)-1}``."""
    half = split_index(n)
    return set(level_counter(symbols, 0, half - 1, length)) if half > 0 else set()


def support_first_half(seq: SymbolsLike, n: int, k: int) -> SupportSet:
    if k < 0:
        raise ValueError("k must be non-negative")
    symbols = _prefix(seq, n)
    return SupportSet(k, frozenset(first_half_blocks(symbols, n, k + 1)))


def support_second_half(seq: SymbolsLike, n: int, k: int, gamma: float) -> SupportSet:
    if k < 0:
        raise ValueError("k must be non-negative")
    _check_gamma(gamma)
    symbols = _prefix(seq, n)
    threshold = frequency_threshold(n, gamma)
    counts = level_counter(symbols, split_index(n), n, k + 1)
    return SupportSet(k, frozenset(b for b, c in counts.items() if exceeds(c, threshold)))


def support_intersection(seq: SymbolsLike, n: int, k: int, gamma: float) -> SupportSet:
    first = support_first_half(seq, n, k)
    second = support_second_half(seq, n, k, gamma)
    return SupportSet(k, first.blocks & second.blocks)


def max_useful_length(seq: SymbolsLike, n: int, gamma: float) -> int:
    """Longest block length with some second-half count above the threshold.

    Returns 0 when not even a single symbol is frequent enough.  Because a
    block never outnumbers its suffix, every longer level is empty too.
    """
    _check_gamma(gamma)
    symbols = _prefix(seq, n)
    threshold = frequency_threshold(n, gamma)
    half = split_index(n)
    length = 0
    while True:
        counts = level_counter(symbols, half, n, length + 1)
        if not any(exceeds(c, threshold) for c in counts.values()):
            return length
        length += 1
