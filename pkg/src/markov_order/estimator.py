"""Deviation statistic and the order estimate built on it."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from markov_order.counting import ratio
from markov_order.sequence import SymbolsLike, as_symbols, split_index
from markov_order.support import THRESHOLD_SLACK, exceeds, frequency_threshold

DEFAULT_GAMMA = 0.5
DEFAULT_BETA = 0.2


@dataclass(frozen=True)
class EstimatorParams:
    """``gamma`` sets the frequency floor ``n**(1-gamma)``, ``beta`` the
    acceptance threshold ``n**-beta``.  Requires ``2*beta + gamma < 1``."""

    gamma: float = DEFAULT_GAMMA
    beta: float = DEFAULT_BETA

    def __post_init__(self) -> None:
        if not 0.0 < self.gamma < 1.0:
            raise ValueError("gamma must satisfy 0 < γ < 1")
        if not self.beta > 0.0:
            raise ValueError("beta must satisfy β > 0")
        if not 2.0 * self.beta + self.gamma < 1.0:
            raise ValueError("2β+γ must be < 1")


@dataclass(frozen=True)
class DeltaReport:
    n: int
    params: EstimatorParams
    threshold: float
    per_k: list = field(default_factory=list)  # [(k, delta_hat), ...]
    chi: int = 0
    max_length: int = 0


class _Tables:
    """Second-half counts and first-half block sets up to the pruning depth.

    Everything :func:`delta_hat` needs for one ``(seq, n, gamma)``; building it
    once lets ``estimate_order`` scan ``k = 0, 1, ...`` without recounting.
    """

    def __init__(self, symbols: tuple[int, ...], n: int, gamma: float):
        self.n = n
        self.half = half = split_index(n)
        self.symbols = symbols
        threshold = frequency_threshold(n, gamma)
        # counts[L] covers window [half, n]; counts[0] is unused.  A block can
        # only be frequent if its suffix is, so level L is counted only at end
        # positions whose (L-1)-block was frequent.  Counts of frequent blocks
        # (all that delta() ever reads) stay exact.
        self.counts: list[Counter] = [Counter()]
        self.members: list[list] = [[]]  # blocks of S^n at each length
        later = list(range(half, n + 1))
        earlier = list(range(0, half))
        length = 1
        while True:
            later = [(t, symbols[t - length + 1 : t + 1]) for t in later if t - length + 1 >= half]
            level = Counter(b for _, b in later)
            frequent = {b for b, c in level.items() if exceeds(c, threshold)}
            if not frequent:
                break
            earlier = [
                (t, b)
                for t in earlier
                if t - length + 1 >= 0 and (b := symbols[t - length + 1 : t + 1]) in frequent
            ]
            seen = {b for _, b in earlier}
            self.counts.append(level)
            self.members.append(sorted(frequent & seen))
            later = [t for t, b in later if b in frequent]
            earlier = [t for t, _ in earlier]
            length += 1
        self.max_length = len(self.counts) - 1

    def context_count(self, context: tuple) -> int:
        """Occurrences of ``context`` ending in ``[half + m - 1, n - 1]``."""
        m = len(context)
        if m == 0:
            return self.n - self.half + 1
        c = self.counts[m][context]
        if self.symbols[self.n - m + 1 : self.n + 1] == context:
            c -= 1
        return c

    def conditional(self, context: tuple, x: int) -> float:
        return ratio(self.counts[len(context) + 1][context + (x,)], self.context_count(context))

    def delta(self, k: int) -> float:
        best = 0.0
        # levels beyond max_length have empty S^n
        for length in range(k + 2, self.max_length + 1):
            for block in self.members[length]:
                z, x = block[:-1], block[-1]
                short = self.conditional(z[len(z) - k :], x)
                long = self.conditional(z, x)
                best = max(best, abs(short - long))
        return best


def _tables(seq: SymbolsLike, n: int, gamma: float) -> _Tables:
    symbols = as_symbols(seq)
    if not 1 <= n < len(symbols):
        raise ValueError(f"n={n} must satisfy 1 <= n <= {len(symbols) - 1}")
    if not 0.0 < gamma < 1.0:
        raise ValueError("gamma must satisfy 0 < γ < 1")
    return _Tables(symbols[: n + 1], n, gamma)


def delta_hat(seq: SymbolsLike, n: int, k: int, gamma: float) -> float:
    """Largest change of an empirical next-symbol frequency when a length-``k``
    context is extended to any longer context trusted by both halves."""
    if not 0 <= k < n:
        raise ValueError("k must satisfy 0 <= k < n")
    return _tables(seq, n, gamma).delta(k)


def brute_force_delta_hat(seq: SymbolsLike, n: int, k: int, gamma: float) -> float:
    """Reference for :func:`delta_hat`: every extension ``i = 1 .. n``, no pruning,
    conditionals counted straight from their index ranges."""
    symbols = as_symbols(seq)[: n + 1]
    half = (n + 1) // 2
    threshold = float(n) ** (1.0 - gamma)

    def occurrences(lo: int, hi: int, block: tuple) -> int:
        m = len(block) - 1
        return sum(1 for t in range(lo, hi + 1) if symbols[t - m : t + 1] == block)

    def conditional(context: tuple, x: int) -> float:
        m = len(context)
        num = occurrences(half + m, n, context + (x,))
        if m:
            den = occurrences(half + m - 1, n - 1, context)
        else:
            den = n - half + 1
        return num / den if den else 0.0

    best = 0.0
    for i in range(1, n + 1):
        length = k + i + 1
        later = Counter(
            tuple(symbols[t - length + 1 : t + 1]) for t in range(half + length - 1, n + 1)
        )
        earlier = {tuple(symbols[t - length + 1 : t + 1]) for t in range(length - 1, half)}
        for block, c in later.items():
            if not (c > threshold + THRESHOLD_SLACK and block in earlier):
                continue
            z, x = block[:-1], block[-1]
            short = conditional(z[len(z) - k :] if k else (), x)
            best = max(best, abs(short - conditional(z, x)))
    return best


def estimate_order(seq: SymbolsLike, params: EstimatorParams | None = None) -> DeltaReport:
    """Smallest ``k`` whose deviation is at most ``n**-beta``."""
    params = params or EstimatorParams()
    symbols = as_symbols(seq)
    if not symbols:
        raise ValueError("empty sequence")
    n = len(symbols) - 1
    if n == 0:
        return DeltaReport(0, params, 1.0, [], 0, 0)
    threshold = float(n) ** -params.beta
    tables = _Tables(symbols, n, params.gamma)
    per_k = []
    for k in range(n):
        value = tables.delta(k)
        per_k.append((k, value))
        if value <= threshold:
            return DeltaReport(n, params, threshold, per_k, k, tables.max_length)
    raise AssertionError("no admissible order found")  # unreachable: delta is 0 past max_length


def delta_profile(seq: SymbolsLike, params: EstimatorParams, k_max: int) -> DeltaReport:
    """Like :func:`estimate_order` but records every ``k = 0 .. k_max``."""
    symbols = as_symbols(seq)
    n = len(symbols) - 1
    if k_max < 0:
        raise ValueError("k_max must be >= 0")
    if n == 0:
        return DeltaReport(0, params, 1.0, [(k, 0.0) for k in range(k_max + 1)], 0, 0)
    threshold = float(n) ** -params.beta
    tables = _Tables(symbols, n, params.gamma)
    per_k = [(k, tables.delta(k)) for k in range(k_max + 1)]
    chi = next((k for k, v in per_k if v <= threshold), None)
    if chi is None:
        chi = estimate_order(symbols, params).chi
    return DeltaReport(n, params, threshold, per_k, chi, tables.max_length)


def decide_markov_below(seq: SymbolsLike, params: EstimatorParams, M: int) -> bool:
    """True (YES) when the estimated order is below ``M``."""
    if M <= 0:
        raise ValueError("M must be positive")
    return estimate_order(seq, params).chi < M
