"""Exact population quantities for explicitly specified finite-order chains.

A :class:`ChainSpec` of order ``K`` is a table from each length-``K`` context
to a next-symbol distribution.  Its stationary law lives on contexts; block
probabilities, conditionals and the population deviation ``Delta_k`` are all
derived from it exactly (up to floating point).
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

import numpy as np

from markov_order.sequence import Alphabet

ROW_TOL = 1e-9
SUPPORT_EPS = 1e-15
POWER_TOL = 1e-12
POWER_MAX_ITER = 1_000_000


class SpecError(ValueError):
    """A chain or HMM spec failed validation."""


@dataclass(frozen=True)
class ChainSpec:
    order: int
    alphabet_size: int
    transitions: dict  # context tuple -> tuple of probabilities
    alphabet: Alphabet | None = None

    def __post_init__(self) -> None:
        if self.order < 0:
            raise SpecError("order: must be >= 0")
        if self.alphabet_size < 1:
            raise SpecError("alphabet: must contain at least one symbol")
        if self.alphabet is None:
            object.__setattr__(self, "alphabet", Alphabet.of_size(self.alphabet_size))
        elif len(self.alphabet) != self.alphabet_size:
            raise SpecError("alphabet: size does not match alphabet_size")
        rows = {}
        for ctx in self.contexts():
            if ctx not in self.transitions:
                raise SpecError(f"transitions: missing context {ctx}")
            row = tuple(float(p) for p in self.transitions[ctx])
            if len(row) != self.alphabet_size:
                raise SpecError(f"transitions: row {ctx} has {len(row)} entries, expected {self.alphabet_size}")
            if min(row) < 0.0 or abs(sum(row) - 1.0) > ROW_TOL:
                raise SpecError(f"transitions: row {ctx} is not a probability vector")
            rows[ctx] = row
        extra = set(self.transitions) - set(rows)
        if extra:
            raise SpecError(f"transitions: unexpected contexts {sorted(extra)}")
        object.__setattr__(self, "transitions", rows)

    def contexts(self):
        return itertools.product(range(self.alphabet_size), repeat=self.order)

    def row(self, context: tuple) -> tuple:
        """Next-symbol law after ``context``; only its last ``order`` symbols matter."""
        return self.transitions[tuple(context[len(context) - self.order :]) if self.order else ()]

    @classmethod
    def from_rows(cls, rows, order: int = 1) -> "ChainSpec":
        """Rows listed in lexicographic context order."""
        rows = [tuple(r) for r in rows]
        size = len(rows[0])
        contexts = list(itertools.product(range(size), repeat=order))
        if len(contexts) != len(rows):
            raise SpecError(f"transitions: expected {len(contexts)} rows, got {len(rows)}")
        return cls(order, size, dict(zip(contexts, rows)))

    @classmethod
    def from_json(cls, data: dict) -> "ChainSpec":
        for key in ("order", "alphabet", "transitions"):
            if key not in data:
                raise SpecError(f"{key}: missing field")
        order = data["order"]
        if not isinstance(order, int) or isinstance(order, bool):
            raise SpecError("order: must be an integer")
        tokens = data["alphabet"]
        if not isinstance(tokens, list) or not all(isinstance(t, str) for t in tokens):
            raise SpecError("alphabet: must be an array of strings")
        try:
            alphabet = Alphabet(tuple(tokens))
        except ValueError as exc:
            raise SpecError(f"alphabet: {exc}") from None
        raw = data["transitions"]
        if not isinstance(raw, dict):
            raise SpecError("transitions: must be an object")
        table = {}
        for key, row in raw.items():
            parts = key.split(",") if key else []
            if any(p not in alphabet.lookup for p in parts):
                raise SpecError(f"transitions: context {key!r} uses unknown tokens")
            if len(parts) != order:
                raise SpecError(f"transitions: context {key!r} must have {order} tokens")
            if not isinstance(row, list) or not all(
                isinstance(p, (int, float)) and not isinstance(p, bool) for p in row
            ):
                raise SpecError(f"transitions: row {key!r} must be an array of numbers")
            table[alphabet.encode(parts)] = row
        return cls(order, len(alphabet), table, alphabet)

    def to_json(self) -> dict:
        tokens = self.alphabet.tokens
        return {
            "order": self.order,
            "alphabet": list(tokens),
            "transitions": {
                ",".join(tokens[s] for s in ctx): list(row) for ctx, row in self.transitions.items()
            },
        }


def load_chain_spec(path) -> ChainSpec:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SpecError(f"spec is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise SpecError("spec must be a JSON object")
    return ChainSpec.from_json(data)


@dataclass(frozen=True)
class StationaryDist:
    order: int
    alphabet_size: int
    pi: dict = field(repr=False)  # context tuple -> probability

    def __getitem__(self, context) -> float:
        return self.pi[tuple(context)]


def power_iteration(P: np.ndarray, tol: float = POWER_TOL, max_iter: int = POWER_MAX_ITER) -> np.ndarray:
    """Stationary row vector of the stochastic matrix ``P``, starting from uniform.

    Stops once successive iterates are within ``tol`` in total variation.
    """
    dist = np.full(P.shape[0], 1.0 / P.shape[0])
    for _ in range(max_iter):
        nxt = dist @ P
        nxt /= nxt.sum()
        if 0.5 * np.abs(nxt - dist).sum() < tol:
            return nxt
        dist = nxt
    raise ValueError("chain may be periodic or reducible")


def recurrent_states(P: np.ndarray) -> np.ndarray:
    """Mask of states reachable from every state (the closed class, when unique)."""
    R = ((P > 0) | np.eye(P.shape[0], dtype=bool)).astype(np.int64)
    for _ in range(max(1, int(np.ceil(np.log2(P.shape[0]))))):
        R = np.minimum(R @ R, 1)
    return R.all(axis=0)


def context_matrix(spec: ChainSpec, lazy: bool = False) -> tuple[list, np.ndarray]:
    """Transition matrix of the induced chain on length-``K`` contexts."""
    contexts = list(spec.contexts())
    index = {c: i for i, c in enumerate(contexts)}
    P = np.zeros((len(contexts), len(contexts)))
    for c in contexts:
        for x, p in enumerate(spec.transitions[c]):
            P[index[c], index[(c + (x,))[1:]]] += p
    if lazy:
        P = 0.5 * (P + np.eye(len(contexts)))
    return contexts, P


def stationary_distribution(spec: ChainSpec, lazy: bool = False) -> StationaryDist:
    """Stationary law on contexts by power iteration.

    ``lazy=True`` iterates ``(I + P) / 2`` instead, which has the same fixed
    points but cannot oscillate; use it as a retry for periodic chains.
    """
    if spec.order == 0:
        return StationaryDist(0, spec.alphabet_size, {(): 1.0})
    contexts, P = context_matrix(spec, lazy)
    dist = power_iteration(P)
    # transient contexts keep ~POWER_TOL of mass; zero them exactly
    recurrent = recurrent_states(P)
    if not recurrent.any():  # several closed classes: no unique stationary law
        raise ValueError("chain may be periodic or reducible")
    dist = np.where(recurrent, dist, 0.0)
    dist /= dist.sum()
    return StationaryDist(spec.order, spec.alphabet_size, dict(zip(contexts, dist.tolist())))


def block_probability(spec: ChainSpec, pi: StationaryDist, block) -> float:
    """Stationary probability ``P(X_{-m+1..0} = block)``."""
    block = tuple(block)
    K = spec.order
    if len(block) <= K:
        m = len(block)
        return sum(p for c, p in pi.pi.items() if c[K - m :] == block)
    prob = pi[block[:K]]
    for t in range(K, len(block)):
        if prob == 0.0:
            break
        prob *= spec.row(block[:t])[block[t]]
    return prob


def conditional_prob(spec: ChainSpec, pi: StationaryDist, context, x: int) -> float:
    """``P(X_1 = x | X_{-m+1..0} = context)`` under the stationary law."""
    context = tuple(context)
    K = spec.order
    if block_probability(spec, pi, context) <= SUPPORT_EPS:
        raise ValueError(f"context outside support S_{len(context)}")
    if len(context) >= K:
        return spec.row(context)[x]
    m = len(context)
    num = den = 0.0
    for c, p in pi.pi.items():
        if c[K - m :] == context:
            num += p * spec.transitions[c][x]
            den += p
    return num / den


def population_delta(spec: ChainSpec, pi: StationaryDist, k: int) -> float:
    """Largest shift of the next-symbol law when a length-``k`` context is
    extended, over all extensions with positive probability.

    Extending past ``K`` symbols changes nothing, so ``i`` only needs to run
    to ``K - k``; the result is 0 whenever ``k >= K``.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    K = spec.order
    if k >= K:
        return 0.0
    A = spec.alphabet_size
    best = 0.0
    for i in range(1, K - k + 1):
        for z in itertools.product(range(A), repeat=k + i):
            if block_probability(spec, pi, z) <= SUPPORT_EPS:
                continue
            short = z[len(z) - k :] if k else ()
            for x in range(A):
                if block_probability(spec, pi, z + (x,)) <= SUPPORT_EPS:
                    continue
                diff = abs(conditional_prob(spec, pi, short, x) - conditional_prob(spec, pi, z, x))
                best = max(best, diff)
    return best


def true_order(spec: ChainSpec, pi: StationaryDist, tol: float = 1e-12) -> int:
    for k in range(spec.order + 1):
        if population_delta(spec, pi, k) <= tol:
            return k
    return spec.order
