"""Seeded samplers for test processes.

All randomness comes from numpy's ``PCG64`` bit generator seeded with the
caller's 64-bit seed, consumed as a stream of doubles in ``[0, 1)``.  A symbol
is drawn by inverse CDF: the first index whose cumulative probability exceeds
the uniform.  PCG64 output is specified bit-for-bit, so samples are identical
across platforms for a given seed.
"""

from __future__ import annotations

import bisect
import itertools
import json
from dataclasses import dataclass

import numpy as np

from markov_order.oracle import (
    ROW_TOL,
    ChainSpec,
    SpecError,
    StationaryDist,
    power_iteration,
)
from markov_order.sequence import Alphabet, Sequence


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(int(seed) % 2**64))


def derived_seed(base_seed: int, replicate: int) -> int:
    """Seed of replicate ``r`` in a sweep."""
    return (base_seed + replicate) % 2**64


def _cdf(probs) -> np.ndarray:
    return np.cumsum(np.asarray(probs, dtype=float))


def _draw_many(cdf: np.ndarray, u: np.ndarray) -> np.ndarray:
    return np.minimum(np.searchsorted(cdf, u, side="right"), len(cdf) - 1)


def _draw(cdf: list, u: float) -> int:
    return min(bisect.bisect_right(cdf, u), len(cdf) - 1)


def sample_iid(dist, length: int, seed: int, alphabet: Alphabet | None = None) -> Sequence:
    dist = np.asarray(dist, dtype=float)
    if dist.ndim != 1 or dist.min() < 0 or abs(dist.sum() - 1.0) > ROW_TOL:
        raise ValueError("dist must be a probability vector")
    if length < 1:
        raise ValueError("length must be >= 1")
    rng = make_rng(seed)
    symbols = _draw_many(_cdf(dist), rng.random(length))
    return Sequence(tuple(symbols.tolist()), alphabet or Alphabet.of_size(len(dist)))


def sample_chain(spec: ChainSpec, pi: StationaryDist, length: int, seed: int) -> Sequence:
    """Stationary sample: the opening context is drawn from ``pi``, then each
    symbol from the row of the preceding ``K`` symbols."""
    if length < 1:
        raise ValueError("length must be >= 1")
    K, A = spec.order, spec.alphabet_size
    rng = make_rng(seed)
    if K == 0:
        symbols = _draw_many(_cdf(spec.transitions[()]), rng.random(length))
        return Sequence(tuple(symbols.tolist()), spec.alphabet)

    contexts = list(spec.contexts())  # lexicographic == base-A code order
    start = contexts[_draw(_cdf([pi[c] for c in contexts]).tolist(), rng.random())]
    symbols = list(start[:length])
    rows = [_cdf(spec.transitions[c]).tolist() for c in contexts]
    size = A**K
    code = 0
    for s in start:
        code = code * A + s
    for u in rng.random(max(length - K, 0)).tolist():
        x = _draw(rows[code], u)
        symbols.append(x)
        code = (code * A + x) % size
    return Sequence(tuple(symbols), spec.alphabet)


def is_primitive(P: np.ndarray) -> bool:
    """Irreducible and aperiodic: some power ``<= (H-1)^2 + 1`` is all positive."""
    H = P.shape[0]
    B = (P > 0).astype(np.int64)
    M = B.copy()
    for _ in range((H - 1) ** 2):
        M = np.minimum(M @ B, 1)
    return bool(M.all())


@dataclass(frozen=True)
class HmmSpec:
    hidden_transitions: np.ndarray  # H x H
    emissions: np.ndarray  # H x A
    alphabet: Alphabet | None = None

    def __post_init__(self) -> None:
        T = np.asarray(self.hidden_transitions, dtype=float)
        E = np.asarray(self.emissions, dtype=float)
        if T.ndim != 2 or T.shape[0] != T.shape[1] or T.shape[0] < 1:
            raise SpecError("hidden_transitions: must be a square matrix")
        if E.ndim != 2 or E.shape[0] != T.shape[0]:
            raise SpecError("emissions: must have one row per hidden state")
        for name, M in (("hidden_transitions", T), ("emissions", E)):
            if M.min() < 0 or np.abs(M.sum(axis=1) - 1.0).max() > ROW_TOL:
                raise SpecError(f"{name}: rows must be probability vectors")
        alphabet = self.alphabet or Alphabet.of_size(E.shape[1])
        if len(alphabet) != E.shape[1]:
            raise SpecError("alphabet: size must match emission columns")
        object.__setattr__(self, "hidden_transitions", T)
        object.__setattr__(self, "emissions", E)
        object.__setattr__(self, "alphabet", alphabet)

    @property
    def hidden_states(self) -> int:
        return self.hidden_transitions.shape[0]

    def hidden_stationary(self) -> np.ndarray:
        if not is_primitive(self.hidden_transitions):
            raise ValueError("hidden chain must be irreducible and aperiodic")
        return power_iteration(self.hidden_transitions)

    @classmethod
    def from_json(cls, data: dict) -> "HmmSpec":
        for key in ("hidden_transitions", "emissions", "alphabet"):
            if key not in data:
                raise SpecError(f"{key}: missing field")
        tokens = data["alphabet"]
        if not isinstance(tokens, list) or not all(isinstance(t, str) for t in tokens):
            raise SpecError("alphabet: must be an array of strings")
        try:
            alphabet = Alphabet(tuple(tokens))
            T = np.array(data["hidden_transitions"], dtype=float)
            E = np.array(data["emissions"], dtype=float)
        except ValueError as exc:
            raise SpecError(f"malformed HMM spec: {exc}") from None
        return cls(T, E, alphabet)

    def to_json(self) -> dict:
        return {
            "hidden_transitions": self.hidden_transitions.tolist(),
            "emissions": self.emissions.tolist(),
            "alphabet": list(self.alphabet.tokens),
        }


DEFAULT_HMM = HmmSpec(
    np.array([[0.9, 0.1], [0.1, 0.9]]),
    np.array([[0.8, 0.2], [0.3, 0.7]]),
)


def load_hmm_spec(path) -> HmmSpec:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SpecError(f"spec is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise SpecError("spec must be a JSON object")
    return HmmSpec.from_json(data)


def sample_hmm(spec: HmmSpec, length: int, seed: int, return_hidden: bool = False):
    """Observed symbols of a stationary hidden-Markov path.

    The hidden path uses the first ``length`` uniforms of the stream, the
    emissions the next ``length``.
    """
    if length < 1:
        raise ValueError("length must be >= 1")
    pi = spec.hidden_stationary()
    rng = make_rng(seed)
    u_hidden = rng.random(length).tolist()
    u_emit = rng.random(length)
    trans = [_cdf(row).tolist() for row in spec.hidden_transitions]
    state = _draw(_cdf(pi).tolist(), u_hidden[0])
    hidden = [state]
    for u in u_hidden[1:]:
        state = _draw(trans[state], u)
        hidden.append(state)
    hidden_arr = np.array(hidden)
    emit_cdf = np.cumsum(spec.emissions, axis=1)
    observed = (u_emit[:, None] >= emit_cdf[hidden_arr]).sum(axis=1)
    observed = np.minimum(observed, spec.emissions.shape[1] - 1)
    seq = Sequence(tuple(observed.tolist()), spec.alphabet)
    if return_hidden:
        return seq, tuple(hidden)
    return seq


def hmm_block_probability(spec: HmmSpec, block) -> float:
    """Stationary probability of observing ``block``, by the forward recursion."""
    alpha = spec.hidden_stationary()
    for j, x in enumerate(block):
        if j:
            alpha = alpha @ spec.hidden_transitions
        alpha = alpha * spec.emissions[:, x]
    return float(alpha.sum())


def hmm_population_delta(spec: HmmSpec, k: int, max_extension: int = 3) -> float:
    """Population deviation of the observed process, with extensions
    ``i = 1 .. max_extension`` (a lower bound on the full supremum)."""
    A = spec.emissions.shape[1]
    prob = {}

    def p(block: tuple) -> float:
        if block not in prob:
            prob[block] = hmm_block_probability(spec, block)
        return prob[block]

    best = 0.0
    for i in range(1, max_extension + 1):
        for z in itertools.product(range(A), repeat=k + i):
            pz = p(z)
            if pz <= 1e-15:
                continue
            short = z[len(z) - k :] if k else ()
            for x in range(A):
                pzx = p(z + (x,))
                if pzx <= 1e-15:
                    continue
                best = max(best, abs(p(short + (x,)) / p(short) - pzx / pz))
    return best
