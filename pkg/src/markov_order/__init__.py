"""Order estimation for discrete-alphabet stationary processes.

The estimator splits a sample ``X_0 .. X_n`` at ``ceil(n/2)``, uses the first
half to decide which blocks exist and the second half to measure how much the
next-symbol conditional frequencies move when a context is lengthened.  The
estimated order is the shortest context length for which that movement stays
under ``n ** -beta``.
"""

from markov_order.counting import (
    Window,
    WindowCounts,
    build_counts,
    count_block,
    empirical_conditional,
    occurrence_positions,
)
from markov_order.estimator import (
    DeltaReport,
    EstimatorParams,
    brute_force_delta_hat,
    decide_markov_below,
    delta_hat,
    delta_profile,
    estimate_order,
)
from markov_order.generators import HmmSpec, sample_chain, sample_hmm, sample_iid
from markov_order.oracle import (
    ChainSpec,
    StationaryDist,
    conditional_prob,
    population_delta,
    stationary_distribution,
    true_order,
)
from markov_order.sequence import Alphabet, Sequence, ingest, split_index
from markov_order.support import (
    SupportSet,
    max_useful_length,
    support_first_half,
    support_intersection,
    support_second_half,
)

__all__ = [
    "Alphabet",
    "ChainSpec",
    "DeltaReport",
    "EstimatorParams",
    "HmmSpec",
    "Sequence",
    "StationaryDist",
    "SupportSet",
    "Window",
    "WindowCounts",
    "brute_force_delta_hat",
    "build_counts",
    "conditional_prob",
    "count_block",
    "decide_markov_below",
    "delta_hat",
    "delta_profile",
    "empirical_conditional",
    "estimate_order",
    "ingest",
    "max_useful_length",
    "occurrence_positions",
    "population_delta",
    "sample_chain",
    "sample_hmm",
    "sample_iid",
    "split_index",
    "stationary_distribution",
    "support_first_half",
    "support_intersection",
    "support_second_half",
    "true_order",
]
