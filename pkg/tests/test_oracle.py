import itertools
import json

import numpy as np
import pytest

from markov_order.oracle import (
    ChainSpec,
    SpecError,
    block_probability,
    conditional_prob,
    context_matrix,
    load_chain_spec,
    population_delta,
    stationary_distribution,
    true_order,
)


def random_spec(rng, true_k, declared_k, A):
    """Order-``true_k`` chain written out as an order-``declared_k`` table."""
    base = {c: rng.dirichlet(np.ones(A)) for c in itertools.product(range(A), repeat=true_k)}
    table = {
        c: tuple(base[c[declared_k - true_k :]])
        for c in itertools.product(range(A), repeat=declared_k)
    }
    return ChainSpec(declared_k, A, table)


def test_stationary_examples(order1_chain):
    pi = stationary_distribution(ChainSpec.from_rows([[0.5, 0.5], [0.5, 0.5]]))
    assert pi[(0,)] == pytest.approx(0.5, abs=1e-12)
    _, pi = order1_chain
    assert pi[(0,)] == pytest.approx(2 / 3, abs=1e-10)
    assert pi[(1,)] == pytest.approx(1 / 3, abs=1e-10)
    iid = ChainSpec(0, 3, {(): (0.2, 0.3, 0.5)})
    assert stationary_distribution(iid).pi == {(): 1.0}


def test_stationary_is_invariant(order2_chain):
    spec, pi = order2_chain
    contexts, P = context_matrix(spec)
    v = np.array([pi[c] for c in contexts])
    assert np.abs(v @ P - v).sum() < 1e-9
    assert abs(v.sum() - 1) < 1e-9


def test_periodic_chain_raises_and_lazy_retry_works():
    # period 2, stationary (1/4, 1/2, 1/4): iterates from uniform oscillate
    spec = ChainSpec.from_rows([[0.0, 1.0, 0.0], [0.5, 0.0, 0.5], [0.0, 1.0, 0.0]])
    with pytest.raises(ValueError, match="periodic or reducible"):
        stationary_distribution(spec)
    pi = stationary_distribution(spec, lazy=True)
    assert [pi[(s,)] for s in range(3)] == pytest.approx([0.25, 0.5, 0.25])


def test_two_closed_classes_rejected():
    spec = ChainSpec.from_rows([[1.0, 0.0], [0.0, 1.0]])
    with pytest.raises(ValueError, match="periodic or reducible"):
        stationary_distribution(spec)


def test_transient_context_has_zero_mass():
    spec = ChainSpec.from_rows([[1.0, 0.0], [0.5, 0.5]])
    assert stationary_distribution(spec).pi == {(0,): 1.0, (1,): 0.0}


def test_conditional_examples(order1_chain):
    spec, pi = order1_chain
    assert conditional_prob(spec, pi, (0,), 1) == 0.1
    assert conditional_prob(spec, pi, (), 1) == pytest.approx(1 / 3, abs=1e-10)
    assert conditional_prob(spec, pi, (1, 0), 1) == 0.1


def test_conditional_outside_support():
    spec = ChainSpec.from_rows([[1.0, 0.0], [0.5, 0.5]])
    pi = stationary_distribution(spec)
    with pytest.raises(ValueError, match="outside support"):
        conditional_prob(spec, pi, (1,), 0)


def test_population_delta_examples(order1_chain):
    spec, pi = order1_chain
    # max(|1/3-0.1|, |1/3-0.8|, |2/3-0.9|, |2/3-0.2|)
    hand = max(abs(1 / 3 - 0.1), abs(1 / 3 - 0.8), abs(2 / 3 - 0.9), abs(2 / 3 - 0.2))
    assert hand == pytest.approx(7 / 15)
    assert population_delta(spec, pi, 0) == pytest.approx(7 / 15, abs=1e-10)
    assert population_delta(spec, pi, 1) == 0.0
    assert population_delta(spec, pi, 4) == 0.0
    iid = ChainSpec(0, 2, {(): (0.3, 0.7)})
    assert population_delta(iid, stationary_distribution(iid), 2) == 0.0


def test_true_order_examples(order1_chain):
    spec, pi = order1_chain
    assert true_order(spec, pi) == 1
    redundant = ChainSpec.from_rows([[0.9, 0.1], [0.2, 0.8], [0.9, 0.1], [0.2, 0.8]], order=2)
    assert true_order(redundant, stationary_distribution(redundant)) == 1
    flat = ChainSpec.from_rows([[0.4, 0.6], [0.4, 0.6]])
    assert true_order(flat, stationary_distribution(flat)) == 0


def test_order2_chain_has_true_order_two(order2_chain):
    spec, pi = order2_chain
    assert true_order(spec, pi) == 2
    assert population_delta(spec, pi, 1) > 0.4


def test_randomized_properties():
    rng = np.random.default_rng(11)
    for _ in range(10):
        A = int(rng.integers(2, 4))
        declared = int(rng.integers(0, 4))
        true_k = int(rng.integers(0, declared + 1))
        spec = random_spec(rng, true_k, declared, A)
        pi = stationary_distribution(spec)
        assert true_order(spec, pi) == true_k
        for k in range(declared + 2):
            d = population_delta(spec, pi, k)
            assert (d <= 1e-12) == (k >= true_k)
        for m in range(declared + 2):
            for ctx in itertools.product(range(A), repeat=m):
                if block_probability(spec, pi, ctx) > 1e-15:
                    total = sum(conditional_prob(spec, pi, ctx, x) for x in range(A))
                    assert abs(total - 1) < 1e-11
                    for j in range(m):
                        assert block_probability(spec, pi, ctx[j:]) > 0


def test_chain_spec_json_round_trip(tmp_path, order2_chain):
    spec, _ = order2_chain
    path = tmp_path / "chain.json"
    path.write_text(json.dumps(spec.to_json()))
    loaded = load_chain_spec(path)
    assert loaded.transitions == spec.transitions
    assert loaded.order == 2


def test_chain_spec_json_order0(tmp_path):
    path = tmp_path / "iid.json"
    path.write_text(json.dumps({"order": 0, "alphabet": ["a", "b"], "transitions": {"": [0.5, 0.5]}}))
    assert load_chain_spec(path).transitions == {(): (0.5, 0.5)}


@pytest.mark.parametrize(
    "data, field",
    [
        ({"alphabet": ["a"], "transitions": {"": [1.0]}}, "order"),
        ({"order": 1, "alphabet": ["a", "b"], "transitions": {"a": [0.5, 0.5]}}, "transitions"),
        ({"order": 1, "alphabet": ["a", "b"], "transitions": {"a": [0.5, 0.6], "b": [1, 0]}}, "transitions"),
        ({"order": 1, "alphabet": ["a", "b"], "transitions": {"a": [1, 0], "c": [1, 0]}}, "transitions"),
        ({"order": 0, "alphabet": "ab", "transitions": {"": [1.0]}}, "alphabet"),
    ],
)
def test_chain_spec_json_errors(data, field):
    with pytest.raises(SpecError, match=field):
        ChainSpec.from_json(data)
