import pytest

from markov_order import ChainSpec, stationary_distribution

ALT11 = [t % 2 for t in range(11)]
ALT41 = [t % 2 for t in range(41)]


@pytest.fixture
def alt11():
    return list(ALT11)


@pytest.fixture
def alt41():
    return list(ALT41)


@pytest.fixture(scope="session")
def order1_chain():
    spec = ChainSpec.from_rows([[0.9, 0.1], [0.2, 0.8]])
    return spec, stationary_distribution(spec)


@pytest.fixture(scope="session")
def order2_chain():
    # contexts 00, 01, 10, 11 (older symbol first)
    spec = ChainSpec.from_rows([[0.9, 0.1], [0.2, 0.8], [0.3, 0.7], [0.7, 0.3]], order=2)
    return spec, stationary_distribution(spec)
