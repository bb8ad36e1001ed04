import numpy as np
import pytest

from maizecast.hmm import HmmParams


@pytest.fixture
def two_state() -> HmmParams:
    """Small worked example used across the inference tests."""
    return HmmParams(
        startprob=[0.5, 0.5],
        transmat=[[0.9, 0.1], [0.2, 0.8]],
        emissionprob=[[0.7, 0.3], [0.1, 0.9]],
    )


@pytest.fixture
def single_state() -> HmmParams:
    return HmmParams(startprob=[1.0], transmat=[[1.0]], emissionprob=[[0.5, 0.5]])


def random_model(rng: np.random.Generator, n_states: int, n_symbols: int) -> HmmParams:
    """Random fully-positive model with normalized rows."""

    def rows(shape):
        raw = rng.uniform(0.05, 1.0, size=shape)
        return raw / raw.sum(axis=-1, keepdims=True)

    return HmmParams(rows(n_states), rows((n_states, n_states)), rows((n_states, n_symbols)))


def enumerate_paths(params: HmmParams, obs) -> tuple[np.ndarray, np.ndarray]:
    """All hidden-state paths and their joint probabilities with ``obs``.

    Independent oracle for Viterbi: vectorized literal evaluation of the
    joint probability of every path, in lexicographic path order.
    """
    seq = np.asarray(obs, dtype=np.intp)
    n, t = params.n_states, seq.shape[0]
    paths = np.indices((n,) * t).reshape(t, -1).T
    probs = params.startprob[paths[:, 0]] * params.emissionprob[paths[:, 0], seq[0]]
    for step in range(1, t):
        probs = probs * params.transmat[paths[:, step - 1], paths[:, step]]
        probs = probs * params.emissionprob[paths[:, step], seq[step]]
    return paths, probs
