"""scikit-learn surface of the DiscreteHMM estimator."""

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from maizecast.hmm import DiscreteHMM, forward, posteriors, viterbi
from maizecast.datasets import load_bundled_series
from maizecast.estimation import count_estimates, estimate_initial_params


@pytest.fixture(scope="module")
def fitted():
    series = load_bundled_series()
    init = estimate_initial_params(count_estimates(series)).params
    model = DiscreteHMM(
        n_states=4,
        n_symbols=3,
        transmat=init.transmat,
        emissionprob=init.emissionprob,
        n_iter=1000,
        tol=1e-6,
    )
    return model.fit(series.observations), series


def test_get_params_round_trip_and_clone():
    model = DiscreteHMM(n_states=3, n_symbols=2, n_iter=17, tol=1e-4)
    cloned = clone(model)
    assert cloned.get_params()["n_iter"] == 17
    assert cloned.get_params()["n_states"] == 3


def test_fit_exposes_trained_attributes(fitted):
    model, _ = fitted
    assert model.converged_
    assert model.n_iter_ >= 1
    assert model.transmat_.shape == (4, 4)
    assert model.emissionprob_.shape == (4, 3)
    trace = np.array(model.log_likelihoods_)
    assert np.all(np.diff(trace) >= -1e-8)


def test_score_decode_predict_match_functional_core(fitted):
    model, series = fitted
    obs = series.observations
    assert model.score(obs) == forward(model.params_, obs).log_likelihood
    path, log_prob = viterbi(model.params_, obs)
    got_log_prob, got_path = model.decode(obs)
    assert got_log_prob == log_prob
    np.testing.assert_array_equal(got_path, path)
    np.testing.assert_array_equal(model.predict(obs), path)
    np.testing.assert_array_equal(
        model.predict_proba(obs), posteriors(model.params_, obs).gamma
    )


def test_unfitted_estimator_raises():
    model = DiscreteHMM()
    with pytest.raises(NotFittedError):
        model.score([0, 1])
    with pytest.raises(NotFittedError):
        model.predict([0, 1])


def test_default_uniform_initialization_fits():
    rng = np.random.default_rng(1)
    obs = rng.integers(0, 2, size=40)
    model = DiscreteHMM(n_states=2, n_symbols=2, n_iter=20).fit(obs)
    assert model.transmat_.shape == (2, 2)
    assert np.isfinite(model.score(obs))


def test_estimator_forecast_delegates(fitted):
    model, _ = fitted
    result = model.forecast(last_state=3, horizon=2, start_year=2022)
    assert [s.year for s in result.states] == [2022, 2023]
