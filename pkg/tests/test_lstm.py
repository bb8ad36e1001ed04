"""LSTM cell, gradient, optimizer and training-loop tests."""

import math

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from maizecast.exceptions import ConfigError, InputDataError, NumericError
from maizecast.lstm import (
    AdamState,
    LstmConfig,
    LstmParams,
    LstmRegressor,
    LstmState,
    adam_update,
    backprop,
    cell_step,
    forward_sequence,
    init_params,
    loss_mse,
    make_supervised,
    train,
    train_on_values,
)


def zero_params(hidden=1, inputs=1, dense=None):
    dense_w = None if dense is None else np.zeros((dense, hidden))
    dense_b = None if dense is None else np.zeros(dense)
    head = hidden if dense is None else dense
    return LstmParams(
        W=np.zeros((4, hidden, inputs)),
        R=np.zeros((4, hidden, hidden)),
        b=np.zeros((4, hidden)),
        out_w=np.zeros(head),
        out_b=0.0,
        dense_w=dense_w,
        dense_b=dense_b,
    )


def finite_difference_gradients(params, window, target, h=1e-5):
    theta = params.to_vector()
    grads = np.zeros_like(theta)
    for k in range(theta.size):
        up, down = theta.copy(), theta.copy()
        up[k] += h
        down[k] -= h
        f_up = (forward_sequence(LstmParams.from_vector(up, params), window)[0] - target) ** 2
        f_down = (forward_sequence(LstmParams.from_vector(down, params), window)[0] - target) ** 2
        grads[k] = (f_up - f_down) / (2.0 * h)
    return grads


class TestInitParams:
    def test_same_seed_bit_identical(self):
        config = LstmConfig(hidden_size=5, input_size=2, window_length=3, seed=7)
        a, b = init_params(config), init_params(config)
        np.testing.assert_array_equal(a.to_vector(), b.to_vector())

    def test_block_shapes(self):
        params = init_params(LstmConfig(hidden_size=32, input_size=1, window_length=4))
        assert params.W.shape == (4, 32, 1)
        assert params.R.shape == (4, 32, 32)
        assert params.b.shape == (4, 32)

    def test_forget_bias_ones_other_biases_zero(self):
        params = init_params(LstmConfig(hidden_size=6, input_size=1, window_length=2))
        np.testing.assert_array_equal(params.b[1], np.ones(6))
        np.testing.assert_array_equal(params.b[[0, 2, 3]], np.zeros((3, 6)))

    def test_weight_scale_bound(self):
        params = init_params(LstmConfig(hidden_size=16, input_size=3, window_length=2, seed=1))
        bound = 1.0 / math.sqrt(16)
        assert np.abs(params.W).max() <= bound
        assert np.abs(params.R).max() <= bound


class TestCellStep:
    def test_all_zero_parameters(self):
        state, gates = cell_step(zero_params(), LstmState.zero(1), [0.0])
        assert gates.i[0] == gates.f[0] == gates.o[0] == 0.5
        assert gates.g[0] == 0.0
        assert state.c[0] == 0.0 and state.h[0] == 0.0

    def test_scalar_hand_evaluation(self):
        w = np.zeros((4, 1, 1))
        w[2, 0, 0] = 1.0  # candidate gate sees the input directly
        params = LstmParams(W=w, R=np.zeros((4, 1, 1)), b=np.zeros((4, 1)), out_w=np.ones(1), out_b=0.0)
        state, gates = cell_step(params, LstmState.zero(1), [1.0])
        assert gates.g[0] == pytest.approx(math.tanh(1.0), rel=1e-15)
        assert gates.i[0] == 0.5
        assert state.c[0] == pytest.approx(0.5 * math.tanh(1.0), rel=1e-15)
        assert state.h[0] == pytest.approx(0.5 * math.tanh(0.5 * math.tanh(1.0)), rel=1e-15)

    def test_hidden_state_bounded(self):
        rng = np.random.default_rng(3)
        config = LstmConfig(hidden_size=4, input_size=2, window_length=1, seed=5)
        params = init_params(config)
        state = LstmState.zero(4)
        for _ in range(50):
            state, _ = cell_step(params, state, rng.uniform(-100, 100, size=2))
            assert np.all(np.abs(state.h) < 1.0)

    def test_non_finite_input_rejected(self):
        with pytest.raises(NumericError):
            cell_step(zero_params(), LstmState.zero(1), [np.nan])


class TestForwardSequence:
    def test_zero_weights_predict_bias(self):
        params = zero_params(hidden=3, inputs=1)
        params = LstmParams(
            W=params.W, R=params.R, b=params.b, out_w=params.out_w, out_b=2.5
        )
        pred, _ = forward_sequence(params, [[0.1], [0.9], [0.4]])
        assert pred == 2.5

    def test_single_step_equals_cell_plus_head(self):
        config = LstmConfig(hidden_size=3, input_size=2, window_length=1, seed=9)
        params = init_params(config)
        x = np.array([0.3, 0.7])
        state, _ = cell_step(params, LstmState.zero(3), x)
        expected = float(params.out_w @ state.h + params.out_b)
        pred, _ = forward_sequence(params, x[None, :])
        assert pred == pytest.approx(expected, rel=1e-15)

    def test_wrong_window_length_rejected(self):
        params = init_params(LstmConfig(hidden_size=2, input_size=1, window_length=3))
        with pytest.raises(ConfigError, match="steps"):
            forward_sequence(params, [[0.1], [0.2]], expected_length=3)

    def test_wrong_feature_count_rejected(self):
        params = init_params(LstmConfig(hidden_size=2, input_size=2, window_length=2))
        with pytest.raises(ConfigError):
            forward_sequence(params, [[0.1], [0.2]])

    def test_deterministic(self):
        config = LstmConfig(hidden_size=4, input_size=1, window_length=5, seed=21)
        params = init_params(config)
        window = np.linspace(0, 1, 5)[:, None]
        assert forward_sequence(params, window)[0] == forward_sequence(params, window)[0]


class TestLossMse:
    def test_identical_vectors(self):
        assert loss_mse([1.0, 2.0, 3.0], [1.0, 2.0, 3.0]) == 0.0

    def test_hand_value(self):
        assert loss_mse([0.0, 0.0], [1.0, 3.0]) == 5.0

    def test_residual_scaling_is_quadratic(self):
        base = loss_mse([0.0, 0.0], [1.0, 2.0])
        scaled = loss_mse([0.0, 0.0], [3.0, 6.0])
        assert scaled == pytest.approx(9.0 * base, rel=1e-12)

    def test_length_mismatch(self):
        with pytest.raises(InputDataError):
            loss_mse([1.0], [1.0, 2.0])


class TestBackprop:
    def test_zero_residual_zero_gradient(self):
        config = LstmConfig(hidden_size=3, input_size=1, window_length=2, seed=2)
        params = init_params(config)
        window = np.array([[0.2], [0.8]])
        pred, cache = forward_sequence(params, window)
        grads = backprop(params, cache, pred)
        np.testing.assert_array_equal(grads.to_vector(), 0.0)

    def test_output_bias_gradient_is_twice_residual(self):
        config = LstmConfig(hidden_size=2, input_size=1, window_length=2, seed=4)
        params = init_params(config)
        pred, cache = forward_sequence(params, [[0.1], [0.5]])
        grads = backprop(params, cache, pred - 1.5)
        assert grads.out_b == pytest.approx(2.0 * 1.5, rel=1e-12)

    @pytest.mark.parametrize("dense_size", [None, 3])
    def test_matches_finite_differences(self, dense_size):
        rng = np.random.default_rng(17)
        config = LstmConfig(
            hidden_size=4, input_size=2, window_length=3, seed=8, dense_size=dense_size
        )
        params = init_params(config)
        window = rng.uniform(0, 1, size=(3, 2))
        target = 0.4
        _, cache = forward_sequence(params, window)
        analytic = backprop(params, cache, target).to_vector()
        numeric = finite_difference_gradients(params, window, target)
        err = np.abs(analytic - numeric)
        tol = 1e-4 * np.maximum(np.abs(analytic), np.abs(numeric)) + 1e-8
        assert np.all(err <= tol)


class TestAdamUpdate:
    def test_zero_gradient_leaves_parameters(self):
        config = LstmConfig(hidden_size=2, input_size=1, window_length=1, seed=0)
        params = init_params(config)
        grads = LstmParams.zeros_like(params)
        updated, state = adam_update(params, grads, AdamState.for_params(params), config)
        np.testing.assert_array_equal(updated.to_vector(), params.to_vector())
        assert state.step == 1

    def test_first_step_magnitude(self):
        config = LstmConfig(hidden_size=1, input_size=1, window_length=1, learning_rate=1e-3)
        params = zero_params()
        grads = LstmParams.from_vector(np.full(params.to_vector().size, 2.0), params)
        updated, _ = adam_update(params, grads, AdamState.for_params(params), config)
        delta = updated.to_vector() - params.to_vector()
        np.testing.assert_allclose(delta, -1e-3 * 2.0 / (2.0 + 1e-8), rtol=1e-9)

    def test_update_opposes_gradient_sign(self):
        config = LstmConfig(hidden_size=1, input_size=1, window_length=1)
        params = zero_params()
        vec = np.linspace(-2, 2, params.to_vector().size)
        vec[vec == 0] = 0.5
        grads = LstmParams.from_vector(vec, params)
        updated, _ = adam_update(params, grads, AdamState.for_params(params), config)
        delta = updated.to_vector() - params.to_vector()
        assert np.all(np.sign(delta) == -np.sign(vec))


class TestTrain:
    def test_split_rule_floor(self):
        values = np.linspace(0, 1, 32)
        samples = make_supervised(values, 4)
        assert len(samples) == 28
        config = LstmConfig(hidden_size=2, input_size=1, window_length=4, epochs=1, seed=0)
        report = train(samples, config)
        assert report.n_train == 22
        assert report.n_test == 6
        assert len(report.train_losses) == 1
        assert len(report.val_losses) == 1

    def test_constant_target_converges_to_bias(self):
        samples = [(np.zeros((2, 1)), 0.7) for _ in range(10)]
        config = LstmConfig(
            hidden_size=2, input_size=1, window_length=2, epochs=400,
            learning_rate=0.01, seed=1,
        )
        report = train(samples, config)
        assert report.train_losses[-1] < 1e-3

    def test_deterministic_for_fixed_seed(self):
        values = 0.5 + 0.4 * np.sin(np.arange(20) / 3.0)
        samples = make_supervised(values, 3)
        config = LstmConfig(hidden_size=4, input_size=1, window_length=3, epochs=5, seed=12)
        a, b = train(samples, config), train(samples, config)
        np.testing.assert_array_equal(a.params.to_vector(), b.params.to_vector())
        assert a.train_losses == b.train_losses

    def test_loss_trace_finite_for_unit_scaled_inputs(self):
        rng = np.random.default_rng(6)
        values = rng.uniform(0, 1, size=24)
        samples = make_supervised(values, 4)
        config = LstmConfig(hidden_size=6, input_size=1, window_length=4, epochs=30, seed=3)
        report = train(samples, config)
        assert np.all(np.isfinite(report.train_losses))
        assert np.all(np.isfinite(report.val_losses))

    def test_series_too_short_names_minimum(self):
        with pytest.raises(InputDataError, match="window_length \\+ 2 = 6"):
            make_supervised(np.zeros(5), 4)


class TestTrainOnValues:
    def test_scaler_fits_on_training_rows_only(self):
        values = np.concatenate([np.linspace(0.0, 1.0, 20), [50.0, 60.0]])
        config = LstmConfig(hidden_size=2, input_size=1, window_length=3, epochs=1, seed=0)
        result = train_on_values(values, config)
        # 22 rows, 19 samples, 15 train -> rows 0..17 visible
        assert result.first_test_index == 18
        assert result.column_max[0] <= 1.0

    def test_heldout_predictions_on_original_scale(self):
        values = 10.0 + 5.0 * np.sin(np.arange(24) / 4.0)
        config = LstmConfig(hidden_size=3, input_size=1, window_length=4, epochs=5, seed=2)
        result = train_on_values(values, config)
        n_test = result.report.n_test
        np.testing.assert_allclose(
            result.heldout_targets, values[-n_test:], rtol=1e-12
        )

    def test_input_size_mismatch_rejected(self):
        config = LstmConfig(hidden_size=2, input_size=2, window_length=3, epochs=1)
        with pytest.raises(ConfigError):
            train_on_values(np.zeros((10, 1)) + np.arange(10)[:, None], config)


class TestLstmRegressor:
    def test_fit_predict_shapes(self):
        rng = np.random.default_rng(10)
        X = rng.uniform(0, 1, size=(12, 3))
        y = rng.uniform(0, 1, size=12)
        model = LstmRegressor(hidden_size=3, window_length=3, epochs=3, seed=0)
        preds = model.fit(X, y).predict(X)
        assert preds.shape == (12,)
        assert len(model.loss_curve_) == 3

    def test_sklearn_params_round_trip(self):
        model = LstmRegressor(hidden_size=7, epochs=11, dense_size=2)
        cloned = clone(model)
        assert cloned.get_params() == model.get_params()

    def test_predict_before_fit_raises(self):
        with pytest.raises(NotFittedError):
            LstmRegressor().predict(np.zeros((2, 4)))

    def test_window_length_mismatch_rejected(self):
        model = LstmRegressor(window_length=4, epochs=1)
        with pytest.raises(ConfigError):
            model.fit(np.zeros((5, 3)), np.zeros(5))

    def test_config_invariants_enforced(self):
        with pytest.raises(ConfigError):
            LstmConfig(hidden_size=0)
        with pytest.raises(ConfigError):
            LstmConfig(window_length=0)
        with pytest.raises(ConfigError):
            LstmConfig(train_fraction=1.0)
        with pytest.raises(ConfigError):
            LstmConfig(epochs=0)
