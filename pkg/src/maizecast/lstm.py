"""Single-layer LSTM regressor built from scratch on numpy.

The cell follows the standard gate equations (input, forget, cell
candidate, output; logistic gates, tanh squashing) with weights held in
four stacked blocks per kind.  Training is backpropagation through time
on mean squared error with ADAM updates; everything is deterministic
for a fixed seed.  A scikit-learn style :class:`LstmRegressor` wraps the
functional core.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.exceptions import NotFittedError

from .exceptions import ConfigError, InputDataError, NumericError
from .validation import require

__all__ = [
    "GATE_ORDER",
    "LstmConfig",
    "LstmParams",
    "LstmState",
    "GateActivations",
    "AdamState",
    "LstmTrainingReport",
    "SeriesTrainingReport",
    "init_params",
    "cell_step",
    "forward_sequence",
    "loss_mse",
    "backprop",
    "adam_update",
    "make_supervised",
    "train",
    "train_on_values",
    "LstmRegressor",
]

#: Block order of the stacked weight matrices.
GATE_ORDER = ("input", "forget", "cell", "output")
_I, _F, _G, _O = 0, 1, 2, 3


@dataclass(frozen=True)
class LstmConfig:
    """Network and training configuration."""

    hidden_size: int = 32
    input_size: int = 1
    window_length: int = 4
    epochs: int = 200
    learning_rate: float = 1e-3
    beta_1: float = 0.9
    beta_2: float = 0.999
    epsilon: float = 1e-8
    seed: int = 0
    train_fraction: float = 0.8
    batch_size: int | None = None
    dense_size: int | None = None

    def __post_init__(self):
        require(self.hidden_size >= 1, f"hidden_size must be >= 1, got {self.hidden_size}")
        require(self.input_size >= 1, f"input_size must be >= 1, got {self.input_size}")
        require(self.window_length >= 1, f"window_length must be >= 1, got {self.window_length}")
        require(self.epochs >= 1, f"epochs must be >= 1, got {self.epochs}")
        require(
            0.0 < self.train_fraction < 1.0,
            f"train_fraction must be in (0, 1), got {self.train_fraction}",
        )
        require(self.learning_rate > 0.0, "learning_rate must be > 0")
        if self.batch_size is not None:
            require(self.batch_size >= 1, f"batch_size must be >= 1, got {self.batch_size}")
        if self.dense_size is not None:
            require(self.dense_size >= 1, f"dense_size must be >= 1, got {self.dense_size}")


@dataclass(frozen=True)
class LstmParams:
    """All learnable weights.

    ``W`` (4, hidden, input), ``R`` (4, hidden, hidden) and ``b``
    (4, hidden) hold the gate blocks in :data:`GATE_ORDER`; the head is
    either a single affine map of the final hidden state or, when
    ``dense_w`` is present, one tanh dense layer followed by the affine
    output.
    """

    W: np.ndarray
    R: np.ndarray
    b: np.ndarray
    out_w: np.ndarray
    out_b: float
    dense_w: np.ndarray | None = None
    dense_b: np.ndarray | None = None

    @property
    def hidden_size(self) -> int:
        return self.W.shape[1]

    @property
    def input_size(self) -> int:
        return self.W.shape[2]

    def _fields(self) -> list[np.ndarray]:
        parts = [self.W, self.R, self.b, self.out_w, np.array([self.out_b])]
        if self.dense_w is not None:
            parts += [self.dense_w, self.dense_b]
        return parts

    def to_vector(self) -> np.ndarray:
        """Flatten every block into one parameter vector."""
        return np.concatenate([p.ravel() for p in self._fields()])

    @classmethod
    def from_vector(cls, vector: np.ndarray, like: "LstmParams") -> "LstmParams":
        """Rebuild parameters with the shapes of ``like`` from a flat vector."""
        vector = np.asarray(vector, dtype=float)
        shapes = [p.shape for p in like._fields()]
        sizes = [int(np.prod(s)) for s in shapes]
        require(vector.size == sum(sizes), "parameter vector has the wrong length")
        chunks = np.split(vector, np.cumsum(sizes)[:-1])
        blocks = [c.reshape(s) for c, s in zip(chunks, shapes)]
        dense_w = dense_b = None
        if like.dense_w is not None:
            dense_w, dense_b = blocks[5], blocks[6]
        return cls(
            W=blocks[0],
            R=blocks[1],
            b=blocks[2],
            out_w=blocks[3],
            out_b=float(blocks[4][0]),
            dense_w=dense_w,
            dense_b=dense_b,
        )

    @classmethod
    def zeros_like(cls, like: "LstmParams") -> "LstmParams":
        return cls.from_vector(np.zeros(like.to_vector().size), like)


@dataclass(frozen=True)
class LstmState:
    """Evolving cell and hidden state vectors."""

    c: np.ndarray
    h: np.ndarray

    @classmethod
    def zero(cls, hidden_size: int) -> "LstmState":
        return cls(np.zeros(hidden_size), np.zeros(hidden_size))


class GateActivations(NamedTuple):
    i: np.ndarray
    f: np.ndarray
    g: np.ndarray
    o: np.ndarray


def init_params(config: LstmConfig) -> LstmParams:
    """Seeded uniform initialization scaled by 1/sqrt(hidden_size).

    The forget-gate bias starts at one (so early training does not wipe
    the cell state); all other biases start at zero.
    """
    rng = np.random.default_rng(config.seed)
    h, d = config.hidden_size, config.input_size
    scale = 1.0 / np.sqrt(h)
    w = rng.uniform(-scale, scale, size=(4, h, d))
    r = rng.uniform(-scale, scale, size=(4, h, h))
    b = np.zeros((4, h))
    b[_F] = 1.0
    dense_w = dense_b = None
    head_in = h
    if config.dense_size is not None:
        dense_w = rng.uniform(-scale, scale, size=(config.dense_size, h))
        dense_b = np.zeros(config.dense_size)
        head_in = config.dense_size
    out_w = rng.uniform(-scale, scale, size=head_in)
    return LstmParams(W=w, R=r, b=b, out_w=out_w, out_b=0.0, dense_w=dense_w, dense_b=dense_b)


def _sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def _as_input(x, input_size: int) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    if arr.shape != (input_size,):
        raise ConfigError(f"input vector has shape {arr.shape}, expected ({input_size},)")
    if not np.all(np.isfinite(arr)):
        raise NumericError("input vector contains non-finite values")
    return arr


def cell_step(params: LstmParams, state: LstmState, x) -> tuple[LstmState, GateActivations]:
    """One cell update: gate the input, refresh the cell state, emit h.

    The gates use the logistic sigmoid, the candidate and the cell
    output use tanh; the new cell state is ``f * c_prev + i * g`` and
    the hidden state ``o * tanh(c)``, so ``|h| < 1`` componentwise.
    """
    xv = _as_input(x, params.input_size)
    z = np.tensordot(params.W, xv, axes=([2], [0])) + np.tensordot(
        params.R, state.h, axes=([2], [0])
    ) + params.b
    gates = GateActivations(
        i=_sigmoid(z[_I]),
        f=_sigmoid(z[_F]),
        g=np.tanh(z[_G]),
        o=_sigmoid(z[_O]),
    )
    c = gates.f * state.c + gates.i * gates.g
    h = gates.o * np.tanh(c)
    return LstmState(c, h), gates


@dataclass(frozen=True)
class ForwardCache:
    """Everything backpropagation needs from one forward pass."""

    inputs: np.ndarray
    gates: tuple[GateActivations, ...]
    cells: np.ndarray
    hiddens: np.ndarray
    prediction: float
    dense_pre: np.ndarray | None = None
    dense_act: np.ndarray | None = None


def forward_sequence(
    params: LstmParams, window, expected_length: int | None = None
) -> tuple[float, ForwardCache]:
    """Run the cell over a window and map the final hidden state to a
    scalar prediction through the (optionally dense) head."""
    arr = np.asarray(window, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2 or arr.shape[1] != params.input_size:
        raise ConfigError(
            f"window has shape {np.asarray(window).shape}, expected "
            f"(steps, {params.input_size})"
        )
    if expected_length is not None and arr.shape[0] != expected_length:
        raise ConfigError(f"window has {arr.shape[0]} steps, expected {expected_length}")
    if arr.shape[0] == 0:
        raise ConfigError("window must contain at least one step")

    h = params.hidden_size
    steps = arr.shape[0]
    state = LstmState.zero(h)
    gates_trace = []
    cells = np.zeros((steps + 1, h))
    hiddens = np.zeros((steps + 1, h))
    for t in range(steps):
        state, gates = cell_step(params, state, arr[t])
        gates_trace.append(gates)
        cells[t + 1] = state.c
        hiddens[t + 1] = state.h

    dense_pre = dense_act = None
    if params.dense_w is not None:
        dense_pre = params.dense_w @ state.h + params.dense_b
        dense_act = np.tanh(dense_pre)
        prediction = float(params.out_w @ dense_act + params.out_b)
    else:
        prediction = float(params.out_w @ state.h + params.out_b)
    cache = ForwardCache(
        inputs=arr,
        gates=tuple(gates_trace),
        cells=cells,
        hiddens=hiddens,
        prediction=prediction,
        dense_pre=dense_pre,
        dense_act=dense_act,
    )
    return prediction, cache


def loss_mse(predictions, targets) -> float:
    """Mean squared error between prediction and target vectors."""
    p = np.asarray(predictions, dtype=float).ravel()
    t = np.asarray(targets, dtype=float).ravel()
    if p.shape != t.shape:
        raise InputDataError(f"length mismatch: {p.shape[0]} predictions vs {t.shape[0]} targets")
    if p.size == 0:
        raise InputDataError("loss needs at least one value")
    return float(np.mean((p - t) ** 2))


def backprop(params: LstmParams, cache: ForwardCache, target: float) -> LstmParams:
    """Analytic gradient of the squared error ``(prediction - target)**2``
    with respect to every parameter block, via backpropagation through
    time over the cached activations."""
    d_pred = 2.0 * (cache.prediction - float(target))
    h_last = cache.hiddens[-1]

    grads = {name: np.zeros_like(getattr(params, name)) for name in ("W", "R", "b", "out_w")}
    d_out_b = d_pred
    d_dense_w = d_dense_b = None
    if params.dense_w is not None:
        grads["out_w"] = d_pred * cache.dense_act
        dz1 = (d_pred * params.out_w) * (1.0 - cache.dense_act**2)
        d_dense_w = np.outer(dz1, h_last)
        d_dense_b = dz1
        dh = params.dense_w.T @ dz1
    else:
        grads["out_w"] = d_pred * h_last
        dh = d_pred * params.out_w

    dc = np.zeros(params.hidden_size)
    for t in range(len(cache.gates) - 1, -1, -1):
        gates = cache.gates[t]
        c_t = cache.cells[t + 1]
        c_prev = cache.cells[t]
        h_prev = cache.hiddens[t]
        tanh_c = np.tanh(c_t)

        dz_o = (dh * tanh_c) * gates.o * (1.0 - gates.o)
        dc = dc + dh * gates.o * (1.0 - tanh_c**2)
        dz_i = (dc * gates.g) * gates.i * (1.0 - gates.i)
        dz_g = (dc * gates.i) * (1.0 - gates.g**2)
        dz_f = (dc * c_prev) * gates.f * (1.0 - gates.f)

        dz = np.stack([dz_i, dz_f, dz_g, dz_o])
        grads["W"] += dz[:, :, None] * cache.inputs[t][None, None, :]
        grads["R"] += dz[:, :, None] * h_prev[None, None, :]
        grads["b"] += dz

        dh = sum(params.R[k].T @ dz[k] for k in range(4))
        dc = dc * gates.f

    return LstmParams(
        W=grads["W"],
        R=grads["R"],
        b=grads["b"],
        out_w=grads["out_w"],
        out_b=float(d_out_b),
        dense_w=d_dense_w,
        dense_b=d_dense_b,
    )


@dataclass(frozen=True)
class AdamState:
    """Exponentially decayed first/second moment vectors plus step count."""

    first_moment: np.ndarray
    second_moment: np.ndarray
    step: int = 0

    @classmethod
    def for_params(cls, params: LstmParams) -> "AdamState":
        n = params.to_vector().size
        return cls(np.zeros(n), np.zeros(n), 0)


def adam_update(
    params: LstmParams, grads: LstmParams, state: AdamState, config: LstmConfig
) -> tuple[LstmParams, AdamState]:
    """One bias-corrected ADAM step; returns fresh params and state."""
    theta = params.to_vector()
    g = grads.to_vector()
    step = state.step + 1
    m = config.beta_1 * state.first_moment + (1.0 - config.beta_1) * g
    v = config.beta_2 * state.second_moment + (1.0 - config.beta_2) * g**2
    m_hat = m / (1.0 - config.beta_1**step)
    v_hat = v / (1.0 - config.beta_2**step)
    theta = theta - config.learning_rate * m_hat / (np.sqrt(v_hat) + config.epsilon)
    return LstmParams.from_vector(theta, params), AdamState(m, v, step)


def make_supervised(values, window_length: int) -> list[tuple[np.ndarray, float]]:
    """Slide a window over the series: each sample is ``window_length``
    consecutive rows predicting the next row's first column."""
    arr = np.asarray(values, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, None]
    require(
        arr.shape[0] >= window_length + 2,
        f"series of length {arr.shape[0]} is too short; need at least "
        f"window_length + 2 = {window_length + 2} rows",
        InputDataError,
    )
    samples = []
    for start in range(arr.shape[0] - window_length):
        window = arr[start : start + window_length]
        samples.append((window, float(arr[start + window_length, 0])))
    return samples


@dataclass(frozen=True)
class LstmTrainingReport:
    """Per-epoch loss traces plus the held-out evaluation of the final model."""

    params: LstmParams
    train_losses: tuple[float, ...]
    val_losses: tuple[float, ...]
    heldout_predictions: np.ndarray
    heldout_targets: np.ndarray
    n_train: int
    n_test: int


def _epoch_batches(n: int, batch_size: int | None):
    size = n if batch_size is None else min(batch_size, n)
    for start in range(0, n, size):
        yield range(start, min(start + size, n))


def _run_epochs(params, windows, targets, val_windows, val_targets, config):
    adam = AdamState.for_params(params)
    train_losses = []
    val_losses = []
    for _ in range(config.epochs):
        for batch in _epoch_batches(len(windows), config.batch_size):
            total = LstmParams.zeros_like(params).to_vector()
            for idx in batch:
                _, cache = forward_sequence(params, windows[idx])
                total += backprop(params, cache, targets[idx]).to_vector()
            mean_grad = LstmParams.from_vector(total / len(batch), params)
            params, adam = adam_update(params, mean_grad, adam, config)
        train_losses.append(_dataset_loss(params, windows, targets))
        if val_windows:
            val_losses.append(_dataset_loss(params, val_windows, val_targets))
    return params, train_losses, val_losses


def _dataset_loss(params, windows, targets) -> float:
    preds = [forward_sequence(params, w)[0] for w in windows]
    return loss_mse(preds, targets)


def _predictions(params, windows) -> np.ndarray:
    return np.array([forward_sequence(params, w)[0] for w in windows])


def train(samples, config: LstmConfig) -> LstmTrainingReport:
    """Train on a chronological split of supervised samples.

    The first ``floor(train_fraction * n)`` samples train the network;
    the remainder is held out and evaluated every epoch, so the two
    traces have one entry per epoch.  Deterministic for a fixed config.
    """
    samples = list(samples)
    n = len(samples)
    require(n >= 2, f"need at least 2 supervised samples, got {n}", InputDataError)
    n_train = int(np.floor(config.train_fraction * n))
    require(
        1 <= n_train < n,
        f"train fraction {config.train_fraction} leaves no usable split for {n} samples",
        InputDataError,
    )
    windows = []
    for w, _ in samples:
        arr = np.asarray(w, dtype=float)
        if arr.ndim == 1:
            arr = arr[:, None]
        if arr.shape != (config.window_length, config.input_size):
            raise ConfigError(
                f"sample window has shape {arr.shape}, expected "
                f"({config.window_length}, {config.input_size})"
            )
        windows.append(arr)
    targets = [float(t) for _, t in samples]

    params = init_params(config)
    params, train_losses, val_losses = _run_epochs(
        params,
        windows[:n_train],
        targets[:n_train],
        windows[n_train:],
        targets[n_train:],
        config,
    )
    return LstmTrainingReport(
        params=params,
        train_losses=tuple(train_losses),
        val_losses=tuple(val_losses),
        heldout_predictions=_predictions(params, windows[n_train:]),
        heldout_targets=np.array(targets[n_train:]),
        n_train=n_train,
        n_test=n - n_train,
    )


@dataclass(frozen=True)
class SeriesTrainingReport:
    """Training on a raw series: scaling bounds, the inner report and the
    held-out predictions mapped back to the original scale."""

    report: LstmTrainingReport
    column_min: np.ndarray
    column_max: np.ndarray
    heldout_predictions: np.ndarray
    heldout_targets: np.ndarray
    first_test_index: int


def train_on_values(values, config: LstmConfig) -> SeriesTrainingReport:
    """Scale a raw series to [0, 1], window it and train.

    Min-max bounds are fitted only on the rows visible to the training
    samples (windows plus targets), never on held-out rows.  Constant
    columns scale to zero and invert back to their constant.  The first
    column is the prediction target.
    """
    arr = np.asarray(values, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, None]
    require(
        arr.shape[1] == config.input_size,
        f"series has {arr.shape[1]} columns but config.input_size is {config.input_size}",
    )
    require(
        arr.shape[0] >= config.window_length + 2,
        f"series of length {arr.shape[0]} is too short; need at least "
        f"window_length + 2 = {config.window_length + 2} rows",
        InputDataError,
    )
    n_samples = arr.shape[0] - config.window_length
    n_train = int(np.floor(config.train_fraction * n_samples))
    visible = config.window_length + n_train

    col_min = arr[:visible].min(axis=0)
    col_max = arr[:visible].max(axis=0)
    span = np.where(col_max > col_min, col_max - col_min, 1.0)
    scaled = (arr - col_min) / span

    report = train(make_supervised(scaled, config.window_length), config)
    predictions = report.heldout_predictions * span[0] + col_min[0]
    targets = report.heldout_targets * span[0] + col_min[0]
    return SeriesTrainingReport(
        report=report,
        column_min=col_min,
        column_max=col_max,
        heldout_predictions=predictions,
        heldout_targets=targets,
        first_test_index=visible,
    )


class LstmRegressor(BaseEstimator, RegressorMixin):
    """Windowed-sequence regressor around the from-scratch LSTM.

    ``fit`` expects pre-windowed samples: ``X`` of shape
    (n_samples, window_length) or (n_samples, window_length, n_features)
    and scalar targets ``y``; it trains on everything it is given (no
    internal split), recording ``loss_curve_``.  Use :func:`train` or
    :func:`train_on_values` for the chronological-split protocol.
    """

    def __init__(
        self,
        hidden_size: int = 32,
        window_length: int = 4,
        epochs: int = 200,
        learning_rate: float = 1e-3,
        beta_1: float = 0.9,
        beta_2: float = 0.999,
        epsilon: float = 1e-8,
        seed: int = 0,
        batch_size: int | None = None,
        dense_size: int | None = None,
    ):
        self.hidden_size = hidden_size
        self.window_length = window_length
        self.epochs = epochs
        self.learning_rate = learning_rate
        self.beta_1 = beta_1
        self.beta_2 = beta_2
        self.epsilon = epsilon
        self.seed = seed
        self.batch_size = batch_size
        self.dense_size = dense_size

    def _config(self, input_size: int) -> LstmConfig:
        return LstmConfig(
            hidden_size=self.hidden_size,
            input_size=input_size,
            window_length=self.window_length,
            epochs=self.epochs,
            learning_rate=self.learning_rate,
            beta_1=self.beta_1,
            beta_2=self.beta_2,
            epsilon=self.epsilon,
            seed=self.seed,
            batch_size=self.batch_size,
            dense_size=self.dense_size,
        )

    @staticmethod
    def _windows(X) -> np.ndarray:
        arr = np.asarray(X, dtype=float)
        if arr.ndim == 2:
            arr = arr[:, :, None]
        if arr.ndim != 3:
            raise ConfigError(
                f"X must have shape (n_samples, window_length[, n_features]), got {arr.shape}"
            )
        return arr

    def fit(self, X, y):
        arr = self._windows(X)
        targets = np.asarray(y, dtype=float).ravel()
        if arr.shape[0] != targets.shape[0]:
            raise InputDataError(f"X has {arr.shape[0]} samples but y has {targets.shape[0]}")
        if arr.shape[1] != self.window_length:
            raise ConfigError(
                f"X windows have length {arr.shape[1]}, expected window_length={self.window_length}"
            )
        config = self._config(arr.shape[2])
        params, losses, _ = _run_epochs(
            init_params(config),
            list(arr),
            list(targets),
            [],
            [],
            config,
        )
        self.params_ = params
        self.config_ = config
        self.loss_curve_ = tuple(losses)
        return self

    def predict(self, X) -> np.ndarray:
        if not hasattr(self, "params_"):
            raise NotFittedError("this LstmRegressor instance is not fitted yet")
        arr = self._windows(X)
        return _predictions(self.params_, list(arr))
