"""Discrete hidden Markov model: representation, inference and learning.

Implements the full toolchain for a discrete-emission HMM over a small
state space: exact likelihood by path enumeration (the slow oracle),
scaled forward/backward recursions, Viterbi decoding, Baum-Welch
expectation-maximization, stationary distributions and multi-step
forecasting.  A scikit-learn style :class:`DiscreteHMM` estimator wraps
the functional core.

Scaling convention: the forward pass stores per-step normalizers
``scales[t] = 1 / sum_i alpha_t(i)`` so every stored row sums to one and
``log_likelihood == -sum(log(scales))``.  The backward pass reuses the
same factors, which makes ``sum_i alpha[t, i] * beta[t, i] == 1`` at
every step.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .exceptions import ConfigError, ConvergenceError, InvalidModelError, NumericError, InputDataError
from .validation import (
    as_float_matrix,
    as_float_vector,
    check_observations,
    require,
)

__all__ = [
    "StateSpace",
    "ObservationAlphabet",
    "DEFAULT_STATES",
    "DEFAULT_ALPHABET",
    "HmmParams",
    "Violation",
    "TrellisResult",
    "PosteriorStats",
    "TrainingReport",
    "ForecastStep",
    "ForecastResult",
    "validate_params",
    "likelihood_bruteforce",
    "forward",
    "backward",
    "viterbi",
    "posteriors",
    "baum_welch",
    "steady_state",
    "steady_state_linear",
    "forecast",
    "match_fraction",
    "next_observation_distribution",
    "one_step_predictions",
    "DiscreteHMM",
]


@dataclass(frozen=True)
class StateSpace:
    """Ordered hidden-state labels; label order fixes all matrix indices."""

    labels: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        require(len(self.labels) >= 1, "state space needs at least one state")
        require(len(set(self.labels)) == len(self.labels), "state labels must be unique")

    @property
    def n_states(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        return self.labels.index(label)


@dataclass(frozen=True)
class ObservationAlphabet:
    """Ordered observable-symbol labels; order fixes emission columns."""

    symbols: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(self.symbols))
        require(len(self.symbols) >= 1, "alphabet needs at least one symbol")
        require(len(set(self.symbols)) == len(self.symbols), "symbols must be unique")

    @property
    def n_symbols(self) -> int:
        return len(self.symbols)

    def index(self, symbol: str) -> int:
        return self.symbols.index(symbol)


#: Rainfall level crossed with temperature level, in canonical matrix order.
DEFAULT_STATES = StateSpace(("LL", "LH", "HL", "HH"))
#: Low / moderate / high yield, in canonical emission-column order.
DEFAULT_ALPHABET = ObservationAlphabet(("L", "M", "H"))


def _lock(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class HmmParams:
    """Full model: initial distribution, transition and emission matrices.

    Arrays are copied and frozen on construction, so instances are
    immutable values safe to share across threads.  Construction only
    enforces shape consistency; stochasticity is checked separately by
    :func:`validate_params`.
    """

    startprob: np.ndarray
    transmat: np.ndarray
    emissionprob: np.ndarray

    def __post_init__(self):
        pi = as_float_vector(self.startprob, "startprob").copy()
        a = as_float_matrix(self.transmat, "transmat").copy()
        b = as_float_matrix(self.emissionprob, "emissionprob").copy()
        n = pi.shape[0]
        if a.shape != (n, n):
            raise InvalidModelError(
                f"transmat shape {a.shape} does not match startprob length {n}"
            )
        if b.shape[0] != n:
            raise InvalidModelError(
                f"emissionprob has {b.shape[0]} rows, expected {n}"
            )
        object.__setattr__(self, "startprob", _lock(pi))
        object.__setattr__(self, "transmat", _lock(a))
        object.__setattr__(self, "emissionprob", _lock(b))

    @property
    def n_states(self) -> int:
        return self.startprob.shape[0]

    @property
    def n_symbols(self) -> int:
        return self.emissionprob.shape[1]


@dataclass(frozen=True)
class Violation:
    """One failed parameter check; ``kind`` is 'stochasticity' or 'range'."""

    kind: str
    message: str

    def __str__(self) -> str:
        return self.message


def validate_params(
    params: HmmParams,
    n_states: int | None = None,
    n_symbols: int | None = None,
    tol: float = 1e-9,
) -> list[Violation]:
    """Check stochasticity of ``params``; return one violation per problem.

    An empty list means the model is valid.  Mismatches against the
    declared ``n_states``/``n_symbols`` are structural and raise
    :class:`InvalidModelError` instead of being reported, since no
    row-level diagnosis applies.  Row numbers in messages are 1-based.
    """
    if n_states is not None and params.n_states != n_states:
        raise InvalidModelError(
            f"model has {params.n_states} states but {n_states} were declared"
        )
    if n_symbols is not None and params.n_symbols != n_symbols:
        raise InvalidModelError(
            f"model emits {params.n_symbols} symbols but {n_symbols} were declared"
        )

    violations: list[Violation] = []

    def check_range(name, arr):
        bad = np.argwhere((arr < -tol) | (arr > 1.0 + tol))
        for idx in bad:
            pos = ", ".join(str(i + 1) for i in idx)
            violations.append(
                Violation("range", f"{name} entry ({pos}) = {arr[tuple(idx)]:.6g} outside [0, 1]")
            )

    def check_rows(name, mat):
        sums = mat.sum(axis=1)
        for i, s in enumerate(sums):
            if abs(s - 1.0) > tol:
                violations.append(
                    Violation("stochasticity", f"{name} row {i + 1} sums to {s:.6g}")
                )

    check_range("startprob", params.startprob)
    check_range("transmat", params.transmat)
    check_range("emissionprob", params.emissionprob)
    total = params.startprob.sum()
    if abs(total - 1.0) > tol:
        violations.append(Violation("stochasticity", f"startprob sums to {total:.6g}"))
    check_rows("transmat", params.transmat)
    check_rows("emissionprob", params.emissionprob)
    return violations


def _require_valid(params: HmmParams) -> None:
    problems = validate_params(params)
    if problems:
        raise InvalidModelError(
            "invalid model parameters: " + "; ".join(str(v) for v in problems)
        )


def likelihood_bruteforce(
    params: HmmParams, obs, max_paths: int = 10**7
) -> float:
    """Exact sequence likelihood by summing over every hidden-state path.

    Exponential in the sequence length; kept as the independent oracle
    for the forward recursion.  Refuses instances with more than
    ``max_paths`` paths.
    """
    seq = check_observations(obs, params.n_symbols)
    n, t = params.n_states, seq.shape[0]
    if n**t > max_paths:
        raise ConfigError(
            f"brute-force enumeration of {n}**{t} paths exceeds the cap of {max_paths}"
        )
    pi, a, b = params.startprob, params.transmat, params.emissionprob
    total = 0.0
    chunk = 100_000
    paths = itertools.product(range(n), repeat=t)
    while True:
        block = np.array(list(itertools.islice(paths, chunk)), dtype=np.intp)
        if block.size == 0:
            break
        probs = pi[block[:, 0]] * b[block[:, 0], seq[0]]
        for step in range(1, t):
            probs *= a[block[:, step - 1], block[:, step]] * b[block[:, step], seq[step]]
        total += float(probs.sum())
    return total


@dataclass(frozen=True)
class TrellisResult:
    """Scaled forward pass: row-normalized alphas, per-step normalizers
    and the sequence log-likelihood recovered from them."""

    alpha: np.ndarray
    scales: np.ndarray
    log_likelihood: float


def forward(params: HmmParams, obs) -> TrellisResult:
    """Scaled forward recursion.

    If the sequence is impossible under the model the log-likelihood is
    ``-inf``, rows from the failing step stay zero and the remaining
    scale factors are ``+inf``; no exception is raised.
    """
    _require_valid(params)
    seq = check_observations(obs, params.n_symbols)
    n, t = params.n_states, seq.shape[0]
    pi, a, b = params.startprob, params.transmat, params.emissionprob

    alpha = np.zeros((t, n))
    scales = np.full(t, np.inf)
    row = pi * b[:, seq[0]]
    for step in range(t):
        if step > 0:
            row = (alpha[step - 1] @ a) * b[:, seq[step]]
        total = row.sum()
        if total <= 0.0:
            return TrellisResult(_lock(alpha), _lock(scales), -np.inf)
        scales[step] = 1.0 / total
        alpha[step] = row * scales[step]
    log_likelihood = -float(np.log(scales).sum())
    return TrellisResult(_lock(alpha), _lock(scales), log_likelihood)


def backward(params: HmmParams, obs, scales: np.ndarray | None = None) -> np.ndarray:
    """Scaled backward recursion reusing the forward scale factors.

    The last row is all ones (the unscaled definition); earlier rows are
    multiplied by the same normalizers as the forward pass so that
    ``sum_i alpha[t, i] * beta[t, i] == 1`` for every ``t``.  For an
    impossible sequence the rows left of the failing step are zeroed.
    """
    _require_valid(params)
    seq = check_observations(obs, params.n_symbols)
    if scales is None:
        scales = forward(params, seq).scales
    n, t = params.n_states, seq.shape[0]
    a, b = params.transmat, params.emissionprob

    beta = np.zeros((t, n))
    beta[t - 1] = 1.0
    for step in range(t - 2, -1, -1):
        if not np.isfinite(scales[step + 1]):
            beta[: step + 1] = 0.0
            break
        beta[step] = scales[step + 1] * (a @ (b[:, seq[step + 1]] * beta[step + 1]))
    return _lock(beta)


def viterbi(params: HmmParams, obs) -> tuple[np.ndarray, float]:
    """Most probable hidden-state path and its log joint probability.

    Computed in log-space with additive scores; all ties (including
    all ``-inf`` columns) break toward the lowest state index.
    """
    _require_valid(params)
    seq = check_observations(obs, params.n_symbols)
    n, t = params.n_states, seq.shape[0]
    with np.errstate(divide="ignore"):
        log_pi = np.log(params.startprob)
        log_a = np.log(params.transmat)
        log_b = np.log(params.emissionprob)

    scores = log_pi + log_b[:, seq[0]]
    back = np.zeros((t, n), dtype=np.intp)
    for step in range(1, t):
        cand = scores[:, None] + log_a
        back[step] = np.argmax(cand, axis=0)
        scores = cand[back[step], np.arange(n)] + log_b[:, seq[step]]

    path = np.zeros(t, dtype=np.intp)
    path[t - 1] = int(np.argmax(scores))
    for step in range(t - 2, -1, -1):
        path[step] = back[step + 1][path[step + 1]]
    return _lock(path), float(scores[path[t - 1]])


@dataclass(frozen=True)
class PosteriorStats:
    """E-step posteriors: per-step state marginals ``gamma`` (T, N) and
    pairwise transition posteriors ``xi`` (T-1, N, N)."""

    gamma: np.ndarray
    xi: np.ndarray


def posteriors(params: HmmParams, obs) -> PosteriorStats:
    """State and transition posteriors from one forward-backward sweep."""
    seq = check_observations(obs, params.n_symbols)
    trellis = forward(params, seq)
    if not np.isfinite(trellis.log_likelihood):
        raise NumericError(
            "observation sequence has zero probability under the model; "
            "posteriors are undefined"
        )
    return _posterior_stats(params, seq, trellis)


def _posterior_stats(params: HmmParams, seq: np.ndarray, trellis: TrellisResult) -> PosteriorStats:
    a, b = params.transmat, params.emissionprob
    alpha, scales = trellis.alpha, trellis.scales
    t = seq.shape[0]
    beta = backward(params, seq, scales=scales)

    gamma = alpha * beta
    gamma /= gamma.sum(axis=1, keepdims=True)

    xi = np.zeros((t - 1, params.n_states, params.n_states))
    for step in range(t - 1):
        slice_ = (
            alpha[step][:, None]
            * a
            * (b[:, seq[step + 1]] * beta[step + 1])[None, :]
            * scales[step + 1]
        )
        xi[step] = slice_ / slice_.sum()
    return PosteriorStats(_lock(gamma), _lock(xi))


@dataclass(frozen=True)
class TrainingReport:
    """Outcome of a Baum-Welch run.

    ``frozen_rows`` lists ``(iteration, matrix, row)`` entries for rows
    whose expected visit count was zero and were therefore carried over
    unchanged instead of renormalized.
    """

    params: HmmParams
    log_likelihoods: tuple[float, ...]
    iterations: int
    converged: bool
    frozen_rows: tuple[tuple[int, str, int], ...] = field(default_factory=tuple)


def baum_welch(
    init: HmmParams,
    obs,
    max_iter: int = 1000,
    tol: float = 1e-6,
    update_startprob: bool = False,
) -> TrainingReport:
    """Fit the model by expectation-maximization from ``init``.

    Each iteration re-estimates the transition matrix from the pairwise
    posteriors and the emission matrix from the state posteriors, then
    stops once the log-likelihood improves by less than ``tol`` or after
    ``max_iter`` re-estimations.  The initial distribution is kept at
    its initialization unless ``update_startprob`` is set, matching the
    estimation convention used for the bundled dataset.

    The recorded trace is non-decreasing; if the data is impossible
    under ``init`` the report carries a single ``-inf`` entry and
    ``converged=False``.
    """
    _require_valid(init)
    seq = check_observations(obs, init.n_symbols)
    require(max_iter >= 1, f"max_iter must be >= 1, got {max_iter}")
    require(tol > 0.0, f"tol must be > 0, got {tol}")

    current = init
    trellis = forward(current, seq)
    trace = [trellis.log_likelihood]
    if not np.isfinite(trellis.log_likelihood):
        return TrainingReport(init, tuple(trace), 0, False)

    frozen: list[tuple[int, str, int]] = []
    converged = False
    t = seq.shape[0]
    iterations = 0
    for iteration in range(1, max_iter + 1):
        stats = _posterior_stats(current, seq, trellis)
        gamma, xi = stats.gamma, stats.xi

        trans_num = xi.sum(axis=0)
        trans_den = gamma[:-1].sum(axis=0)
        new_a = np.array(current.transmat)
        for i in range(current.n_states):
            if trans_den[i] > 0.0:
                new_a[i] = trans_num[i] / trans_den[i]
            else:
                frozen.append((iteration, "transmat", i))

        emit_den = gamma.sum(axis=0)
        new_b = np.array(current.emissionprob)
        onehot = np.zeros((t, current.n_symbols))
        onehot[np.arange(t), seq] = 1.0
        emit_num = gamma.T @ onehot
        for j in range(current.n_states):
            if emit_den[j] > 0.0:
                new_b[j] = emit_num[j] / emit_den[j]
            else:
                frozen.append((iteration, "emissionprob", j))

        new_pi = gamma[0] if update_startprob else current.startprob
        current = HmmParams(new_pi, new_a, new_b)

        trellis = forward(current, seq)
        trace.append(trellis.log_likelihood)
        iterations = iteration
        if abs(trace[-1] - trace[-2]) < tol:
            converged = True
            break

    return TrainingReport(current, tuple(trace), iterations, converged, tuple(frozen))


def steady_state(transmat, tol: float = 1e-12, max_iter: int = 10**6) -> np.ndarray:
    """Stationary distribution by power iteration from the uniform vector.

    Iterates ``x <- x @ A`` until the sup-norm change is below ``tol``.
    Raises :class:`ConvergenceError` (naming the cap) if the chain does
    not settle, as happens for periodic chains started off their
    stationary vector.
    """
    a = as_float_matrix(transmat, "transmat")
    if a.shape[0] != a.shape[1]:
        raise InvalidModelError(f"transition matrix must be square, got {a.shape}")
    row_sums = a.sum(axis=1)
    if np.any(np.abs(row_sums - 1.0) > 1e-9) or np.any(a < 0):
        raise InvalidModelError("transition matrix is not row-stochastic")

    x = np.full(a.shape[0], 1.0 / a.shape[0])
    for _ in range(max_iter):
        nxt = x @ a
        if np.max(np.abs(nxt - x)) <= tol:
            nxt = nxt / nxt.sum()
            return _lock(nxt)
        x = nxt
    raise ConvergenceError(
        f"power iteration did not converge within {max_iter} iterations "
        f"(tolerance {tol:g}); the chain may be periodic"
    )


def steady_state_linear(transmat) -> np.ndarray:
    """Stationary distribution by a direct linear solve of ``pi A = pi``.

    Independent cross-check for :func:`steady_state`: solves the
    least-squares system stacking ``A^T - I`` with the normalization
    constraint.
    """
    a = as_float_matrix(transmat, "transmat")
    n = a.shape[0]
    system = np.vstack([a.T - np.eye(n), np.ones((1, n))])
    rhs = np.zeros(n + 1)
    rhs[-1] = 1.0
    solution, *_ = np.linalg.lstsq(system, rhs, rcond=None)
    return _lock(solution)


class ForecastStep(tuple):
    """(year, index, label) triple for one forecast horizon step."""

    __slots__ = ()

    def __new__(cls, year: int, index: int, label: str):
        return super().__new__(cls, (year, index, label))

    @property
    def year(self) -> int:
        return self[0]

    @property
    def index(self) -> int:
        return self[1]

    @property
    def label(self) -> str:
        return self[2]


@dataclass(frozen=True)
class ForecastResult:
    """Year-labeled forecast path: hidden states and emitted observations."""

    states: tuple[ForecastStep, ...]
    observations: tuple[ForecastStep, ...]


def forecast(
    params: HmmParams,
    last_state: int,
    horizon: int,
    mode: str = "argmax",
    seed: int | None = None,
    start_year: int = 1,
    states: StateSpace | None = None,
    alphabet: ObservationAlphabet | None = None,
) -> ForecastResult:
    """Roll the chain forward ``horizon`` steps from ``last_state``.

    ``argmax`` mode follows the most probable transition and emission at
    every step (ties to the lowest index); ``sample`` mode draws from the
    corresponding rows with a seeded generator.  Deterministic given all
    arguments including the seed.
    """
    _require_valid(params)
    require(horizon >= 1, f"horizon must be >= 1, got {horizon}")
    require(0 <= last_state < params.n_states, f"last_state {last_state} out of range")
    require(mode in ("argmax", "sample"), f"unknown forecast mode {mode!r}")
    if states is None:
        states = StateSpace(tuple(f"S{i + 1}" for i in range(params.n_states)))
    if alphabet is None:
        alphabet = ObservationAlphabet(tuple(f"V{i + 1}" for i in range(params.n_symbols)))
    require(states.n_states == params.n_states, "state labels do not match the model")
    require(alphabet.n_symbols == params.n_symbols, "symbol labels do not match the model")

    rng = np.random.default_rng(seed)
    state_steps = []
    obs_steps = []
    current = int(last_state)
    for k in range(horizon):
        year = start_year + k
        if mode == "argmax":
            current = int(np.argmax(params.transmat[current]))
            symbol = int(np.argmax(params.emissionprob[current]))
        else:
            current = int(rng.choice(params.n_states, p=params.transmat[current]))
            symbol = int(rng.choice(params.n_symbols, p=params.emissionprob[current]))
        state_steps.append(ForecastStep(year, current, states.labels[current]))
        obs_steps.append(ForecastStep(year, symbol, alphabet.symbols[symbol]))
    return ForecastResult(tuple(state_steps), tuple(obs_steps))


def match_fraction(decoded, reference) -> float:
    """Fraction of positions where two state sequences agree.

    Refuses length mismatches instead of truncating, so disagreements in
    sequence length surface as errors rather than skewed fractions.
    """
    a = np.asarray(decoded)
    b = np.asarray(reference)
    if a.shape != b.shape:
        raise InputDataError(
            f"sequences differ in length: {a.shape[0]} vs {b.shape[0]}"
        )
    return float(np.mean(a == b))


def next_observation_distribution(params: HmmParams, prefix=None) -> np.ndarray:
    """Predictive distribution of the next symbol given the observed prefix.

    With an empty prefix this is the prior ``startprob @ emissionprob``;
    otherwise the filtered state distribution is pushed through one
    transition and the emission matrix.
    """
    _require_valid(params)
    if prefix is None or len(prefix) == 0:
        return _lock(params.startprob @ params.emissionprob)
    seq = check_observations(prefix, params.n_symbols)
    trellis = forward(params, seq)
    if not np.isfinite(trellis.log_likelihood):
        raise NumericError("observed prefix has zero probability under the model")
    weights = trellis.alpha[-1] @ params.transmat
    return _lock(weights @ params.emissionprob)


def one_step_predictions(params: HmmParams, obs) -> np.ndarray:
    """Argmax one-step-ahead symbol prediction for every position.

    Position ``t`` is predicted from observations ``obs[:t]`` only (the
    first position uses the prior), so the result is a genuine
    walk-forward prediction of the whole series.
    """
    _require_valid(params)
    seq = check_observations(obs, params.n_symbols)
    pi, a, b = params.startprob, params.transmat, params.emissionprob
    t = seq.shape[0]

    predictions = np.zeros(t, dtype=np.intp)
    weights = pi
    for step in range(t):
        predictions[step] = int(np.argmax(weights @ b))
        row = weights * b[:, seq[step]]
        total = row.sum()
        if total <= 0.0:
            raise NumericError(
                f"observed prefix through position {step} has zero probability "
                "under the model"
            )
        weights = (row / total) @ a
    return _lock(predictions)


class DiscreteHMM(BaseEstimator):
    """Discrete-emission HMM with a scikit-learn estimator surface.

    ``fit`` runs Baum-Welch on a single observation sequence, ``score``
    returns the forward log-likelihood, ``predict``/``decode`` run
    Viterbi and ``predict_proba`` returns the state posteriors.

    Parameters
    ----------
    n_states, n_symbols : int
        Model dimensions; ignored for arrays that are given explicitly.
    startprob, transmat, emissionprob : array-like, optional
        Initial parameter values; uniform where omitted.
    n_iter : int
        Baum-Welch iteration cap.
    tol : float
        Stop once the log-likelihood gain drops below this.
    update_startprob : bool
        Re-estimate the initial distribution each iteration (off by
        default; only the transition and emission matrices are updated).
    """

    def __init__(
        self,
        n_states: int = 4,
        n_symbols: int = 3,
        startprob=None,
        transmat=None,
        emissionprob=None,
        n_iter: int = 1000,
        tol: float = 1e-6,
        update_startprob: bool = False,
    ):
        self.n_states = n_states
        self.n_symbols = n_symbols
        self.startprob = startprob
        self.transmat = transmat
        self.emissionprob = emissionprob
        self.n_iter = n_iter
        self.tol = tol
        self.update_startprob = update_startprob

    def _initial_params(self) -> HmmParams:
        n, m = self.n_states, self.n_symbols
        pi = np.full(n, 1.0 / n) if self.startprob is None else self.startprob
        a = np.full((n, n), 1.0 / n) if self.transmat is None else self.transmat
        b = np.full((n, m), 1.0 / m) if self.emissionprob is None else self.emissionprob
        params = HmmParams(pi, a, b)
        return params

    def fit(self, X, y=None):
        report = baum_welch(
            self._initial_params(),
            X,
            max_iter=self.n_iter,
            tol=self.tol,
            update_startprob=self.update_startprob,
        )
        self.params_ = report.params
        self.startprob_ = report.params.startprob
        self.transmat_ = report.params.transmat
        self.emissionprob_ = report.params.emissionprob
        self.log_likelihoods_ = report.log_likelihoods
        self.n_iter_ = report.iterations
        self.converged_ = report.converged
        self.training_report_ = report
        return self

    def _fitted_params(self) -> HmmParams:
        if not hasattr(self, "params_"):
            raise NotFittedError("this DiscreteHMM instance is not fitted yet")
        return self.params_

    def score(self, X, y=None) -> float:
        return forward(self._fitted_params(), X).log_likelihood

    def decode(self, X) -> tuple[float, np.ndarray]:
        path, log_prob = viterbi(self._fitted_params(), X)
        return log_prob, path

    def predict(self, X) -> np.ndarray:
        return self.decode(X)[1]

    def predict_proba(self, X) -> np.ndarray:
        return posteriors(self._fitted_params(), X).gamma

    def forecast(
        self,
        last_state: int,
        horizon: int,
        mode: str = "argmax",
        seed: int | None = None,
        start_year: int = 1,
        states: StateSpace | None = None,
        alphabet: ObservationAlphabet | None = None,
    ) -> ForecastResult:
        return forecast(
            self._fitted_params(),
            last_state,
            horizon,
            mode=mode,
            seed=seed,
            start_year=start_year,
            states=states,
            alphabet=alphabet,
        )
