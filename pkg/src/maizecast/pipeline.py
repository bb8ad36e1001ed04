"""Shared run logic behind the CLI commands: series preparation, the
HMM training pipeline, walk-forward prediction and the side-by-side
model comparison.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import metrics as metrics_mod
from .estimation import (
    CountEstimates,
    DiscretizedSeries,
    InitialEstimate,
    Thresholds,
    count_estimates,
    discretize,
    estimate_initial_params,
)
from .exceptions import ConfigError, NumericError
from .hmm import (
    DEFAULT_ALPHABET,
    DEFAULT_STATES,
    HmmParams,
    TrainingReport,
    baum_welch,
    match_fraction,
    next_observation_distribution,
    one_step_predictions,
    viterbi,
)
from .lstm import LstmConfig, SeriesTrainingReport, train_on_values
from .validation import require

__all__ = [
    "prepare_series",
    "PreparedInput",
    "HmmRunResult",
    "train_hmm_pipeline",
    "split_point",
    "symbol_values",
    "hmm_walk_forward",
    "CompareRow",
    "CompareResult",
    "compare_models",
    "fig_model_vs_actual",
    "fig_decoded_states",
]

#: Numeric codes for the yield levels L/M/H; starts at 1 so percentage
#: errors stay well-defined.
OBSERVATION_CODES = np.arange(1, DEFAULT_ALPHABET.n_symbols + 1, dtype=float)


@dataclass(frozen=True)
class PreparedInput:
    """A loaded input normalized for modeling: the labeled series, the
    numeric value matrix the LSTM consumes (target in column 0) and
    whether the source was raw continuous records."""

    series: DiscretizedSeries
    values: np.ndarray
    raw_mode: bool


def prepare_series(data, thresholds: Thresholds | None = None, climate_features: bool = False) -> PreparedInput:
    """Normalize either input schema for the model pipelines.

    Labeled input uses the observation codes (1..3) as the numeric
    series; raw input keeps the continuous yield (plus rainfall and
    temperature columns when ``climate_features`` is set) and is
    discretized for the HMM side.
    """
    if isinstance(data, DiscretizedSeries):
        require(
            not climate_features,
            "climate features require raw-mode input (rainfall/temperature columns)",
        )
        values = OBSERVATION_CODES[data.observations][:, None]
        return PreparedInput(series=data, values=values, raw_mode=False)

    records = list(data)
    series = discretize(records, thresholds)
    columns = [np.array([r.maize_yield for r in records], dtype=float)]
    if climate_features:
        columns.append(np.array([r.rainfall for r in records], dtype=float))
        columns.append(np.array([r.temperature for r in records], dtype=float))
    return PreparedInput(series=series, values=np.column_stack(columns), raw_mode=True)


@dataclass(frozen=True)
class HmmRunResult:
    """Everything the HMM training pipeline produces."""

    counts: CountEstimates
    estimate: InitialEstimate
    init_params: HmmParams
    report: TrainingReport


def train_hmm_pipeline(
    series: DiscretizedSeries,
    max_iter: int = 1000,
    tol: float = 1e-6,
    smoothing: float = 0.0,
    init_startprob: str = "uniform",
) -> HmmRunResult:
    """Counts -> count-based estimates -> Baum-Welch.

    ``init_startprob`` picks the EM starting distribution: ``uniform``
    (the convention used for the reported trained model) or ``counts``
    (the occupancy fractions).  The count-based estimate is kept in the
    result either way.
    """
    require(init_startprob in ("uniform", "counts"), f"unknown init_startprob {init_startprob!r}")
    counts = count_estimates(series)
    estimate = estimate_initial_params(counts, smoothing)
    if init_startprob == "uniform":
        n = estimate.params.n_states
        init = HmmParams(
            np.full(n, 1.0 / n), estimate.params.transmat, estimate.params.emissionprob
        )
    else:
        init = estimate.params
    report = baum_welch(init, series.observations, max_iter=max_iter, tol=tol)
    return HmmRunResult(counts, estimate, init, report)


def split_point(n_years: int, window_length: int, train_fraction: float) -> tuple[int, int]:
    """First held-out year index and the held-out length, using the
    shared rule: train samples = floor(train_fraction * (T - window))."""
    n_samples = n_years - window_length
    require(n_samples >= 2, f"series too short for window_length {window_length}")
    n_train = int(np.floor(train_fraction * n_samples))
    require(1 <= n_train < n_samples, "train fraction leaves no usable split")
    first_test = window_length + n_train
    return first_test, n_years - first_test


def symbol_values(prepared: PreparedInput, first_test: int) -> np.ndarray:
    """Numeric value assigned to each observation symbol.

    Labeled mode: the fixed codes 1..3.  Raw mode: the mean training-
    period yield within each symbol's bin (falling back to the overall
    training mean for bins unseen before ``first_test``), so symbol
    predictions can be scored on the continuous scale.
    """
    if not prepared.raw_mode:
        return OBSERVATION_CODES.copy()
    train_targets = prepared.values[:first_test, 0]
    train_symbols = prepared.series.observations[:first_test]
    fallback = float(train_targets.mean())
    out = np.full(DEFAULT_ALPHABET.n_symbols, fallback)
    for k in range(DEFAULT_ALPHABET.n_symbols):
        mask = train_symbols == k
        if mask.any():
            out[k] = float(train_targets[mask].mean())
    return out


def hmm_walk_forward(
    params: HmmParams, observations: np.ndarray, first_test: int
) -> np.ndarray:
    """Argmax one-step-ahead symbol predictions for each held-out year,
    conditioning only on observations before that year."""
    preds = []
    for t in range(first_test, observations.shape[0]):
        dist = next_observation_distribution(params, observations[:t])
        preds.append(int(np.argmax(dist)))
    return np.array(preds, dtype=np.intp)


@dataclass(frozen=True)
class CompareRow:
    """One comparison-table row; ``corr`` is None when the correlation is
    undefined (constant series)."""

    model: str
    mape: float
    rmse: float
    corr: float | None
    sem: float
    mse: float

    def format(self, precision: int = 4) -> str:
        corr = "undefined" if self.corr is None else f"{self.corr:.{precision}f}"
        return ",".join(
            [
                self.model,
                f"{self.mape:.{precision}f}",
                f"{self.rmse:.{precision}f}",
                corr,
                f"{self.sem:.{precision}f}",
                f"{self.mse:.{precision}f}",
            ]
        )


COMPARE_HEADER = "model,MAPE,RMSE,Corr,SEM,MSE"


def _metrics_row(model: str, actual: np.ndarray, predicted: np.ndarray) -> tuple[CompareRow, list[str]]:
    notes: list[str] = []
    mse_value = metrics_mod.mse(actual, predicted)
    try:
        corr = metrics_mod.pearson_corr(actual, predicted)
    except NumericError as exc:
        corr = None
        notes.append(f"note: correlation is undefined for {model}: {exc}")
    return (
        CompareRow(
            model=model,
            mape=metrics_mod.mape(actual, predicted),
            rmse=float(np.sqrt(mse_value)),
            corr=corr,
            sem=metrics_mod.sem(actual, predicted),
            mse=mse_value,
        ),
        notes,
    )


@dataclass(frozen=True)
class CompareResult:
    rows: tuple[CompareRow, ...]
    winner: str
    notes: tuple[str, ...]
    actual: np.ndarray
    hmm_predictions: np.ndarray
    lstm_predictions: np.ndarray
    first_test: int
    hmm_result: HmmRunResult
    lstm_result: SeriesTrainingReport

    def table_lines(self) -> list[str]:
        lines = [COMPARE_HEADER]
        lines += [row.format() for row in self.rows]
        lines.append(f"best={self.winner} by RMSE")
        return lines


def compare_models(
    prepared: PreparedInput,
    lstm_config: LstmConfig,
    max_iter: int = 1000,
    tol: float = 1e-6,
    smoothing: float = 0.0,
    init_startprob: str = "uniform",
) -> CompareResult:
    """Train both models and score them on the identical held-out years.

    The held-out targets are the numeric series values for the years
    after the shared split point; the LSTM predicts them directly and
    the HMM predicts symbols one step ahead, decoded to the same scale.
    The winner is the model with the lower RMSE.
    """
    series = prepared.series
    first_test, n_test = split_point(
        len(series), lstm_config.window_length, lstm_config.train_fraction
    )
    actual = prepared.values[first_test:, 0].copy()

    lstm_result = train_on_values(prepared.values, lstm_config)
    if lstm_result.first_test_index != first_test:
        raise ConfigError(
            "internal split mismatch between the two model pipelines; "
            f"{lstm_result.first_test_index} vs {first_test}"
        )

    train_series = DiscretizedSeries(
        years=series.years[:first_test],
        states=series.states[:first_test],
        observations=series.observations[:first_test],
        thresholds=series.thresholds,
    )
    hmm_result = train_hmm_pipeline(
        train_series,
        max_iter=max_iter,
        tol=tol,
        smoothing=smoothing,
        init_startprob=init_startprob,
    )
    decode_values = symbol_values(prepared, first_test)
    hmm_symbols = hmm_walk_forward(
        hmm_result.report.params, series.observations, first_test
    )
    hmm_predictions = decode_values[hmm_symbols]

    hmm_row, hmm_notes = _metrics_row("hmm", actual, hmm_predictions)
    lstm_row, lstm_notes = _metrics_row("lstm", actual, lstm_result.heldout_predictions)
    winner = "hmm" if hmm_row.rmse <= lstm_row.rmse else "lstm"
    return CompareResult(
        rows=(hmm_row, lstm_row),
        winner=winner,
        notes=tuple(hmm_notes + lstm_notes),
        actual=actual,
        hmm_predictions=hmm_predictions,
        lstm_predictions=lstm_result.heldout_predictions,
        first_test=first_test,
        hmm_result=hmm_result,
        lstm_result=lstm_result,
    )


def fig_model_vs_actual(params: HmmParams, series: DiscretizedSeries) -> list[tuple[int, str, str]]:
    """Rows of (year, actual observation, model observation), the model
    observation being the walk-forward one-step prediction."""
    predictions = one_step_predictions(params, series.observations)
    symbols = DEFAULT_ALPHABET.symbols
    return [
        (year, symbols[actual], symbols[pred])
        for year, actual, pred in zip(series.years, series.observations, predictions)
    ]


def fig_decoded_states(params: HmmParams, series: DiscretizedSeries) -> tuple[list[tuple[int, str, str]], float]:
    """Rows of (year, recorded state, decoded state) plus the agreement
    fraction between the two label sequences."""
    path, _ = viterbi(params, series.observations)
    labels = DEFAULT_STATES.labels
    rows = [
        (year, labels[recorded], labels[decoded])
        for year, recorded, decoded in zip(series.years, series.states, path)
    ]
    return rows, match_fraction(path, series.states)
