"""Command-line toolchain: ingestion, training, comparison, forecasting,
steady-state reports and plot-data emission.

Exit codes: 0 success, 2 input/parse errors, 3 numeric/convergence
errors, 4 configuration errors.  Every pipeline failure message names
the stage it came from.
"""

from __future__ import annotations

import functools
import json
import sys
from contextlib import contextmanager
from pathlib import Path

import click
import numpy as np

from . import reference
from .datasets import bundled_dataset_path
from .estimation import DiscretizedSeries, Thresholds
from .exceptions import ConfigError, InputDataError, MaizecastError
from .hmm import (
    DEFAULT_ALPHABET,
    DEFAULT_STATES,
    forecast as hmm_forecast,
    steady_state,
    steady_state_linear,
)
from .io import (
    ModelArchive,
    hmm_params_from_payload,
    hmm_params_to_payload,
    load_archive,
    load_csv,
    lstm_params_to_payload,
    save_archive,
    thresholds_to_payload,
)
from .lstm import LstmConfig, train_on_values
from .pipeline import (
    HmmRunResult,
    compare_models,
    fig_decoded_states,
    fig_model_vs_actual,
    prepare_series,
    train_hmm_pipeline,
)
from .validation import require


@contextmanager
def stage(name: str):
    """Tag errors escaping this block with exactly one stage name."""
    try:
        yield
    except MaizecastError as exc:
        message = str(exc)
        if message.startswith("["):
            raise
        raise type(exc)(f"[{name}] {message}") from exc


def guarded(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except MaizecastError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(exc.exit_code)

    return wrapper


def _resolve_input(path: str) -> Path:
    if path == "bundled":
        return bundled_dataset_path()
    resolved = Path(path)
    if not resolved.exists():
        raise InputDataError(f"input file not found: {resolved}")
    return resolved


def _thresholds(rainfall_split, temperature_split, yield_cuts) -> Thresholds | None:
    cuts = None
    if yield_cuts is not None:
        parts = yield_cuts.split(",")
        require(
            len(parts) == 2,
            f"--yield-cuts expects two comma-separated numbers, got {yield_cuts!r}",
        )
        try:
            cuts = (float(parts[0]), float(parts[1]))
        except ValueError:
            raise ConfigError(f"--yield-cuts expects numbers, got {yield_cuts!r}")
    if rainfall_split is None and temperature_split is None and cuts is None:
        return None
    return Thresholds(rainfall_split, temperature_split, cuts)


def _load_prepared(input_path, rainfall_split, temperature_split, yield_cuts, climate_features=False):
    with stage("config"):
        thresholds = _thresholds(rainfall_split, temperature_split, yield_cuts)
    with stage("load"):
        data = load_csv(_resolve_input(input_path))
    with stage("discretize"):
        return prepare_series(data, thresholds=thresholds, climate_features=climate_features)


def _write_lines(path: Path, lines) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _echo_lines(lines) -> None:
    for line in lines:
        click.echo(line)


def _input_argument(fn):
    return click.argument("input_path", metavar="INPUT")(fn)


def _threshold_options(fn):
    fn = click.option("--rainfall-split", type=float, default=None, help="Override the rainfall Low/High cut (raw mode).")(fn)
    fn = click.option("--temperature-split", type=float, default=None, help="Override the temperature Low/High cut (raw mode).")(fn)
    fn = click.option("--yield-cuts", type=str, default=None, help="Override the yield tercile cuts, e.g. '9.5,11.2' (raw mode).")(fn)
    return fn


def _hmm_options(fn):
    fn = click.option("--max-iter", type=int, default=1000, show_default=True, help="Baum-Welch iteration cap.")(fn)
    fn = click.option("--tol", type=float, default=1e-6, show_default=True, help="Log-likelihood convergence tolerance.")(fn)
    fn = click.option("--smoothing", type=float, default=0.0, show_default=True, help="Add-kappa smoothing for the count-based estimates.")(fn)
    fn = click.option(
        "--init-startprob",
        type=click.Choice(["uniform", "counts"]),
        default="uniform",
        show_default=True,
        help="Initial distribution used to start Baum-Welch.",
    )(fn)
    return fn


def _lstm_options(fn):
    fn = click.option("--hidden-size", type=int, default=32, show_default=True)(fn)
    fn = click.option("--window-length", type=int, default=4, show_default=True)(fn)
    fn = click.option("--epochs", type=int, default=200, show_default=True)(fn)
    fn = click.option("--learning-rate", type=float, default=1e-3, show_default=True)(fn)
    fn = click.option("--batch-size", type=int, default=None, help="Mini-batch size; full batch when omitted.")(fn)
    fn = click.option("--dense-size", type=int, default=None, help="Optional tanh dense layer between the LSTM and the output.")(fn)
    fn = click.option("--train-fraction", type=float, default=0.8, show_default=True)(fn)
    fn = click.option("--seed", type=int, default=0, show_default=True)(fn)
    fn = click.option("--climate-features", is_flag=True, help="Feed rainfall/temperature alongside yield (raw mode only).")(fn)
    return fn


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option(
    "--config",
    "config_path",
    type=str,
    default=None,
    help="JSON file whose sections provide per-command option defaults.",
)
@click.pass_context
def main(ctx, config_path):
    """Maize-yield forecasting toolkit: discrete HMM vs from-scratch LSTM.

    INPUT arguments accept a CSV path or the literal ``bundled`` for the
    packaged 1990-2021 Nigeria series.
    """
    if config_path is not None:
        path = Path(config_path)
        if not path.exists():
            click.echo(f"error: [config] config file not found: {path}", err=True)
            sys.exit(ConfigError.exit_code)
        try:
            defaults = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            click.echo(f"error: [config] config file is not valid JSON: {exc}", err=True)
            sys.exit(ConfigError.exit_code)
        ctx.default_map = defaults


@main.command()
@_input_argument
@_threshold_options
@click.option("--out", "out_path", type=str, default=None, help="Write the labeled series to this CSV.")
@guarded
def ingest(input_path, rainfall_split, temperature_split, yield_cuts, out_path):
    """Parse (and, for raw input, discretize) a yearly series."""
    prepared = _load_prepared(input_path, rainfall_split, temperature_split, yield_cuts)
    series = prepared.series
    click.echo(f"mode: {'raw' if prepared.raw_mode else 'labeled'}")
    click.echo(f"rows: {len(series)} ({series.years[0]}-{series.years[-1]})")
    if series.thresholds is not None:
        t = series.thresholds
        click.echo(
            f"thresholds: rainfall<= {t.rainfall_split:g}, temperature<= {t.temperature_split:g}, "
            f"yield cuts ({t.yield_cuts[0]:g}, {t.yield_cuts[1]:g})"
        )
    occupancy = np.bincount(series.states, minlength=series.n_states)
    click.echo(
        "state occupancy: "
        + ", ".join(f"{lbl}={c}" for lbl, c in zip(DEFAULT_STATES.labels, occupancy))
    )
    counts = np.bincount(series.observations, minlength=series.n_symbols)
    click.echo(
        "observation counts: "
        + ", ".join(f"{s}={c}" for s, c in zip(DEFAULT_ALPHABET.symbols, counts))
    )
    if out_path:
        lines = ["year,state,observation"]
        lines += [
            f"{year},{state + 1},{DEFAULT_ALPHABET.symbols[obs]}"
            for year, state, obs in zip(series.years, series.states, series.observations)
        ]
        _write_lines(Path(out_path), lines)
        click.echo(f"wrote {out_path}")


def _hmm_archive(result: HmmRunResult, series: DiscretizedSeries, smoothing, max_iter, tol, init_startprob) -> ModelArchive:
    report = result.report
    payload = {
        "state_labels": list(DEFAULT_STATES.labels),
        "symbol_labels": list(DEFAULT_ALPHABET.symbols),
        "counted": {
            **hmm_params_to_payload(result.estimate.params),
            "transition_counts": result.counts.transition_counts.tolist(),
            "emission_counts": result.counts.emission_counts.tolist(),
            "state_counts": result.counts.state_counts.tolist(),
        },
        "trained": hmm_params_to_payload(report.params),
        "final_state": int(series.states[-1]),
        "final_year": int(series.years[-1]),
        "thresholds": thresholds_to_payload(series.thresholds),
        "smoothing": smoothing,
    }
    metadata = {
        "iterations": report.iterations,
        "converged": report.converged,
        "log_likelihood": report.log_likelihoods[-1],
        "max_iter": max_iter,
        "tol": tol,
        "init_startprob": init_startprob,
        "frozen_rows": [list(entry) for entry in report.frozen_rows],
    }
    return ModelArchive(kind="hmm", payload=payload, metadata=metadata)


def _echo_hmm_summary(result: HmmRunResult) -> None:
    report = result.report
    counted = result.estimate.params
    click.echo(f"counted startprob: {np.array2string(counted.startprob, precision=4)}")
    click.echo(
        f"baum-welch: iterations={report.iterations} converged={report.converged} "
        f"log-likelihood={report.log_likelihoods[-1]:.6f}"
    )
    if result.estimate.uniform_transmat_rows or result.estimate.uniform_emission_rows:
        click.echo(
            "note: zero-count rows set uniform: "
            f"transmat {list(result.estimate.uniform_transmat_rows)}, "
            f"emission {list(result.estimate.uniform_emission_rows)}"
        )
    if report.frozen_rows:
        click.echo(f"note: rows frozen during re-estimation: {list(report.frozen_rows)}")
    _echo_lines(reference.matrix_diagnostics("transition matrix", counted.transmat, reference.REPORTED_TRANSITION))
    _echo_lines(reference.emission_count_diagnostics(result.counts.emission_counts))
    _echo_lines(reference.trained_model_diagnostics(report.params))


@main.command("train-hmm")
@_input_argument
@_threshold_options
@_hmm_options
@click.option("--out-dir", type=str, default=".", show_default=True, help="Directory for the model archive.")
@guarded
def train_hmm(input_path, rainfall_split, temperature_split, yield_cuts, max_iter, tol, smoothing, init_startprob, out_dir):
    """Count-estimate and Baum-Welch-train the HMM, then archive it."""
    with stage("config"):
        require(max_iter >= 1, f"--max-iter must be >= 1, got {max_iter}")
        require(tol > 0, f"--tol must be > 0, got {tol}")
        require(smoothing >= 0, f"--smoothing must be >= 0, got {smoothing}")
    prepared = _load_prepared(input_path, rainfall_split, temperature_split, yield_cuts)
    with stage("train"):
        result = train_hmm_pipeline(
            prepared.series,
            max_iter=max_iter,
            tol=tol,
            smoothing=smoothing,
            init_startprob=init_startprob,
        )
    _echo_hmm_summary(result)
    out = Path(out_dir) / "hmm_model.json"
    with stage("archive"):
        out.parent.mkdir(parents=True, exist_ok=True)
        save_archive(_hmm_archive(result, prepared.series, smoothing, max_iter, tol, init_startprob), out)
    click.echo(f"wrote {out}")


def _lstm_config(hidden_size, window_length, epochs, learning_rate, batch_size, dense_size, train_fraction, seed, input_size) -> LstmConfig:
    with stage("config"):
        return LstmConfig(
            hidden_size=hidden_size,
            input_size=input_size,
            window_length=window_length,
            epochs=epochs,
            learning_rate=learning_rate,
            batch_size=batch_size,
            dense_size=dense_size,
            train_fraction=train_fraction,
            seed=seed,
        )


def _lstm_archive(result, config: LstmConfig, series: DiscretizedSeries) -> ModelArchive:
    report = result.report
    payload = {
        "config": {
            "hidden_size": config.hidden_size,
            "input_size": config.input_size,
            "window_length": config.window_length,
            "epochs": config.epochs,
            "learning_rate": config.learning_rate,
            "beta_1": config.beta_1,
            "beta_2": config.beta_2,
            "epsilon": config.epsilon,
            "seed": config.seed,
            "train_fraction": config.train_fraction,
            "batch_size": config.batch_size,
            "dense_size": config.dense_size,
        },
        "weights": lstm_params_to_payload(report.params),
        "scaling": {
            "column_min": result.column_min.tolist(),
            "column_max": result.column_max.tolist(),
        },
        "loss_trace": {
            "train": list(report.train_losses),
            "validation": list(report.val_losses),
        },
        "heldout": {
            "years": [int(y) for y in series.years[result.first_test_index :]],
            "predictions": result.heldout_predictions.tolist(),
            "targets": result.heldout_targets.tolist(),
        },
    }
    metadata = {
        "epochs": config.epochs,
        "seed": config.seed,
        "n_train": report.n_train,
        "n_test": report.n_test,
        "final_train_loss": report.train_losses[-1],
        "final_val_loss": report.val_losses[-1] if report.val_losses else None,
    }
    return ModelArchive(kind="lstm", payload=payload, metadata=metadata)


def _loss_trace_lines(train_losses, val_losses) -> list[str]:
    lines = ["epoch,train_loss,validation_loss"]
    for i, train_loss in enumerate(train_losses, start=1):
        val = f"{val_losses[i - 1]!r}" if i <= len(val_losses) else ""
        lines.append(f"{i},{train_loss!r},{val}")
    return lines


@main.command("train-lstm")
@_input_argument
@_threshold_options
@_lstm_options
@click.option("--out-dir", type=str, default=".", show_default=True, help="Directory for the archive and loss trace.")
@guarded
def train_lstm(input_path, rainfall_split, temperature_split, yield_cuts, hidden_size, window_length, epochs, learning_rate, batch_size, dense_size, train_fraction, seed, climate_features, out_dir):
    """Train the from-scratch LSTM on the chronological 80/20 split."""
    prepared = _load_prepared(input_path, rainfall_split, temperature_split, yield_cuts, climate_features)
    config = _lstm_config(hidden_size, window_length, epochs, learning_rate, batch_size, dense_size, train_fraction, seed, prepared.values.shape[1])
    with stage("train"):
        result = train_on_values(prepared.values, config)
    report = result.report
    click.echo(
        f"samples: {report.n_train} train / {report.n_test} held out "
        f"(window {config.window_length})"
    )
    click.echo(
        f"final losses: train={report.train_losses[-1]:.6f} "
        f"validation={report.val_losses[-1]:.6f}"
    )
    ref = reference.REPORTED_LSTM_TRAINING
    click.echo(
        f"note: reported reference figures: loss {ref['loss']:.4f}, "
        f"val_loss {ref['val_loss']:.4f}, test accuracy {ref['test_accuracy']:.4f} "
        "(not reproducible from the bundled series; reference only)"
    )
    out_dir = Path(out_dir)
    with stage("archive"):
        out_dir.mkdir(parents=True, exist_ok=True)
        save_archive(_lstm_archive(result, config, prepared.series), out_dir / "lstm_model.json")
        _write_lines(out_dir / "training_loss.csv", _loss_trace_lines(report.train_losses, report.val_losses))
    click.echo(f"wrote {out_dir / 'lstm_model.json'}")
    click.echo(f"wrote {out_dir / 'training_loss.csv'}")


@main.command()
@_input_argument
@_threshold_options
@_hmm_options
@_lstm_options
@click.option("--out-dir", type=str, default=".", show_default=True, help="Directory for the comparison table and archives.")
@guarded
def compare(input_path, rainfall_split, temperature_split, yield_cuts, max_iter, tol, smoothing, init_startprob, hidden_size, window_length, epochs, learning_rate, batch_size, dense_size, train_fraction, seed, climate_features, out_dir):
    """Train both models, score them on identical held-out years and
    declare the winner by RMSE."""
    with stage("config"):
        require(max_iter >= 1, f"--max-iter must be >= 1, got {max_iter}")
        require(tol > 0, f"--tol must be > 0, got {tol}")
        require(smoothing >= 0, f"--smoothing must be >= 0, got {smoothing}")
    prepared = _load_prepared(input_path, rainfall_split, temperature_split, yield_cuts, climate_features)
    config = _lstm_config(hidden_size, window_length, epochs, learning_rate, batch_size, dense_size, train_fraction, seed, prepared.values.shape[1])
    with stage("evaluate"):
        result = compare_models(
            prepared,
            config,
            max_iter=max_iter,
            tol=tol,
            smoothing=smoothing,
            init_startprob=init_startprob,
        )
    lines = result.table_lines()
    _echo_lines(lines)
    _echo_lines(result.notes)
    _echo_lines(reference.metrics_diagnostics())

    out_dir = Path(out_dir)
    with stage("archive"):
        out_dir.mkdir(parents=True, exist_ok=True)
        _write_lines(out_dir / "compare.csv", lines)
        save_archive(
            _hmm_archive(result.hmm_result, prepared.series, smoothing, max_iter, tol, init_startprob),
            out_dir / "hmm_model.json",
        )
        save_archive(_lstm_archive(result.lstm_result, config, prepared.series), out_dir / "lstm_model.json")
        _write_lines(
            out_dir / "training_loss.csv",
            _loss_trace_lines(result.lstm_result.report.train_losses, result.lstm_result.report.val_losses),
        )
    click.echo(f"wrote {out_dir / 'compare.csv'}")


@main.command()
@click.argument("archive_path", metavar="ARCHIVE")
@click.option("--horizon", type=int, required=True, help="Number of years to forecast.")
@click.option("--sample", is_flag=True, help="Sample transitions/emissions instead of taking the argmax.")
@click.option("--seed", type=int, default=0, show_default=True, help="Generator seed for --sample.")
@click.option("--out", "out_path", type=str, default=None, help="Also write the forecast table to this file.")
@guarded
def forecast(archive_path, horizon, sample, seed, out_path):
    """Forecast future states/observations from a trained HMM archive."""
    with stage("config"):
        require(horizon >= 1, f"--horizon must be >= 1, got {horizon}")
    with stage("load"):
        archive = load_archive(archive_path)
        require(
            archive.kind == "hmm",
            f"archive holds a {archive.kind!r} model; forecasting needs an hmm archive",
        )
        params = hmm_params_from_payload(archive.payload["trained"])
        last_state = int(archive.payload["final_state"])
        start_year = int(archive.payload["final_year"]) + 1
    with stage("forecast"):
        result = hmm_forecast(
            params,
            last_state,
            horizon,
            mode="sample" if sample else "argmax",
            seed=seed,
            start_year=start_year,
            states=DEFAULT_STATES,
            alphabet=DEFAULT_ALPHABET,
        )
    lines = ["year,state,state_label,observation,observation_label"]
    for s, o in zip(result.states, result.observations):
        lines.append(f"{s.year},{s.index + 1},{s.label},{o.index + 1},{o.label}")
    _echo_lines(lines)
    _echo_lines(reference.forecast_diagnostics([s.index + 1 for s in result.states]))
    if out_path:
        _write_lines(Path(out_path), lines)
        click.echo(f"wrote {out_path}")


@main.command("steady-state")
@click.argument("archive_path", metavar="ARCHIVE")
@guarded
def steady_state_cmd(archive_path):
    """Stationary distributions of the count-based and trained matrices."""
    with stage("load"):
        archive = load_archive(archive_path)
        require(
            archive.kind == "hmm",
            f"archive holds a {archive.kind!r} model; steady-state needs an hmm archive",
        )
        counted = hmm_params_from_payload(archive.payload["counted"])
        trained = hmm_params_from_payload(archive.payload["trained"])
    with stage("steady-state"):
        results = {}
        for name, params in (("count-based", counted), ("trained", trained)):
            vector = steady_state(params.transmat)
            residual = float(np.max(np.abs(vector @ params.transmat - vector)))
            cross = float(np.max(np.abs(vector - steady_state_linear(params.transmat))))
            results[name] = vector
            click.echo(
                f"{name}: {np.array2string(vector, precision=4)} "
                f"(residual {residual:.2e}, linear-solve gap {cross:.2e})"
            )
    _echo_lines(reference.steady_state_diagnostics(results["count-based"], results["trained"]))


@main.command()
@_input_argument
@click.option("--hmm-archive", type=str, required=True, help="Archive produced by train-hmm or compare.")
@click.option("--lstm-archive", type=str, default=None, help="Optional LSTM archive for the loss-trace file.")
@click.option("--out-dir", type=str, default=".", show_default=True, help="Directory for the plot-data files.")
@guarded
def plot(input_path, hmm_archive, lstm_archive, out_dir):
    """Emit plot-ready delimited files (rendered by external tools)."""
    with stage("load"):
        data = load_csv(_resolve_input(input_path))
        prepared = prepare_series(data)
        if not Path(hmm_archive).exists():
            raise InputDataError(
                f"hmm archive not found: {hmm_archive}; run train-hmm first"
            )
        archive = load_archive(hmm_archive)
        require(
            archive.kind == "hmm",
            f"archive holds a {archive.kind!r} model; plot needs an hmm archive",
        )
        params = hmm_params_from_payload(archive.payload["trained"])
    series = prepared.series
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    with stage("plot"):
        rows = fig_model_vs_actual(params, series)
        lines = ["year,actual_observation,model_observation"]
        lines += [f"{y},{a},{m}" for y, a, m in rows]
        _write_lines(out_dir / "model_vs_actual.csv", lines)
        click.echo(f"wrote {out_dir / 'model_vs_actual.csv'}")

        rows, agreement = fig_decoded_states(params, series)
        lines = ["year,recorded_state,decoded_state"]
        lines += [f"{y},{r},{d}" for y, r, d in rows]
        _write_lines(out_dir / "decoded_states.csv", lines)
        click.echo(f"wrote {out_dir / 'decoded_states.csv'}")
        click.echo(f"decoded/recorded agreement: {agreement:.4f}")
        click.echo(
            f"note: reported agreement figure: {reference.REPORTED_MATCH_FRACTION}"
        )
        decoded_one_based = [DEFAULT_STATES.index(d) + 1 for _, _, d in rows]
        _echo_lines(reference.decode_diagnostics(decoded_one_based))

        if lstm_archive is not None:
            if not Path(lstm_archive).exists():
                raise InputDataError(
                    f"lstm archive not found: {lstm_archive}; run train-lstm first"
                )
            lstm = load_archive(lstm_archive)
            require(
                lstm.kind == "lstm",
                f"archive holds a {lstm.kind!r} model; expected an lstm archive",
            )
            trace = lstm.payload["loss_trace"]
            _write_lines(
                out_dir / "training_loss.csv",
                _loss_trace_lines(trace["train"], trace["validation"]),
            )
            click.echo(f"wrote {out_dir / 'training_loss.csv'}")


if __name__ == "__main__":
    main()
