"""maizecast: compare a discrete hidden Markov model against a
from-scratch LSTM on yearly maize-yield series, then decode, analyze
and forecast with the stronger model.
"""

from .estimation import (
    ClimateYieldRecord,
    CountEstimates,
    DiscretizedSeries,
    InitialEstimate,
    Thresholds,
    count_estimates,
    discretize,
    estimate_initial_params,
)
from .exceptions import (
    ConfigError,
    ConvergenceError,
    InputDataError,
    InvalidModelError,
    MaizecastError,
    NumericError,
)
from .hmm import (
    DEFAULT_ALPHABET,
    DEFAULT_STATES,
    DiscreteHMM,
    ForecastResult,
    HmmParams,
    ObservationAlphabet,
    PosteriorStats,
    StateSpace,
    TrainingReport,
    TrellisResult,
    backward,
    baum_welch,
    forecast,
    forward,
    likelihood_bruteforce,
    match_fraction,
    next_observation_distribution,
    one_step_predictions,
    posteriors,
    steady_state,
    steady_state_linear,
    validate_params,
    viterbi,
)
from .lstm import (
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
from .metrics import MetricsReport, evaluate, mape, mse, pearson_corr, rmse, sem

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # hmm
    "DEFAULT_ALPHABET",
    "DEFAULT_STATES",
    "DiscreteHMM",
    "ForecastResult",
    "HmmParams",
    "ObservationAlphabet",
    "PosteriorStats",
    "StateSpace",
    "TrainingReport",
    "TrellisResult",
    "backward",
    "baum_welch",
    "forecast",
    "forward",
    "likelihood_bruteforce",
    "match_fraction",
    "next_observation_distribution",
    "one_step_predictions",
    "posteriors",
    "steady_state",
    "steady_state_linear",
    "validate_params",
    "viterbi",
    # estimation
    "ClimateYieldRecord",
    "CountEstimates",
    "DiscretizedSeries",
    "InitialEstimate",
    "Thresholds",
    "count_estimates",
    "discretize",
    "estimate_initial_params",
    # lstm
    "AdamState",
    "LstmConfig",
    "LstmParams",
    "LstmRegressor",
    "LstmState",
    "adam_update",
    "backprop",
    "cell_step",
    "forward_sequence",
    "init_params",
    "loss_mse",
    "make_supervised",
    "train",
    "train_on_values",
    # metrics
    "MetricsReport",
    "evaluate",
    "mape",
    "mse",
    "pearson_corr",
    "rmse",
    "sem",
    # errors
    "MaizecastError",
    "InputDataError",
    "NumericError",
    "ConvergenceError",
    "ConfigError",
    "InvalidModelError",
]
