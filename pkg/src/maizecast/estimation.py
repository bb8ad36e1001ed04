"""Turn yearly climate/yield records into discrete state and observation
series, and derive count-based initial HMM parameters from them.

States are the four rainfall/temperature level combinations (LL, LH, HL,
HH; first letter rainfall, second temperature) and observations are the
three yield levels (L, M, H).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import InputDataError
from .hmm import DEFAULT_ALPHABET, DEFAULT_STATES, HmmParams
from .validation import require

__all__ = [
    "ClimateYieldRecord",
    "Thresholds",
    "DiscretizedSeries",
    "CountEstimates",
    "InitialEstimate",
    "discretize",
    "count_estimates",
    "estimate_initial_params",
]


@dataclass(frozen=True)
class ClimateYieldRecord:
    """One year of raw inputs: rainfall (mm), mean temperature (deg C)
    and maize production quantity."""

    year: int
    rainfall: float
    temperature: float
    maize_yield: float

    def __post_init__(self):
        require(self.rainfall >= 0, f"year {self.year}: rainfall must be >= 0", InputDataError)
        require(self.maize_yield >= 0, f"year {self.year}: maize yield must be >= 0", InputDataError)


@dataclass(frozen=True)
class Thresholds:
    """Cut points used for discretization.

    Any field left ``None`` is computed from the data (median splits for
    rainfall and temperature, terciles for yield); supplying a value
    overrides the computed one.  Values exactly on a cut go to the lower
    bin.
    """

    rainfall_split: float | None = None
    temperature_split: float | None = None
    yield_cuts: tuple[float, float] | None = None


@dataclass(frozen=True)
class DiscretizedSeries:
    """Aligned per-year state and observation indices plus the thresholds
    that produced them (``None`` when labels were supplied directly)."""

    years: tuple[int, ...]
    states: np.ndarray
    observations: np.ndarray
    thresholds: Thresholds | None = None

    def __post_init__(self):
        years = tuple(int(y) for y in self.years)
        states = np.asarray(self.states, dtype=np.intp)
        obs = np.asarray(self.observations, dtype=np.intp)
        require(
            len(years) == states.shape[0] == obs.shape[0],
            "years, states and observations must have equal lengths",
            InputDataError,
        )
        require(
            all(b > a for a, b in zip(years, years[1:])),
            "years must be strictly increasing",
            InputDataError,
        )
        require(
            states.size == 0 or (states.min() >= 0 and states.max() < self.n_states),
            "state index out of range",
            InputDataError,
        )
        require(
            obs.size == 0 or (obs.min() >= 0 and obs.max() < self.n_symbols),
            "observation index out of range",
            InputDataError,
        )
        states.setflags(write=False)
        obs.setflags(write=False)
        object.__setattr__(self, "years", years)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "observations", obs)

    @property
    def n_states(self) -> int:
        return DEFAULT_STATES.n_states

    @property
    def n_symbols(self) -> int:
        return DEFAULT_ALPHABET.n_symbols

    def __len__(self) -> int:
        return len(self.years)

    def state_labels(self) -> list[str]:
        return [DEFAULT_STATES.labels[i] for i in self.states]

    def observation_labels(self) -> list[str]:
        return [DEFAULT_ALPHABET.symbols[i] for i in self.observations]


def _split_point(values: np.ndarray, column: str, override: float | None) -> float:
    if override is not None:
        return float(override)
    if np.all(values == values[0]):
        raise InputDataError(
            f"{column} column is constant ({values[0]:g}); cannot derive a Low/High split"
        )
    return float(np.median(values))


def _yield_cuts(values: np.ndarray, override) -> tuple[float, float]:
    if override is not None:
        lo, hi = (float(override[0]), float(override[1]))
        require(lo <= hi, f"yield cuts must be ordered, got ({lo:g}, {hi:g})", InputDataError)
        return lo, hi
    if np.all(values == values[0]):
        raise InputDataError(
            f"maize_yield column is constant ({values[0]:g}); cannot derive tercile cuts"
        )
    lo, hi = np.quantile(values, [1.0 / 3.0, 2.0 / 3.0])
    return float(lo), float(hi)


def discretize(records, thresholds: Thresholds | None = None) -> DiscretizedSeries:
    """Map raw records onto state/observation indices.

    Rainfall and temperature are each split Low/High at their median
    (state = rainfall level x temperature level, in LL/LH/HL/HH order);
    yield maps to L/M/H at tercile boundaries.  Explicit thresholds
    override any computed cut.  Deterministic for fixed inputs.
    """
    records = list(records)
    require(len(records) >= 3, "discretization needs at least 3 records", InputDataError)
    years = [r.year for r in records]
    require(
        all(b > a for a, b in zip(years, years[1:])),
        "record years must be strictly increasing",
        InputDataError,
    )
    thresholds = thresholds or Thresholds()

    rainfall = np.array([r.rainfall for r in records], dtype=float)
    temperature = np.array([r.temperature for r in records], dtype=float)
    yields = np.array([r.maize_yield for r in records], dtype=float)

    rain_split = _split_point(rainfall, "rainfall", thresholds.rainfall_split)
    temp_split = _split_point(temperature, "temperature", thresholds.temperature_split)
    cut_low, cut_high = _yield_cuts(yields, thresholds.yield_cuts)

    rain_high = rainfall > rain_split
    temp_high = temperature > temp_split
    states = 2 * rain_high.astype(np.intp) + temp_high.astype(np.intp)
    observations = np.where(yields <= cut_low, 0, np.where(yields <= cut_high, 1, 2))

    return DiscretizedSeries(
        years=tuple(years),
        states=states,
        observations=observations,
        thresholds=Thresholds(rain_split, temp_split, (cut_low, cut_high)),
    )


@dataclass(frozen=True)
class CountEstimates:
    """Raw transition/emission/occupancy counts from a labeled series."""

    transition_counts: np.ndarray
    emission_counts: np.ndarray
    state_counts: np.ndarray

    def __post_init__(self):
        for name in ("transition_counts", "emission_counts", "state_counts"):
            arr = np.asarray(getattr(self, name), dtype=np.int64)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


def count_estimates(series: DiscretizedSeries) -> CountEstimates:
    """Count transitions between consecutive states and emissions per state.

    ``transition_counts[i, j]`` is the number of ``i -> j`` steps, so the
    grand total is ``len(series) - 1``; emission counts total
    ``len(series)`` and each row sums to that state's occupancy.
    """
    require(len(series) >= 2, "counting needs a series of length >= 2", InputDataError)
    n, m = series.n_states, series.n_symbols
    transitions = np.zeros((n, n), dtype=np.int64)
    np.add.at(transitions, (series.states[:-1], series.states[1:]), 1)
    emissions = np.zeros((n, m), dtype=np.int64)
    np.add.at(emissions, (series.states, series.observations), 1)
    occupancy = np.bincount(series.states, minlength=n).astype(np.int64)
    return CountEstimates(transitions, emissions, occupancy)


@dataclass(frozen=True)
class InitialEstimate:
    """Count-based model plus the rows that had no counts and were set
    uniform (only possible with zero smoothing)."""

    params: HmmParams
    uniform_transmat_rows: tuple[int, ...] = ()
    uniform_emission_rows: tuple[int, ...] = ()


def _normalize_rows(counts: np.ndarray, smoothing: float) -> tuple[np.ndarray, list[int]]:
    smoothed = counts.astype(float) + smoothing
    sums = smoothed.sum(axis=1)
    uniform_rows = []
    out = np.empty_like(smoothed)
    for i, s in enumerate(sums):
        if s > 0.0:
            out[i] = smoothed[i] / s
        else:
            out[i] = 1.0 / counts.shape[1]
            uniform_rows.append(i)
    return out, uniform_rows


def estimate_initial_params(counts: CountEstimates, smoothing: float = 0.0) -> InitialEstimate:
    """Row-normalize the counts (optionally add-kappa smoothed) into a model.

    The initial distribution is the plain occupancy fraction; smoothing
    applies to the transition and emission rows only.  Rows with zero
    counts and zero smoothing become uniform and are flagged.
    """
    require(smoothing >= 0.0, f"smoothing must be >= 0, got {smoothing}")
    total = counts.state_counts.sum()
    require(total > 0, "state counts are empty", InputDataError)
    startprob = counts.state_counts.astype(float) / total
    transmat, uniform_a = _normalize_rows(counts.transition_counts, smoothing)
    emissionprob, uniform_b = _normalize_rows(counts.emission_counts, smoothing)
    return InitialEstimate(
        HmmParams(startprob, transmat, emissionprob),
        tuple(uniform_a),
        tuple(uniform_b),
    )
