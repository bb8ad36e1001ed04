"""Forecast-accuracy measures, computed identically for every model."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import InputDataError, NumericError

__all__ = ["MetricsReport", "mape", "mse", "rmse", "sem", "pearson_corr", "evaluate"]


def _pair(actual, predicted) -> tuple[np.ndarray, np.ndarray]:
    a = np.asarray(actual, dtype=float).ravel()
    p = np.asarray(predicted, dtype=float).ravel()
    if a.shape != p.shape:
        raise InputDataError(f"length mismatch: {a.shape[0]} actual vs {p.shape[0]} predicted")
    if a.size == 0:
        raise InputDataError("metrics need at least one value")
    return a, p


def mape(actual, predicted) -> float:
    """Mean absolute percentage error, in percent.

    Zero actual values make the measure undefined; they raise with the
    offending indices rather than being silently fudged.
    """
    a, p = _pair(actual, predicted)
    zeros = np.nonzero(a == 0.0)[0]
    if zeros.size:
        raise NumericError(
            "MAPE is undefined for zero actual values at indices "
            + ", ".join(str(i) for i in zeros)
        )
    return float(100.0 * np.mean(np.abs(a - p) / np.abs(a)))


def mse(actual, predicted) -> float:
    """Mean squared error."""
    a, p = _pair(actual, predicted)
    return float(np.mean((a - p) ** 2))


def rmse(actual, predicted) -> float:
    """Root mean squared error; by construction ``rmse**2 == mse``."""
    return math.sqrt(mse(actual, predicted))


def sem(actual, predicted) -> float:
    """Standard error of the mean residual: sample standard deviation of
    ``actual - predicted`` (n-1 denominator) divided by sqrt(n)."""
    a, p = _pair(actual, predicted)
    if a.size < 2:
        raise InputDataError("SEM needs at least 2 values")
    residuals = a - p
    return float(np.std(residuals, ddof=1) / math.sqrt(residuals.size))


def pearson_corr(actual, predicted) -> float:
    """Sample Pearson correlation; constant inputs raise instead of NaN."""
    a, p = _pair(actual, predicted)
    if a.size < 2:
        raise InputDataError("correlation needs at least 2 values")
    for name, v in (("actual", a), ("predicted", p)):
        if np.all(v == v[0]):
            raise NumericError(f"correlation is undefined: {name} series is constant")
    return float(np.corrcoef(a, p)[0, 1])


@dataclass(frozen=True)
class MetricsReport:
    """One model's evaluation row: MAPE (%), RMSE, MSE, SEM, correlation."""

    mape: float
    rmse: float
    mse: float
    sem: float
    corr: float

    def as_row(self, model: str, precision: int = 4) -> str:
        """Render as one comparison-table line (MAPE, RMSE, Corr, SEM, MSE order)."""
        fields = (self.mape, self.rmse, self.corr, self.sem, self.mse)
        return ",".join([model] + [f"{v:.{precision}f}" for v in fields])


def evaluate(actual, predicted) -> MetricsReport:
    """All five measures in one report; ``rmse**2 == mse`` holds exactly."""
    mse_value = mse(actual, predicted)
    return MetricsReport(
        mape=mape(actual, predicted),
        rmse=math.sqrt(mse_value),
        mse=mse_value,
        sem=sem(actual, predicted),
        corr=pearson_corr(actual, predicted),
    )
