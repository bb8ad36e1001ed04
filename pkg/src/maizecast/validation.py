"""Input validation helpers.

Small checkers in the spirit of ``sklearn.utils.check_array``: they coerce
to numpy arrays, verify shapes/ranges and raise typed errors so callers can
rely on clean inputs.
"""

from __future__ import annotations

import numpy as np

from .exceptions import ConfigError, InvalidModelError


def as_float_matrix(value, name: str) -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if arr.ndim != 2:
        raise InvalidModelError(f"{name} must be a 2-D matrix, got ndim={arr.ndim}")
    return arr


def as_float_vector(value, name: str) -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if arr.ndim != 1:
        raise InvalidModelError(f"{name} must be a 1-D vector, got ndim={arr.ndim}")
    return arr


def check_observations(obs, n_symbols: int) -> np.ndarray:
    """Coerce an observation sequence to a 1-D int array with indices in [0, n_symbols)."""
    arr = np.asarray(obs)
    if arr.ndim == 2 and arr.shape[1] == 1:
        arr = arr.ravel()
    if arr.ndim != 1:
        raise ConfigError(f"observation sequence must be 1-D, got shape {arr.shape}")
    if arr.size == 0:
        raise ConfigError("observation sequence must contain at least one symbol")
    if not np.issubdtype(arr.dtype, np.integer):
        as_int = arr.astype(int)
        if not np.array_equal(as_int, arr):
            raise ConfigError("observation sequence must contain integer symbol indices")
        arr = as_int
    arr = arr.astype(np.intp)
    if arr.min() < 0 or arr.max() >= n_symbols:
        bad = int(np.argmax((arr < 0) | (arr >= n_symbols)))
        raise ConfigError(
            f"observation index {arr[bad]} at position {bad} is outside [0, {n_symbols})"
        )
    return arr


def check_stochastic_matrix(mat, name: str, tol: float = 1e-9) -> np.ndarray:
    """Validate a row-stochastic matrix, raising on any violation."""
    arr = as_float_matrix(mat, name)
    row_sums = arr.sum(axis=1)
    if np.any(np.abs(row_sums - 1.0) > tol):
        bad = int(np.argmax(np.abs(row_sums - 1.0)))
        raise InvalidModelError(
            f"{name} row {bad + 1} sums to {row_sums[bad]:.6g}, expected 1 within {tol:g}"
        )
    if np.any(arr < -tol) or np.any(arr > 1.0 + tol):
        raise InvalidModelError(f"{name} has entries outside [0, 1]")
    return arr


def check_probability_vector(vec, name: str, tol: float = 1e-9) -> np.ndarray:
    arr = as_float_vector(vec, name)
    total = arr.sum()
    if abs(total - 1.0) > tol:
        raise InvalidModelError(f"{name} sums to {total:.6g}, expected 1 within {tol:g}")
    if np.any(arr < -tol) or np.any(arr > 1.0 + tol):
        raise InvalidModelError(f"{name} has entries outside [0, 1]")
    return arr


def require(condition: bool, message: str, error=ConfigError) -> None:
    if not condition:
        raise error(message)
