"""CSV ingestion and model persistence.

Two input schemas are accepted, detected from the header row:

* raw mode: ``year, rainfall_mm, temperature_c, maize_yield`` - yearly
  continuous records that still need discretization;
* labeled mode: ``year, state, observation`` - pre-discretized series
  with 1-based state numbers and L/M/H yield levels.

Archives are versioned JSON with full-precision floats, so a save/load
round trip reproduces parameters bit for bit.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .estimation import ClimateYieldRecord, DiscretizedSeries, Thresholds
from .exceptions import InputDataError
from .hmm import DEFAULT_ALPHABET, HmmParams
from .lstm import LstmParams

__all__ = [
    "RAW_COLUMNS",
    "LABELED_COLUMNS",
    "load_csv",
    "ModelArchive",
    "save_archive",
    "load_archive",
    "hmm_params_to_payload",
    "hmm_params_from_payload",
    "lstm_params_to_payload",
    "lstm_params_from_payload",
]

RAW_COLUMNS = ("year", "rainfall_mm", "temperature_c", "maize_yield")
LABELED_COLUMNS = ("year", "state", "observation")

ARCHIVE_FORMAT_VERSION = 1


def _parse_int(value: str, column: str, row: int) -> int:
    try:
        return int(value.strip())
    except (ValueError, AttributeError):
        raise InputDataError(f"row {row}: column {column!r} has non-integer value {value!r}")


def _parse_float(value: str, column: str, row: int) -> float:
    try:
        return float(value.strip())
    except (ValueError, AttributeError):
        raise InputDataError(f"row {row}: column {column!r} has non-numeric value {value!r}")


def _check_years(years: list[int], rows: list[int]) -> None:
    seen = {}
    for year, row in zip(years, rows):
        if year in seen:
            raise InputDataError(f"row {row}: duplicate year {year} (first seen at row {seen[year]})")
        seen[year] = row
    for (a, ra), (b, rb) in zip(zip(years, rows), zip(years[1:], rows[1:])):
        if b <= a:
            raise InputDataError(f"row {rb}: year {b} is not greater than preceding year {a}")


def load_csv(path) -> list[ClimateYieldRecord] | DiscretizedSeries:
    """Parse a UTF-8 CSV in either schema with strict type checking.

    Returns the raw records or the pre-labeled series depending on the
    header.  Any malformed cell, duplicate or out-of-order year raises
    :class:`InputDataError` naming the offending row (the header is
    row 1).
    """
    path = Path(path)
    if not path.exists():
        raise InputDataError(f"input file not found: {path}")
    with open(path, newline="", encoding="utf-8-sig") as handle:
        reader = csv.DictReader(handle)
        header = reader.fieldnames
        if header is None:
            raise InputDataError(f"{path}: file is empty (no header row)")
        header = tuple(h.strip() for h in header)
        if set(header) == set(RAW_COLUMNS):
            return _load_raw(reader, path)
        if set(header) == set(LABELED_COLUMNS):
            return _load_labeled(reader, path)
        raise InputDataError(
            f"{path}: unknown columns {header}; expected {RAW_COLUMNS} (raw mode) "
            f"or {LABELED_COLUMNS} (labeled mode)"
        )


def _load_raw(reader, path) -> list[ClimateYieldRecord]:
    records = []
    rows = []
    for i, row in enumerate(reader, start=2):
        records.append(
            ClimateYieldRecord(
                year=_parse_int(row["year"], "year", i),
                rainfall=_parse_float(row["rainfall_mm"], "rainfall_mm", i),
                temperature=_parse_float(row["temperature_c"], "temperature_c", i),
                maize_yield=_parse_float(row["maize_yield"], "maize_yield", i),
            )
        )
        rows.append(i)
    if not records:
        raise InputDataError(f"{path}: no data rows")
    _check_years([r.year for r in records], rows)
    return records


def _load_labeled(reader, path) -> DiscretizedSeries:
    years, states, observations, rows = [], [], [], []
    n_states = 4
    symbols = DEFAULT_ALPHABET.symbols
    for i, row in enumerate(reader, start=2):
        years.append(_parse_int(row["year"], "year", i))
        state = _parse_int(row["state"], "state", i)
        if not 1 <= state <= n_states:
            raise InputDataError(f"row {i}: state {state} outside 1..{n_states}")
        states.append(state - 1)
        symbol = (row["observation"] or "").strip()
        if symbol not in symbols:
            raise InputDataError(
                f"row {i}: observation {row['observation']!r} not one of {symbols}"
            )
        observations.append(symbols.index(symbol))
        rows.append(i)
    if not years:
        raise InputDataError(f"{path}: no data rows")
    _check_years(years, rows)
    return DiscretizedSeries(
        years=tuple(years),
        states=np.array(states, dtype=np.intp),
        observations=np.array(observations, dtype=np.intp),
        thresholds=None,
    )


@dataclass
class ModelArchive:
    """Versioned on-disk model: kind, parameter payload, run metadata."""

    kind: str
    payload: dict
    metadata: dict = field(default_factory=dict)
    format_version: int = ARCHIVE_FORMAT_VERSION


def save_archive(archive: ModelArchive, path) -> None:
    document = {
        "format_version": archive.format_version,
        "kind": archive.kind,
        "payload": archive.payload,
        "metadata": {**archive.metadata, "created_at": _timestamp()},
    }
    Path(path).write_text(json.dumps(document, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _timestamp() -> str:
    return datetime.now(timezone.utc).isoformat()


def load_archive(path) -> ModelArchive:
    path = Path(path)
    if not path.exists():
        raise InputDataError(f"archive not found: {path}")
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InputDataError(f"{path}: not a valid archive: {exc}") from exc
    if not isinstance(document, dict) or "kind" not in document or "payload" not in document:
        raise InputDataError(f"{path}: not a model archive")
    version = document.get("format_version")
    if version != ARCHIVE_FORMAT_VERSION:
        raise InputDataError(
            f"{path}: unsupported archive format version {version!r} "
            f"(this build reads version {ARCHIVE_FORMAT_VERSION})"
        )
    return ModelArchive(
        kind=document["kind"],
        payload=document["payload"],
        metadata=document.get("metadata", {}),
        format_version=version,
    )


def hmm_params_to_payload(params: HmmParams) -> dict:
    return {
        "startprob": params.startprob.tolist(),
        "transmat": params.transmat.tolist(),
        "emissionprob": params.emissionprob.tolist(),
    }


def hmm_params_from_payload(payload: dict) -> HmmParams:
    return HmmParams(
        np.array(payload["startprob"], dtype=float),
        np.array(payload["transmat"], dtype=float),
        np.array(payload["emissionprob"], dtype=float),
    )


def lstm_params_to_payload(params: LstmParams) -> dict:
    return {
        "W": params.W.tolist(),
        "R": params.R.tolist(),
        "b": params.b.tolist(),
        "out_w": params.out_w.tolist(),
        "out_b": params.out_b,
        "dense_w": None if params.dense_w is None else params.dense_w.tolist(),
        "dense_b": None if params.dense_b is None else params.dense_b.tolist(),
    }


def lstm_params_from_payload(payload: dict) -> LstmParams:
    dense_w = payload.get("dense_w")
    dense_b = payload.get("dense_b")
    return LstmParams(
        W=np.array(payload["W"], dtype=float),
        R=np.array(payload["R"], dtype=float),
        b=np.array(payload["b"], dtype=float),
        out_w=np.array(payload["out_w"], dtype=float),
        out_b=float(payload["out_b"]),
        dense_w=None if dense_w is None else np.array(dense_w, dtype=float),
        dense_b=None if dense_b is None else np.array(dense_b, dtype=float),
    )


def thresholds_to_payload(thresholds: Thresholds | None) -> dict | None:
    if thresholds is None:
        return None
    return {
        "rainfall_split": thresholds.rainfall_split,
        "temperature_split": thresholds.temperature_split,
        "yield_cuts": list(thresholds.yield_cuts) if thresholds.yield_cuts else None,
    }
