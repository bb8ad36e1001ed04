"""Access to the bundled 32-year Nigeria maize dataset (1990-2021)."""

from __future__ import annotations

from pathlib import Path

from .estimation import DiscretizedSeries

__all__ = ["bundled_dataset_path", "load_bundled_series"]


def bundled_dataset_path() -> Path:
    """Filesystem path of the packaged labeled series."""
    return Path(__file__).parent / "data" / "nigeria_maize_1990_2021.csv"


def load_bundled_series() -> DiscretizedSeries:
    """The packaged series, parsed in labeled mode."""
    from .io import load_csv

    series = load_csv(bundled_dataset_path())
    assert isinstance(series, DiscretizedSeries)
    return series
