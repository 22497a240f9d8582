"""Comparison-plot rendering for irslink sweep CSVs."""

from .plotting import (
    FIGURES,
    PlotSpec,
    build_figure,
    error_bar_misses,
    render,
    series_groups,
)
from .schema import (
    CSV_HEADER,
    METHODS,
    RateRow,
    SchemaError,
    load_rows,
    parse_csv_text,
)

__version__ = "0.1.0"

__all__ = [
    "CSV_HEADER",
    "FIGURES",
    "METHODS",
    "PlotSpec",
    "RateRow",
    "SchemaError",
    "build_figure",
    "error_bar_misses",
    "load_rows",
    "parse_csv_text",
    "render",
    "series_groups",
    "__version__",
]
