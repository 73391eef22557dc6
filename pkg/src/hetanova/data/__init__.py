"""
Data model for two-way layouts in hetanova
"""

from hetanova.data.io import (
    read_raw_csv,
    read_summary_csvs,
    read_summary_json,
    summary_from_dict,
    summary_to_dict,
    write_summary_json,
)
from hetanova.data.summary import (
    CellSummaryTable,
    Layout,
    RawDataset,
    cell_moments,
    marginals,
    summarize,
)

__all__ = [
    "CellSummaryTable",
    "Layout",
    "RawDataset",
    "cell_moments",
    "marginals",
    "read_raw_csv",
    "read_summary_csvs",
    "read_summary_json",
    "summarize",
    "summary_from_dict",
    "summary_to_dict",
    "write_summary_json",
]
