"""
Reading and writing layouts, raw data and cell summaries
"""

import logging
from pathlib import Path

import numpy as np
import pandas as pd

from hetanova.data.summary import CellSummaryTable, RawDataset
from hetanova.utils.errors import DimensionMismatch, InputError
from hetanova.utils.fs import read_json, write_json

# Configure logging
logger = logging.getLogger("hetanova")

RAW_COLUMNS = ("A", "B", "y")


def _require_file(path) -> Path:
    path = Path(path)
    if not path.is_file():
        raise InputError(f"file not found: {path}")
    return path


def read_raw_csv(path) -> RawDataset:
    """
    Read long-format observations with header ``A,B,y``.

    Args:
        path: CSV file path

    Returns:
        RawDataset: the parsed records
    """
    path = _require_file(path)
    try:
        frame = pd.read_csv(path)
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise InputError(f"{path}: cannot parse CSV: {e}") from e

    frame.columns = [str(c).strip() for c in frame.columns]
    missing = [c for c in RAW_COLUMNS if c not in frame.columns]
    if missing:
        raise InputError(f"{path}: missing column(s) {', '.join(missing)}; expected header A,B,y")

    for column in ("A", "B"):
        levels = pd.to_numeric(frame[column], errors="coerce")
        if levels.isna().any() or (levels != levels.round()).any():
            row = int(np.flatnonzero(levels.isna() | (levels != levels.round()))[0]) + 2
            raise InputError(f"{path}: line {row}: column {column} must hold integer levels")
        frame[column] = levels.astype(np.int64)

    y = pd.to_numeric(frame["y"], errors="coerce")
    if y.isna().any():
        row = int(np.flatnonzero(y.isna())[0]) + 2
        raise InputError(f"{path}: line {row}: column y must be numeric")

    logger.debug(f"Read {len(frame)} records from {path}")
    return RawDataset(
        level_a=frame["A"].to_numpy(), level_b=frame["B"].to_numpy(), y=y.to_numpy(dtype=float)
    )


def read_matrix_csv(path) -> np.ndarray:
    """Read a headerless numeric matrix (rows = levels of A)."""
    path = _require_file(path)
    try:
        frame = pd.read_csv(path, header=None, skipinitialspace=True)
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise InputError(f"{path}: cannot parse CSV: {e}") from e
    values = frame.apply(pd.to_numeric, errors="coerce")
    if values.isna().to_numpy().any():
        raise InputError(f"{path}: matrix must be fully numeric with no blank entries")
    return values.to_numpy(dtype=float)


def read_summary_csvs(mean_path, n_path, var_path) -> CellSummaryTable:
    """
    Read the mean / n / var matrix triplet, each a rows x b columns.

    Returns:
        CellSummaryTable: validated summaries
    """
    mean = read_matrix_csv(mean_path)
    n = read_matrix_csv(n_path)
    var = read_matrix_csv(var_path)
    return CellSummaryTable.from_arrays(mean=mean, n=n, var=var)


def summary_from_dict(doc: dict) -> CellSummaryTable:
    """Build summaries from a ``{a, b, mean, n, var}`` document."""
    missing = [k for k in ("mean", "n", "var") if k not in doc]
    if missing:
        raise InputError(f"summary document is missing {', '.join(missing)}")
    try:
        mean = np.array(doc["mean"], dtype=float)
        n = np.array(doc["n"], dtype=float)
        var = np.array(doc["var"], dtype=float)
    except (TypeError, ValueError) as e:
        raise InputError(f"summary matrices must be numeric and rectangular: {e}") from e

    summary = CellSummaryTable.from_arrays(mean=mean, n=n, var=var)
    a, b = doc.get("a", summary.a), doc.get("b", summary.b)
    if (a, b) != (summary.a, summary.b):
        raise DimensionMismatch(
            f"dimension mismatch: document declares {a}x{b}, matrices are {summary.a}x{summary.b}"
        )
    return summary


def summary_to_dict(summary: CellSummaryTable) -> dict:
    return {
        "a": summary.a,
        "b": summary.b,
        "mean": summary.mean.tolist(),
        "n": summary.n.tolist(),
        "var": summary.var.tolist(),
    }


def read_summary_json(path) -> CellSummaryTable:
    path = _require_file(path)
    try:
        doc = read_json(path)
    except ValueError as e:
        raise InputError(f"{path}: invalid JSON: {e}") from e
    if not isinstance(doc, dict):
        raise InputError(f"{path}: expected a JSON object")
    return summary_from_dict(doc)


def write_summary_json(path, summary: CellSummaryTable) -> Path:
    path = write_json(path, summary_to_dict(summary))
    logger.info(f"Wrote {summary.a}x{summary.b} summary to {path}")
    return path
