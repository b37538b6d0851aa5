"""
Wide CSV curve tables and atomic table output
"""

import os
import re
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional, Sequence, TextIO, Union

import numpy as np
import pandas as pd

from utils.errors import DataFormatError
from utils.logger import get_logger

logger = get_logger("CurveIO")

RESPONSE_COLUMNS = {"label": "label", "y": "scalar"}
FLOAT_FORMAT = "%.17g"


@dataclass(frozen=True, eq=False)
class CurveTable:
    """Sampling grid, n x G values and the optional response column"""

    grid: np.ndarray
    values: np.ndarray
    response: Optional[np.ndarray] = None
    response_column: Optional[str] = None

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def response_kind(self) -> str:
        if self.response_column is None:
            return "none"
        return RESPONSE_COLUMNS[self.response_column]


def _is_number(text: str) -> bool:
    try:
        return bool(np.isfinite(float(text)))
    except ValueError:
        return False


def _parse_float(cell) -> float:
    # float() rounds correctly, so 17-digit cells read back exactly
    try:
        return float(cell)
    except (TypeError, ValueError):
        return np.nan


def _numeric_column(frame: pd.DataFrame, column: str) -> np.ndarray:
    raw = frame[column]
    parsed = raw.map(_parse_float).astype(float)
    bad = ~np.isfinite(parsed)
    if bad.any():
        row = int(np.flatnonzero(bad.to_numpy())[0])
        cell = raw.iloc[row]
        reason = "missing cell" if pd.isna(cell) or cell == "" else f"non-numeric cell '{cell}'"
        raise DataFormatError(reason, row=row + 1, column=column)
    return parsed.to_numpy(dtype=float)


def load_curves(path: Union[str, Path]) -> CurveTable:
    """Read a wide curve table.

    The header holds the grid times; an optional last column named `label`
    (-1/+1) or `y` holds responses. Rows in diagnostics count data rows
    from 1.
    """
    path = Path(path)
    try:
        raw = pd.read_csv(path, header=None, dtype=str, keep_default_na=False, skipinitialspace=True)
    except pd.errors.EmptyDataError as e:
        raise DataFormatError(f"{path} is empty") from e
    except pd.errors.ParserError as e:
        # pandas counts file lines from 1, header included
        found = re.search(r"Expected (\d+) fields in line (\d+)", str(e))
        if found is None:
            raise DataFormatError(f"ragged row in {path}: {e}") from e
        raise DataFormatError(f"ragged row: expected {found.group(1)} fields",
                              row=int(found.group(2)) - 1) from e

    short_rows = np.flatnonzero(raw.isna().any(axis=1).to_numpy())
    if short_rows.size:
        raise DataFormatError(f"ragged row: expected {raw.shape[1]} fields", row=int(short_rows[0]))

    columns = [str(c).strip() for c in raw.iloc[0]]
    frame = raw.iloc[1:].reset_index(drop=True)
    frame.columns = columns
    if frame.empty:
        raise DataFormatError(f"{path} has a header but no curves")

    response_column = None
    grid_columns = columns
    if not _is_number(columns[-1]):
        if columns[-1] not in RESPONSE_COLUMNS:
            raise DataFormatError(f"unknown response column '{columns[-1]}' (use 'label' or 'y')",
                                  column=columns[-1])
        response_column = columns[-1]
        grid_columns = columns[:-1]

    for name in grid_columns:
        if not _is_number(name):
            raise DataFormatError(f"grid time '{name}' is not a number", column=name)
    if not grid_columns:
        raise DataFormatError("the table has no grid columns")

    grid = np.array([float(name) for name in grid_columns])
    if np.any(np.diff(grid) <= 0):
        position = int(np.flatnonzero(np.diff(grid) <= 0)[0]) + 1
        raise DataFormatError("grid times must be strictly increasing", column=grid_columns[position])

    values = np.column_stack([_numeric_column(frame, name) for name in grid_columns])

    response = None
    if response_column is not None:
        response = _numeric_column(frame, response_column)
        if response_column == "label":
            bad = np.flatnonzero((response != 1.0) & (response != -1.0))
            if bad.size:
                raise DataFormatError(f"label must be -1 or +1, got {frame[response_column].iloc[bad[0]]}",
                                      row=int(bad[0]) + 1, column=response_column)

    logger.info(f"Loaded {values.shape[0]} curves on {grid.size} grid points from {path}")
    return CurveTable(grid, values, response, response_column)


def atomic_write(path: Union[str, Path], write: Callable[[TextIO], None]) -> Path:
    """Write through a temporary file in the target directory, then rename over the target"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "w", newline="") as handle:
            write(handle)
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.remove(tmp_name)
        raise
    return path


def write_table(path: Union[str, Path], frame: pd.DataFrame) -> Path:
    """Write a CSV with 17 significant digits, replacing the target atomically"""
    path = atomic_write(path, lambda handle: frame.to_csv(handle, index=False, float_format=FLOAT_FORMAT))
    logger.debug(f"Wrote {len(frame)} rows to {path}")
    return path


def curve_frame(grid: Sequence[float], values: np.ndarray, response: Optional[np.ndarray] = None,
                response_column: Optional[str] = None) -> pd.DataFrame:
    """Wide table whose header is the grid (for write_table)"""
    header = [FLOAT_FORMAT % t for t in grid]
    frame = pd.DataFrame(np.atleast_2d(np.asarray(values, dtype=float)), columns=header)
    if response is not None:
        if response_column not in RESPONSE_COLUMNS:
            raise DataFormatError(f"unknown response column '{response_column}'")
        frame[response_column] = np.asarray(response, dtype=float)
    return frame


def write_curves(path: Union[str, Path], table: CurveTable) -> Path:
    return write_table(path, curve_frame(table.grid, table.values, table.response, table.response_column))
