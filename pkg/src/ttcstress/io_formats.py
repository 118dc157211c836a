"""CSV formats for matrices, grade vectors, scenarios, and projection paths.

All numeric output uses the shortest decimal representation that round-trips
the double exactly (Python's repr), so re-running on identical inputs yields
byte-identical files and re-parsing recovers identical values.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .macro import CreditIndexSeries, MacroScenario
from .propagation import OriginationVector, Portfolio, ProjectionPath
from .transition import TransitionMatrix, validate_transition_matrix

# Published matrices are typically rounded to four decimals, so row sums can
# be off by about 1e-4; grade vectors are usually exact to 1e-6.
MATRIX_ROW_SUM_TOL = 1e-4
VECTOR_SUM_TOL = 1e-6

CREDIT_INDEX_COLUMN = "credit_index"
PATH_HEADER_FIXED = ("period", "z", "avg_pd", "default_flow")


def fmt(x: float) -> str:
    """Shortest round-trip decimal for a double."""
    return repr(float(x))


def _read_rows(text: str) -> list[list[str]]:
    rows = [row for row in csv.reader(io.StringIO(text)) if row]
    if not rows:
        raise InputError("empty", "no data rows found")
    return rows


def _is_number(cell: str) -> bool:
    try:
        float(cell)
    except ValueError:
        return False
    return True


def _to_float(cell: str, row: int, col: int) -> float:
    try:
        return float(cell)
    except ValueError:
        raise InputError("non-numeric",
                         f"non-numeric cell {cell!r} at row {row}, column {col}") from None


def parse_matrix_csv(text: str, tol: float = MATRIX_ROW_SUM_TOL) -> TransitionMatrix:
    """Parse an n x n numeric CSV into a validated transition matrix.

    A single header row is detected (and skipped) when its first row contains
    any non-numeric cell.  Rows must all have the same length.
    """
    rows = _read_rows(text)
    if rows and not all(_is_number(c) for c in rows[0]):
        rows = rows[1:]
        if not rows:
            raise InputError("empty", "no data rows after the header")
    width = len(rows[0])
    data = []
    for i, row in enumerate(rows, start=1):
        if len(row) != width:
            raise InputError("ragged",
                             f"row {i} has {len(row)} cells, expected {width}")
        data.append([_to_float(c, i, j + 1) for j, c in enumerate(row)])
    return validate_transition_matrix(np.array(data), tol=tol)


def parse_vector_csv(text: str, kind: str,
                     tol: float = VECTOR_SUM_TOL) -> Portfolio | OriginationVector:
    """Parse one row or one column of numbers into a grade vector.

    ``kind`` is "portfolio" or "origination".  The sum must be within
    ``tol`` of one and is renormalized; origination vectors must end in an
    exact zero (no origination into default).
    """
    if kind not in ("portfolio", "origination"):
        raise InputError("invalid-argument",
                         f"kind must be 'portfolio' or 'origination', got {kind!r}")
    rows = _read_rows(text)
    if len(rows) == 1:
        cells = rows[0]
    elif all(len(r) == 1 for r in rows):
        cells = [r[0] for r in rows]
    else:
        raise InputError("shape",
                         "vector file must be a single row or a single column")
    values = np.array([_to_float(c, i + 1, 1) for i, c in enumerate(cells)])
    if values.size < 2:
        raise InputError("shape", "need at least two grades")
    if (values < 0.0).any():
        i = int(np.argmax(values < 0.0))
        raise InputError("negative-entry",
                         f"negative weight at position {i + 1}")
    total = values.sum()
    if abs(total - 1.0) > tol:
        raise InputError("weight-sum",
                         f"weights sum to {total!r}, outside 1 +- {tol}")
    if kind == "origination" and values[-1] != 0.0:
        raise InputError("origination-into-default",
                         "origination into the default grade must be 0")
    values = values / total
    return Portfolio(values) if kind == "portfolio" else OriginationVector(values)


def parse_scenario_csv(text: str) -> tuple[CreditIndexSeries | None,
                                           MacroScenario | None]:
    """Parse a scenario file with a mandatory header.

    The first column holds period labels.  A column named ``credit_index``
    becomes the credit index series; all remaining numeric columns become
    macro variables.  Returns (series, scenario); either may be None when the
    file carries only the other kind of data.
    """
    rows = _read_rows(text)
    header = rows[0]
    if all(_is_number(c) for c in header):
        raise InputError("missing-header",
                         "scenario file needs a header row with column names")
    if len(header) < 2:
        raise InputError("shape", "scenario file needs a period column plus data")
    body = rows[1:]
    if not body:
        raise InputError("empty", "no data rows after the header")
    width = len(header)
    for i, row in enumerate(body, start=2):
        if len(row) != width:
            raise InputError("ragged",
                             f"row {i} has {len(row)} cells, expected {width}")
    periods = tuple(row[0] for row in body)
    names = header[1:]
    columns = {}
    for j, name in enumerate(names, start=1):
        columns[name] = np.array(
            [_to_float(row[j], i + 2, j + 1) for i, row in enumerate(body)])
    series = None
    if CREDIT_INDEX_COLUMN in columns:
        series = CreditIndexSeries(columns.pop(CREDIT_INDEX_COLUMN), periods=periods)
    scenario = None
    if columns:
        macro_names = tuple(n for n in names if n != CREDIT_INDEX_COLUMN)
        scenario = MacroScenario(
            values=np.column_stack([columns[n] for n in macro_names]),
            names=macro_names,
            periods=periods,
        )
    if series is None and scenario is None:
        raise InputError("empty", "scenario file has no data columns")
    return series, scenario


def emit_path_csv(path: ProjectionPath) -> str:
    """Serialize a projection path, one row per propagated period."""
    n = path.initial.n
    header = ",".join(PATH_HEADER_FIXED + tuple(f"w_{i + 1}" for i in range(n)))
    lines = [header]
    for t in range(path.periods):
        cells = [str(t + 1), fmt(path.z[t]), fmt(path.avg_pds[t]),
                 fmt(path.default_flows[t])]
        cells.extend(fmt(w) for w in path.portfolios[t])
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class PathTable:
    """Projection path re-read from CSV (initial period not included)."""

    periods: np.ndarray
    z: np.ndarray
    avg_pds: np.ndarray
    default_flows: np.ndarray
    weights: np.ndarray


def parse_path_csv(text: str) -> PathTable:
    """Parse a file produced by :func:`emit_path_csv`."""
    rows = _read_rows(text)
    header = rows[0]
    if tuple(header[:4]) != PATH_HEADER_FIXED:
        raise InputError("missing-header",
                         "path file must start with the header "
                         + ",".join(PATH_HEADER_FIXED) + ",w_1,...")
    n = len(header) - 4
    if n < 2:
        raise InputError("shape", "path file needs at least two weight columns")
    body = rows[1:]
    if not body:
        raise InputError("empty", "no data rows after the header")
    values = []
    for i, row in enumerate(body, start=2):
        if len(row) != len(header):
            raise InputError("ragged",
                             f"row {i} has {len(row)} cells, expected {len(header)}")
        values.append([_to_float(c, i, j + 1) for j, c in enumerate(row)])
    arr = np.array(values)
    return PathTable(
        periods=arr[:, 0].astype(int),
        z=arr[:, 1],
        avg_pds=arr[:, 2],
        default_flows=arr[:, 3],
        weights=arr[:, 4:],
    )


def emit_matrix_csv(tm: TransitionMatrix) -> str:
    """Serialize a transition matrix as a plain numeric CSV."""
    lines = [",".join(fmt(x) for x in row) for row in tm.probs]
    return "\n".join(lines) + "\n"
