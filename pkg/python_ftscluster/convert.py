# -*- coding: utf-8 -*-

"""
CSV and JSON conversion functions

Coefficient files hold one or more series, each introduced by a header line

    series_id,T,L

followed by T rows of L floats. Floats are written with 17 significant
digits so that load -> save reproduces a file byte for byte.
"""

__author__ = "python-ftscluster developers"
__license__ = "MIT"
__version__ = "0.3.0"

import json
import logging
from pathlib import Path

import numpy as np
import pandas as pd

from .basis import BasisSpec, FunctionalTimeSeries, GriddedSample
from .exceptions import FtsDimensionError, FtsInputError
from .spectra import BlockPlan, SimilarityMatrix

logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())

FLOAT_FORMAT = "%.17g"
MISSING = "NA"


def format_float(value):
    return FLOAT_FORMAT % value


def _parse_floats(cells, path, line):
    try:
        return [float(c) for c in cells]
    except ValueError:
        bad = next(c for c in cells if not _is_float(c))
        raise FtsInputError(f"not a number: {bad!r}", path, line) from None


def _is_float(text):
    try:
        float(text)
    except ValueError:
        return False
    return True


def _parse_header(cells, path, line):
    if len(cells) != 3:
        raise FtsInputError(
            f"expected header 'series_id,T,L', got {len(cells)} fields", path, line
        )
    series_id, T, L = (c.strip() for c in cells)
    try:
        T, L = int(T), int(L)
    except ValueError:
        raise FtsInputError(f"T and L must be integers, got {cells[1]!r}, {cells[2]!r}",
                            path, line) from None
    if T < 2 or L < 1:
        raise FtsInputError(f"invalid size T={T}, L={L}", path, line)
    return series_id, T, L


def parse_coefficients(text, path="<string>"):
    """
    :param text <str>:  coefficient file contents
    :returns <list>:    FunctionalTimeSeries in file order
    """
    lines = text.splitlines()
    out = []
    i = 0
    while i < len(lines):
        if not lines[i].strip():
            i += 1
            continue
        series_id, T, L = _parse_header(lines[i].split(","), path, i + 1)
        rows = []
        for offset in range(1, T + 1):
            number = i + offset
            if number >= len(lines):
                raise FtsInputError(
                    f"{series_id}: expected {T} rows, file ends after {offset - 1}",
                    path, number,
                )
            cells = lines[number].split(",")
            if len(cells) != L:
                raise FtsInputError(
                    f"{series_id}: expected {L} values, got {len(cells)}", path, number + 1
                )
            rows.append(_parse_floats(cells, path, number + 1))
        try:
            out.append(FunctionalTimeSeries(np.array(rows), BasisSpec(L), series_id))
        except FtsDimensionError as e:
            raise FtsInputError(e.message, path, i + 1) from None
        i += T + 1
    if not out:
        raise FtsInputError("no series found", path, 1)
    return out


def read_coefficients(path):
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise FtsInputError(f"cannot read: {e.strerror}", path) from None
    series = parse_coefficients(text, str(path))
    logger.debug(f"{path}: {len(series)} series")
    return series


def format_coefficients(series):
    """coefficient file text for one or more series"""
    if isinstance(series, FunctionalTimeSeries):
        series = [series]
    out = []
    for s in series:
        out.append(f"{s.id},{s.T},{s.L}")
        out.extend(",".join(format_float(v) for v in row) for row in s.coeffs)
    return "\n".join(out) + "\n"


def write_coefficients(path, series):
    Path(path).write_text(format_coefficients(series), encoding="utf-8", newline="\n")


def read_gridded(path, grid_header=False, series_id=None):
    """
    Gridded curves, one row per time point, `NA` for a missing observation

    :param grid_header <bool>:  first row holds the grid points, otherwise
                                the grid is equispaced on [0,1] and a
                                non-numeric first row is skipped as column names
    :returns <GriddedSample>:
    """
    path = Path(path)
    series_id = series_id or path.stem
    try:
        frame = pd.read_csv(path, header=None, dtype=str, keep_default_na=False)
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise FtsInputError(f"malformed CSV: {e}", path) from None
    except OSError as e:
        raise FtsInputError(f"cannot read: {e.strerror}", path) from None
    frame = frame.apply(lambda column: column.str.strip())

    first_line = 1
    grid = None
    if grid_header:
        grid = _numeric_row(frame.iloc[0], path, 1, allow_missing=False)
        frame = frame.iloc[1:]
        first_line = 2
    elif not all(_is_float(c) or c == MISSING for c in frame.iloc[0]):
        frame = frame.iloc[1:]
        first_line = 2
    if frame.empty:
        raise FtsInputError("no data rows", path, first_line)

    values = np.vstack(
        [
            _numeric_row(row, path, first_line + i)
            for i, (_, row) in enumerate(frame.iterrows())
        ]
    )
    return GriddedSample(values, grid, series_id)


def _numeric_row(row, path, line, allow_missing=True):
    cells = row.replace(MISSING, "nan") if allow_missing else row
    numbers = pd.to_numeric(cells, errors="coerce").to_numpy(dtype=float)
    bad = np.isnan(numbers) & (cells != "nan").to_numpy()
    if np.any(bad):
        column = int(np.flatnonzero(bad)[0])
        raise FtsInputError(
            f"column {column + 1}: not a number: {row.iloc[column]!r}", path, line
        )
    return numbers


def write_matrix(path, values, ids):
    """square matrix with a header row of ids"""
    values = np.asarray(values, dtype=float)
    lines = [",".join(ids)]
    lines.extend(",".join(format_float(v) for v in row) for row in values)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def read_matrix(path):
    """
    :returns <tuple>:   (d x d ndarray, ids)
    """
    path = Path(path)
    try:
        lines = [l for l in path.read_text(encoding="utf-8").splitlines() if l.strip()]
    except OSError as e:
        raise FtsInputError(f"cannot read: {e.strerror}", path) from None
    if not lines:
        raise FtsInputError("empty matrix file", path, 1)
    ids = [c.strip() for c in lines[0].split(",")]
    d = len(ids)
    if len(lines) - 1 != d:
        raise FtsInputError(f"{d} ids but {len(lines) - 1} rows", path, len(lines))
    rows = []
    for number, line in enumerate(lines[1:], start=2):
        cells = line.split(",")
        if len(cells) != d:
            raise FtsInputError(f"expected {d} values, got {len(cells)}", path, number)
        rows.append(_parse_floats(cells, path, number))
    return np.array(rows), ids


def read_similarity(path, tolerance=1e-8):
    """SimilarityMatrix from a matrix CSV, symmetric to within `tolerance`"""
    values, ids = read_matrix(path)
    if not np.all(np.isfinite(values)):
        raise FtsInputError("similarity matrix has non-finite entries", path)
    asymmetry = np.max(np.abs(values - values.T)) if values.size else 0.0
    if asymmetry > tolerance:
        raise FtsInputError(
            f"similarity matrix is not symmetric (max |A - A'| = {asymmetry:.3g})", path
        )
    values = (values + values.T) / 2.0
    np.fill_diagonal(values, 0.0)
    return SimilarityMatrix(values, ids)


def to_builtin(value):
    """numpy values to JSON-serializable python values"""
    if isinstance(value, dict):
        return {str(k): to_builtin(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_builtin(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_builtin(value.tolist())
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, float) and not np.isfinite(value):
        return str(value)
    return value


def write_json(path, data):
    text = json.dumps(to_builtin(data), indent=2, sort_keys=True)
    Path(path).write_text(text + "\n", encoding="utf-8", newline="\n")


def read_json(path):
    path = Path(path)
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise FtsInputError(f"cannot read: {e.strerror}", path) from None
    except json.JSONDecodeError as e:
        raise FtsInputError(f"invalid JSON: {e.msg}", path, e.lineno) from None


def similarity_envelope(sim):
    """JSON form of a SimilarityMatrix with its block plan"""
    plan = sim.plan.summary() if isinstance(sim.plan, BlockPlan) else None
    return {"ids": list(sim.ids), "plan": plan, "values": sim.values}


def write_labels(path, ids, labels, models=None):
    data = {"ids": list(ids), "labels": np.asarray(labels).tolist()}
    if models is not None:
        data["models"] = list(models)
    write_json(path, data)


def read_labels(path, ids=None):
    """
    labels sidecar, reordered to `ids` when given

    :returns <ndarray>:
    """
    data = read_json(path)
    try:
        labels = list(data["labels"])
        stored = list(data.get("ids", []))
    except (KeyError, TypeError):
        raise FtsInputError("labels file needs a 'labels' list", path) from None
    if ids is None or not stored:
        return np.asarray(labels)
    lookup = dict(zip(stored, labels))
    missing = [i for i in ids if i not in lookup]
    if missing:
        raise FtsInputError(f"no label for {', '.join(missing[:5])}", path)
    return np.asarray([lookup[i] for i in ids])
