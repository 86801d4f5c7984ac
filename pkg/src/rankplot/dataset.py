"""Ingestion and validation of two-column ranked data.

Supports plain RFC-4180-style CSV with a header row, and World Bank
indicator exports (metadata preamble, then one column per year) joined
pairwise on country code.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "DatasetError",
    "Observation",
    "RankedDataset",
    "ColumnSpec",
    "ValidationReport",
    "parse_csv",
    "parse_worldbank_pair",
    "to_csv",
    "to_midranks",
    "validate_dataset",
]


class DatasetError(ValueError):
    """Input cannot be turned into a usable ranked dataset."""


@dataclass(frozen=True)
class Observation:
    """One labeled (x, y) ranking pair."""

    label: str
    x: float
    y: float


@dataclass(frozen=True)
class ColumnSpec:
    """Which CSV columns hold the two ranking variables and the label.

    Selectors are either a header name or a 0-based column index.  A string
    of digits is treated as a name first, and as an index if no header
    matches.
    """

    x_column: str | int
    y_column: str | int
    label_column: str | int | None = None

    def __post_init__(self):
        if self.x_column == self.y_column:
            raise DatasetError("x_column and y_column must differ")


@dataclass(frozen=True)
class RankedDataset:
    """Labeled observations with two real-valued ranking columns.

    Observation order is stable and defines the pair indices (i, j) used
    everywhere else.  The coordinate arrays are read-only float64.
    """

    x: np.ndarray
    y: np.ndarray
    labels: tuple[str, ...] = ()
    x_name: str = "x"
    y_name: str = "y"
    dropped_rows: int = field(default=0, compare=False)

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float).reshape(-1).copy()
        y = np.asarray(self.y, dtype=float).reshape(-1).copy()
        if x.shape != y.shape:
            raise DatasetError("x and y must have the same length")
        labels = tuple(self.labels) if self.labels else tuple(
            str(i) for i in range(len(x))
        )
        if len(labels) != len(x):
            raise DatasetError("labels must match the observation count")
        x.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return self.x.size

    def __eq__(self, other) -> bool:
        if not isinstance(other, RankedDataset):
            return NotImplemented
        return (
            np.array_equal(self.x, other.x, equal_nan=True)
            and np.array_equal(self.y, other.y, equal_nan=True)
            and self.labels == other.labels
            and self.x_name == other.x_name
            and self.y_name == other.y_name
        )

    def observation(self, i: int) -> Observation:
        return Observation(self.labels[i], float(self.x[i]), float(self.y[i]))

    @property
    def observations(self) -> list[Observation]:
        return [self.observation(i) for i in range(len(self))]

    @classmethod
    def from_observations(
        cls, observations, x_name: str = "x", y_name: str = "y"
    ) -> "RankedDataset":
        obs = list(observations)
        return cls(
            x=np.array([o.x for o in obs], dtype=float),
            y=np.array([o.y for o in obs], dtype=float),
            labels=tuple(o.label for o in obs),
            x_name=x_name,
            y_name=y_name,
        )


@dataclass(frozen=True)
class ValidationReport:
    """Summary statistics produced by :func:`validate_dataset`."""

    m: int
    x_tie_groups: int
    y_tie_groups: int
    x_min: float | None
    x_max: float | None
    y_min: float | None
    y_max: float | None
    nonfinite_x: int
    nonfinite_y: int

    @property
    def ok(self) -> bool:
        return self.nonfinite_x == 0 and self.nonfinite_y == 0


def _resolve_selector(header: list[str], selector: str | int, what: str) -> int:
    if isinstance(selector, int):
        if not 0 <= selector < len(header):
            raise DatasetError(f"{what} index {selector} out of range")
        return selector
    if selector in header:
        return header.index(selector)
    if selector.isdigit():
        idx = int(selector)
        if 0 <= idx < len(header):
            return idx
    raise DatasetError(f"{what} {selector!r} not found in header {header}")


def _parse_cell(cell: str) -> float | None:
    try:
        value = float(cell)
    except (TypeError, ValueError):
        return None
    return value if math.isfinite(value) else None


def parse_csv(raw: bytes | str, spec: ColumnSpec) -> RankedDataset:
    """Parse header-led CSV into a dataset, dropping unusable rows.

    Rows whose x or y cell is missing or not a finite number are dropped and
    counted in ``dropped_rows``.  Labels come from ``spec.label_column`` or
    default to the 0-based data-row index.

    Raises DatasetError for a malformed header, an unknown selector, or
    fewer than 2 valid rows.
    """
    text = raw.decode("utf-8") if isinstance(raw, bytes) else raw
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or not any(cell.strip() for cell in rows[0]):
        raise DatasetError("missing or empty header row")
    header = rows[0]
    xi = _resolve_selector(header, spec.x_column, "x_column")
    yi = _resolve_selector(header, spec.y_column, "y_column")
    if xi == yi:
        raise DatasetError("x_column and y_column must differ")
    li = (
        _resolve_selector(header, spec.label_column, "label_column")
        if spec.label_column is not None
        else None
    )

    labels: list[str] = []
    xs: list[float] = []
    ys: list[float] = []
    dropped = 0
    for row_index, row in enumerate(rows[1:]):
        if not row or not any(cell.strip() for cell in row):
            continue  # blank line, not a data row
        x = _parse_cell(row[xi]) if xi < len(row) else None
        y = _parse_cell(row[yi]) if yi < len(row) else None
        if x is None or y is None:
            dropped += 1
            continue
        label = row[li] if li is not None and li < len(row) else str(row_index)
        labels.append(label)
        xs.append(x)
        ys.append(y)
    if len(xs) < 2:
        raise DatasetError(f"fewer than 2 valid rows (got {len(xs)})")
    return RankedDataset(
        x=np.array(xs),
        y=np.array(ys),
        labels=tuple(labels),
        x_name=header[xi],
        y_name=header[yi],
        dropped_rows=dropped,
    )


def to_csv(dataset: RankedDataset) -> str:
    """Serialize a dataset back to CSV; inverse of :func:`parse_csv`.

    Floats are written with repr, so reparsing reproduces the exact values.
    """
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["label", dataset.x_name, dataset.y_name])
    for label, x, y in zip(dataset.labels, dataset.x, dataset.y):
        writer.writerow([label, repr(float(x)), repr(float(y))])
    return out.getvalue()


_WB_HEADER = ("Country Name", "Country Code")


def _parse_worldbank(raw: bytes | str, year: int) -> tuple[str, dict, list[str]]:
    """One indicator export -> (indicator name, code -> (name, value), code order)."""
    text = raw.decode("utf-8-sig") if isinstance(raw, bytes) else raw
    rows = list(csv.reader(io.StringIO(text)))
    header_at = None
    for i, row in enumerate(rows):
        if len(row) >= 2 and (row[0].strip(), row[1].strip()) == _WB_HEADER:
            header_at = i
            break
    if header_at is None:
        raise DatasetError('no "Country Name","Country Code" header found')
    header = [cell.strip() for cell in rows[header_at]]
    if str(year) not in header:
        raise DatasetError(f"year column {year} absent from export")
    year_col = header.index(str(year))
    name_col = header.index("Indicator Name") if "Indicator Name" in header else None

    indicator = ""
    values: dict[str, tuple[str, float | None]] = {}
    order: list[str] = []
    for row in rows[header_at + 1 :]:
        if len(row) < 2 or not row[1].strip():
            continue
        code = row[1].strip()
        if name_col is not None and name_col < len(row) and not indicator:
            indicator = row[name_col].strip()
        value = _parse_cell(row[year_col]) if year_col < len(row) else None
        if code not in values:
            order.append(code)
        values[code] = (row[0].strip(), value)
    return indicator, values, order


def parse_worldbank_pair(
    indicator_x: bytes | str, indicator_y: bytes | str, year: int
) -> RankedDataset:
    """Join two World Bank indicator exports on country code for one year.

    x comes from the first export, y from the second; countries missing
    either value are dropped and counted.  Row order follows the first file.
    """
    name_x, values_x, order = _parse_worldbank(indicator_x, year)
    name_y, values_y, _ = _parse_worldbank(indicator_y, year)

    labels: list[str] = []
    xs: list[float] = []
    ys: list[float] = []
    dropped = 0
    for code in order:
        country, x = values_x[code]
        y_entry = values_y.get(code)
        y = y_entry[1] if y_entry is not None else None
        if x is None or y is None:
            dropped += 1
            continue
        labels.append(country)
        xs.append(x)
        ys.append(y)
    if len(xs) < 2:
        raise DatasetError(f"join produced fewer than 2 countries (got {len(xs)})")
    return RankedDataset(
        x=np.array(xs),
        y=np.array(ys),
        labels=tuple(labels),
        x_name=name_x or "indicator_x",
        y_name=name_y or "indicator_y",
        dropped_rows=dropped,
    )


def _midranks(values: np.ndarray) -> np.ndarray:
    # tied values share the mean of the 1-based rank positions they occupy
    unique, inverse, counts = np.unique(values, return_inverse=True, return_counts=True)
    ends = np.cumsum(counts)
    mid = ends - (counts - 1) / 2.0
    return mid[inverse]


def to_midranks(dataset: RankedDataset) -> RankedDataset:
    """Replace each column by its midranks, independently; labels kept."""
    if not (np.isfinite(dataset.x).all() and np.isfinite(dataset.y).all()):
        raise DatasetError("midranks require finite values")
    return RankedDataset(
        x=_midranks(dataset.x),
        y=_midranks(dataset.y),
        labels=dataset.labels,
        x_name=dataset.x_name,
        y_name=dataset.y_name,
    )


def _tie_groups(values: np.ndarray) -> int:
    finite = values[np.isfinite(values)]
    if finite.size == 0:
        return 0
    _, counts = np.unique(finite, return_counts=True)
    return int((counts >= 2).sum())


def validate_dataset(dataset: RankedDataset) -> ValidationReport:
    """Report size, tie structure, extents, and non-finite flags."""
    fx = np.isfinite(dataset.x)
    fy = np.isfinite(dataset.y)
    return ValidationReport(
        m=len(dataset),
        x_tie_groups=_tie_groups(dataset.x),
        y_tie_groups=_tie_groups(dataset.y),
        x_min=float(dataset.x[fx].min()) if fx.any() else None,
        x_max=float(dataset.x[fx].max()) if fx.any() else None,
        y_min=float(dataset.y[fy].min()) if fy.any() else None,
        y_max=float(dataset.y[fy].max()) if fy.any() else None,
        nonfinite_x=int((~fx).sum()),
        nonfinite_y=int((~fy).sum()),
    )
