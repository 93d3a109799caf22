"""Tabular dataset with a typed column schema and the preprocessing operations
used to assemble training data: row concatenation, column selection, missing-row
removal, metadata (type) edits, randomized splitting and price statistics.

Cells are plain Python values: float for numeric columns, str for categorical
and month columns, None for a missing cell. Datasets are immutable after
construction and safe to share between threads.
"""

from __future__ import annotations

import csv
import io
import math
from collections import Counter
from dataclasses import dataclass, field

from ..rng import SplitMix64

KINDS = ("categorical", "numeric", "month")
ROLES = ("feature", "target", "passthrough")

# Column names that get a non-categorical kind by default when a CSV schema
# is inferred. Everything else is numeric only if every value parses.
DEFAULT_NUMERIC_NAMES = ("Price", "Miles")
DEFAULT_MONTH_NAMES = ("Date",)
TARGET_NAME = "Price"


class DataError(ValueError):
    """Base error for dataset construction and preprocessing failures."""


class ParseError(DataError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class SchemaError(DataError):
    pass


@dataclass(frozen=True)
class ColumnSchema:
    name: str
    kind: str = "categorical"
    role: str = "feature"
    missing_allowed: bool = True

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SchemaError(f"unknown column kind {self.kind!r}, expected one of {KINDS}")
        if self.role not in ROLES:
            raise SchemaError(f"unknown column role {self.role!r}, expected one of {ROLES}")


@dataclass(frozen=True)
class Dataset:
    schema: tuple[ColumnSchema, ...]
    rows: tuple[tuple, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "schema", tuple(self.schema))
        object.__setattr__(self, "rows", tuple(tuple(r) for r in self.rows))
        names = [c.name for c in self.schema]
        dupes = [n for n, c in Counter(names).items() if c > 1]
        if dupes:
            raise SchemaError(f"duplicate column names: {', '.join(sorted(dupes))}")
        width = len(self.schema)
        for i, row in enumerate(self.rows):
            if len(row) != width:
                raise DataError(f"row {i} has {len(row)} cells, schema has {width} columns")
            for col, cell in zip(self.schema, row):
                if cell is None:
                    continue
                if col.kind == "numeric" and not isinstance(cell, float):
                    raise DataError(f"row {i}, column {col.name}: numeric cell must be float, got {type(cell).__name__}")
                if col.kind in ("categorical", "month") and not isinstance(cell, str):
                    raise DataError(f"row {i}, column {col.name}: {col.kind} cell must be str, got {type(cell).__name__}")

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def column_names(self) -> list[str]:
        return [c.name for c in self.schema]

    def column_index(self, name: str) -> int:
        for i, col in enumerate(self.schema):
            if col.name == name:
                return i
        raise SchemaError(f"no column named {name!r}; available: {', '.join(self.column_names)}")

    def column(self, name: str) -> list:
        idx = self.column_index(name)
        return [row[idx] for row in self.rows]

    def target_column(self) -> ColumnSchema | None:
        targets = [c for c in self.schema if c.role == "target"]
        if len(targets) > 1:
            raise SchemaError("more than one target column: " + ", ".join(c.name for c in targets))
        return targets[0] if targets else None


@dataclass(frozen=True)
class DatasetStats:
    count: int
    price_mean: float
    price_median: float
    price_mode: float
    per_model_mean: dict


def _parse_float(text: str) -> float | None:
    try:
        v = float(text)
    except ValueError:
        return None
    return v if math.isfinite(v) else None


def _parse_month(text: str) -> str | None:
    """Normalize a YYYY-MM-DD (or YYYY-MM) month tag; None if malformed."""
    parts = text.strip().split("-")
    if len(parts) not in (2, 3):
        return None
    try:
        year, month = int(parts[0]), int(parts[1])
        day = int(parts[2]) if len(parts) == 3 else 1
    except ValueError:
        return None
    if not (1000 <= year <= 9999 and 1 <= month <= 12 and 1 <= day <= 31):
        return None
    return f"{year:04d}-{month:02d}-{day:02d}"


def month_index(tag: str, epoch_year: int = 2019, epoch_month: int = 1) -> int:
    """Whole months since the epoch month (2019-01 -> 0, 2019-03 -> 2)."""
    year, month = int(tag[0:4]), int(tag[5:7])
    return (year - epoch_year) * 12 + (month - epoch_month)


def _coerce_cell(text: str | None, kind: str):
    if text is None:
        return None
    if kind == "numeric":
        return _parse_float(text)
    if kind == "month":
        return _parse_month(text)
    return text


def _default_role(name: str, kind: str) -> str:
    if name == TARGET_NAME:
        return "target"
    if kind == "month":
        # Month tags ride along but are not model inputs unless opted in.
        return "passthrough"
    return "feature"


def parse_csv(text: str | bytes, schema_hint: list[ColumnSchema] | None = None) -> Dataset:
    """Parse UTF-8 CSV text with a header line into a Dataset.

    Empty fields are missing. Column kinds are inferred unless a hint entry
    with the same name overrides them: a column is numeric iff every
    non-missing value parses as a finite number, Price/Miles default to
    numeric, Date to month, everything else is categorical.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    reader = csv.reader(io.StringIO(text))
    table = list(reader)
    # csv.reader can emit empty records for blank trailing lines; drop them
    while table and table[-1] == []:
        table.pop()
    if not table:
        raise ParseError("input has no header row", line=1)
    header = [h.strip() for h in table[0]]
    if any(not h for h in header):
        raise SchemaError("header contains an empty column name")
    dupes = [n for n, c in Counter(header).items() if c > 1]
    if dupes:
        raise SchemaError(f"duplicate header names: {', '.join(sorted(dupes))}")

    width = len(header)
    raw_rows: list[list[str | None]] = []
    for line_no, record in enumerate(table[1:], start=2):
        if len(record) != width:
            raise ParseError(f"expected {width} fields, found {len(record)}", line=line_no)
        raw_rows.append([cell.strip() or None for cell in record])

    hints = {c.name: c for c in schema_hint} if schema_hint else {}
    columns: list[ColumnSchema] = []
    for j, name in enumerate(header):
        if name in hints:
            columns.append(hints[name])
            continue
        values = [row[j] for row in raw_rows if row[j] is not None]
        if name in DEFAULT_MONTH_NAMES:
            kind = "month"
        elif name in DEFAULT_NUMERIC_NAMES:
            kind = "numeric"
        elif values and all(_parse_float(v) is not None for v in values):
            kind = "numeric"
        else:
            kind = "categorical"
        columns.append(ColumnSchema(name, kind, _default_role(name, kind)))

    rows = [
        tuple(_coerce_cell(cell, col.kind) for cell, col in zip(row, columns))
        for row in raw_rows
    ]
    return Dataset(tuple(columns), tuple(rows))


def format_cell(cell, kind: str) -> str:
    if cell is None:
        return ""
    if kind == "numeric":
        return str(int(cell)) if float(cell).is_integer() else repr(float(cell))
    return str(cell)


def to_csv(ds: Dataset) -> str:
    """Render a Dataset back to CSV text; parse_csv(to_csv(ds)) round-trips
    schema kinds and cell values."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow([c.name for c in ds.schema])
    for row in ds.rows:
        writer.writerow([format_cell(cell, col.kind) for cell, col in zip(row, ds.schema)])
    return out.getvalue()


def add_rows(a: Dataset, b: Dataset) -> Dataset:
    """Concatenate two datasets with identical schemas, a's rows first."""
    if len(a.schema) != len(b.schema):
        raise SchemaError(
            f"datasets need to be same: {len(a.schema)} vs {len(b.schema)} columns"
        )
    for ca, cb in zip(a.schema, b.schema):
        if (ca.name, ca.kind) != (cb.name, cb.kind):
            raise SchemaError(f"datasets need to be same: column {ca.name!r} differs")
    return Dataset(a.schema, a.rows + b.rows)


def select_columns(ds: Dataset, names: list[str]) -> Dataset:
    """Project and reorder columns to the given names; rows unchanged."""
    indices = [ds.column_index(n) for n in names]
    schema = tuple(ds.schema[i] for i in indices)
    rows = tuple(tuple(row[i] for i in indices) for row in ds.rows)
    return Dataset(schema, rows)


def clean_missing(ds: Dataset) -> tuple[Dataset, int]:
    """Drop every row containing a missing cell; returns (dataset, dropped)."""
    kept = tuple(row for row in ds.rows if all(cell is not None for cell in row))
    return Dataset(ds.schema, kept), len(ds.rows) - len(kept)


def edit_metadata(ds: Dataset, column: str, new_kind: str) -> Dataset:
    """Change a column's declared kind, re-parsing its values; values that
    fail to re-parse become missing."""
    idx = ds.column_index(column)
    old = ds.schema[idx]
    if new_kind == old.kind:
        return ds
    new_col = ColumnSchema(old.name, new_kind, old.role, old.missing_allowed)
    schema = ds.schema[:idx] + (new_col,) + ds.schema[idx + 1:]
    rows = []
    for row in ds.rows:
        cell = row[idx]
        if cell is not None:
            cell = _coerce_cell(format_cell(cell, old.kind), new_kind)
        rows.append(row[:idx] + (cell,) + row[idx + 1:])
    return Dataset(schema, tuple(rows))


def split_data(ds: Dataset, fraction: float, seed: int) -> tuple[Dataset, Dataset]:
    """Randomized split: rows are permuted with a seeded splitmix64
    Fisher-Yates shuffle and the first round-half-up(fraction*n) go left."""
    if not 0.0 <= fraction <= 1.0:
        raise DataError(f"split fraction must be in [0, 1], got {fraction}")
    n = len(ds.rows)
    k = math.floor(fraction * n + 0.5)
    order = list(range(n))
    SplitMix64(seed).shuffle(order)
    left = tuple(ds.rows[i] for i in order[:k])
    right = tuple(ds.rows[i] for i in order[k:])
    return Dataset(ds.schema, left), Dataset(ds.schema, right)


def summarize(ds: Dataset) -> DatasetStats:
    """Price mean/median/mode over non-missing rows plus per-model means.

    The median of an even count is the average of the two central values;
    mode ties break to the smallest value.
    """
    prices = [p for p in ds.column(TARGET_NAME) if p is not None]
    if not prices:
        raise DataError("no non-missing Price values to summarize")
    ordered = sorted(prices)
    n = len(ordered)
    mean = sum(ordered) / n
    if n % 2 == 1:
        median = ordered[n // 2]
    else:
        median = (ordered[n // 2 - 1] + ordered[n // 2]) / 2
    counts = Counter(ordered)
    mode = min(counts, key=lambda v: (-counts[v], v))

    per_model: dict[str, float] = {}
    if "Model" in ds.column_names:
        sums: dict[str, list] = {}
        price_idx = ds.column_index(TARGET_NAME)
        model_idx = ds.column_index("Model")
        for row in ds.rows:
            model, price = row[model_idx], row[price_idx]
            if model is None or price is None:
                continue
            bucket = sums.setdefault(model, [0.0, 0])
            bucket[0] += price
            bucket[1] += 1
        per_model = {m: s / c for m, (s, c) in sorted(sums.items())}

    return DatasetStats(len(ds.rows), mean, median, mode, per_model)
