"""Mapping from schema'd records to fixed-width numeric feature vectors.

Categorical columns are one-hot expanded over the levels seen at fit time
(lexicographically sorted, frozen thereafter); unknown levels at scoring
time encode to an all-zero block instead of erroring so the service can
answer for unseen trims. Numeric columns pass through; month columns map
to whole months since 2019-01 when opted in as features.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .table import ColumnSchema, DataError, Dataset, SchemaError, _parse_float, _parse_month, month_index


class EncodingError(DataError):
    pass


@dataclass(frozen=True)
class FeatureSpec:
    name: str
    kind: str
    levels: tuple[str, ...] = field(default_factory=tuple)

    @property
    def width(self) -> int:
        return len(self.levels) if self.kind == "categorical" else 1


@dataclass(frozen=True)
class EncodingSpec:
    features: tuple[FeatureSpec, ...]
    target: str | None = None

    @property
    def width(self) -> int:
        return sum(f.width for f in self.features)

    @property
    def feature_names(self) -> list[str]:
        """One name per matrix column, categorical levels spelled out."""
        names = []
        for f in self.features:
            if f.kind == "categorical":
                names.extend(f"{f.name}={level}" for level in f.levels)
            else:
                names.append(f.name)
        return names

    def to_payload(self) -> dict:
        return {
            "features": [
                {"name": f.name, "kind": f.kind, "levels": list(f.levels)}
                for f in self.features
            ],
            "target": self.target,
        }

    @classmethod
    def from_payload(cls, payload: dict) -> "EncodingSpec":
        features = tuple(
            FeatureSpec(f["name"], f["kind"], tuple(f.get("levels", ())))
            for f in payload["features"]
        )
        return cls(features, payload.get("target"))


def fit_encoding(ds: Dataset, include_month: bool = False) -> EncodingSpec:
    """Freeze an encoding from training data: feature columns in schema
    order, categorical levels sorted. Month columns join the feature set
    only when include_month is set."""
    target = ds.target_column()
    features = []
    for col in ds.schema:
        if col.role == "target":
            continue
        if col.kind == "month":
            # month tags default to passthrough; a flag opts them in
            if not include_month and col.role != "feature":
                continue
        elif col.role == "passthrough":
            continue
        if col.kind == "categorical":
            levels = sorted({v for v in ds.column(col.name) if v is not None})
            features.append(FeatureSpec(col.name, "categorical", tuple(levels)))
        else:
            features.append(FeatureSpec(col.name, col.kind))
    if not features:
        raise EncodingError("no feature columns to encode")
    return EncodingSpec(tuple(features), target.name if target else None)


def _encode_value(spec: FeatureSpec, value, out: list) -> None:
    if spec.kind == "categorical":
        block = [0.0] * len(spec.levels)
        if value is not None:
            value = str(value)
            try:
                block[spec.levels.index(value)] = 1.0
            except ValueError:
                pass  # unknown level stays all-zero
        out.extend(block)
        return
    if value is None:
        raise EncodingError(f"missing value for required feature {spec.name!r}")
    if spec.kind == "numeric":
        if isinstance(value, str):
            parsed = _parse_float(value)
            if parsed is None:
                raise EncodingError(f"feature {spec.name!r}: {value!r} is not a number")
            value = parsed
        out.append(float(value))
    else:  # month
        if isinstance(value, str):
            tag = _parse_month(value)
            if tag is None:
                raise EncodingError(f"feature {spec.name!r}: {value!r} is not a YYYY-MM-DD date")
            value = month_index(tag)
        out.append(float(value))


def encode_record(spec: EncodingSpec, record: dict) -> np.ndarray:
    """Encode one mapping of column name -> raw value (text or typed)."""
    out: list[float] = []
    for f in spec.features:
        _encode_value(f, record.get(f.name), out)
    return np.array(out, dtype=np.float64)


def encode(spec: EncodingSpec, ds: Dataset) -> tuple[np.ndarray, np.ndarray | None]:
    """Encode a dataset into (matrix, target vector).

    The target vector is None when the dataset has no target column;
    missing targets become NaN. Every feature column of the spec must be
    present in the dataset schema.
    """
    indices = {}
    for f in spec.features:
        try:
            indices[f.name] = ds.column_index(f.name)
        except SchemaError:
            raise EncodingError(f"dataset lacks feature column {f.name!r}") from None
    X = np.empty((len(ds.rows), spec.width), dtype=np.float64)
    for i, row in enumerate(ds.rows):
        out: list[float] = []
        for f in spec.features:
            _encode_value(f, row[indices[f.name]], out)
        X[i, :] = out

    y = None
    if spec.target is not None and spec.target in ds.column_names:
        idx = ds.column_index(spec.target)
        y = np.array(
            [row[idx] if row[idx] is not None else np.nan for row in ds.rows],
            dtype=np.float64,
        )
    return X, y
