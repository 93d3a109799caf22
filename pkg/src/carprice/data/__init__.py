from .table import (
    ColumnSchema,
    DataError,
    Dataset,
    DatasetStats,
    ParseError,
    SchemaError,
    add_rows,
    clean_missing,
    edit_metadata,
    month_index,
    parse_csv,
    select_columns,
    split_data,
    summarize,
    to_csv,
)
from .encoding import EncodingError, EncodingSpec, FeatureSpec, encode, encode_record, fit_encoding
from .synthetic import synthesize

__all__ = [
    "ColumnSchema",
    "DataError",
    "Dataset",
    "DatasetStats",
    "EncodingError",
    "EncodingSpec",
    "FeatureSpec",
    "ParseError",
    "SchemaError",
    "add_rows",
    "clean_missing",
    "edit_metadata",
    "encode",
    "encode_record",
    "fit_encoding",
    "month_index",
    "parse_csv",
    "select_columns",
    "split_data",
    "summarize",
    "synthesize",
    "to_csv",
]
