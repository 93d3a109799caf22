"""Used-car price prediction engine: dataset preparation, from-scratch
regression learners, a five-metric evaluator, a dataflow pipeline runner
and an HTTP scoring service."""

from .data import (
    Dataset,
    add_rows,
    clean_missing,
    edit_metadata,
    encode,
    fit_encoding,
    parse_csv,
    select_columns,
    split_data,
    summarize,
    synthesize,
    to_csv,
)
from .learners import (
    LearnerConfig,
    compare_models,
    load_model,
    load_model_file,
    save_model,
    train_model,
)
from .metrics import EvaluationReport, evaluate
from .pipeline import export_scored_csv, parse_graph, run_graph
from .service import batch_score_file, build_server, serve

__version__ = "0.1.0"
