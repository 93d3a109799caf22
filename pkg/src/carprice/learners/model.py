"""Trained-model wrapper: a predictor plus the frozen feature encoding and
column schema it was fitted with, so records and datasets can be scored
without the caller touching matrices."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from ..data.encoding import EncodingSpec, encode, encode_record, fit_encoding
from ..data.table import ColumnSchema, Dataset
from .boosting import GradientBoostedTrees
from .forest import RandomForest
from .knn import KnnRegressor
from .tree import RegressionTree, TrainingError, TreeParams

ALGORITHMS = ("boosted", "tree", "forest", "knn")

SCORED_COLUMN = "Scored Labels"


@dataclass(frozen=True)
class LearnerConfig:
    algo: str = "boosted"
    max_leaves: int = 20
    min_samples_leaf: int = 10
    learning_rate: float = 0.2
    trees: int = 100          # boosting stages or forest size
    k: int = 5                # neighbors for knn
    seed: int = 42            # forest bootstrap seed
    include_month: bool = False

    def __post_init__(self):
        if self.algo not in ALGORITHMS:
            raise TrainingError(f"unknown algorithm {self.algo!r}, expected one of {ALGORITHMS}")

    def tree_params(self) -> TreeParams:
        return TreeParams(
            max_leaves=self.max_leaves,
            min_samples_leaf=self.min_samples_leaf,
            learning_rate=self.learning_rate,
            num_trees=self.trees,
        )


@dataclass
class FittedModel:
    kind: str
    predictor: object
    encoding: EncodingSpec
    schema: tuple[ColumnSchema, ...]
    config: LearnerConfig = field(default_factory=LearnerConfig)

    def predict_matrix(self, X: np.ndarray) -> np.ndarray:
        return self.predictor.predict(X)

    def predict_record(self, record: dict) -> float:
        x = encode_record(self.encoding, record)
        return float(self.predictor.predict(x.reshape(1, -1))[0])

    def predict_dataset(self, ds: Dataset) -> np.ndarray:
        X, _ = encode(self.encoding, ds)
        return self.predictor.predict(X)

    def score_dataset(self, ds: Dataset) -> Dataset:
        """Dataset with a trailing numeric 'Scored Labels' column appended."""
        preds = self.predict_dataset(ds)
        schema = ds.schema + (ColumnSchema(SCORED_COLUMN, "numeric", "passthrough"),)
        rows = tuple(row + (float(p),) for row, p in zip(ds.rows, preds))
        return Dataset(schema, rows)


def train_model(ds: Dataset, config: LearnerConfig) -> FittedModel:
    """Fit the configured learner on a dataset carrying a target column."""
    target = ds.target_column()
    if target is None:
        raise TrainingError("dataset has no target column to train on")
    spec = fit_encoding(ds, include_month=config.include_month)
    X, y = encode(spec, ds)
    if y is None or np.isnan(y).any():
        raise TrainingError("training rows must all carry a target value; clean missing data first")
    if len(y) == 0:
        raise TrainingError("empty training set")

    if config.algo == "boosted":
        predictor = GradientBoostedTrees.fit(X, y, config.tree_params())
    elif config.algo == "tree":
        predictor = RegressionTree.fit(X, y, config.tree_params())
    elif config.algo == "forest":
        predictor = RandomForest.fit(X, y, config.tree_params(), config.trees, config.seed)
    else:
        predictor = KnnRegressor.fit(X, y, config.k)
    return FittedModel(config.algo, predictor, spec, ds.schema, config)


def config_from_params(params: dict) -> LearnerConfig:
    """Build a LearnerConfig from a loose key/value mapping (pipeline node
    params, CLI flags), rejecting unknown keys."""
    cfg = LearnerConfig()
    known = {f for f in cfg.__dataclass_fields__}
    unknown = set(params) - known
    if unknown:
        raise TrainingError(f"unknown learner parameters: {', '.join(sorted(unknown))}")
    return replace(cfg, **params)
