"""Side-by-side algorithm comparison: train each configured learner on the
training split, evaluate on the held-out split, sort by RMSE ascending."""

from __future__ import annotations

from dataclasses import dataclass

from ..data.table import Dataset, SchemaError
from ..metrics import DegenerateVarianceError, EvaluationReport, evaluate
from .model import FittedModel, LearnerConfig, train_model


@dataclass(frozen=True)
class ComparisonRow:
    name: str
    rmse: float
    mae: float
    report: EvaluationReport | None  # None when test targets were constant
    model: FittedModel


def compare_models(train: Dataset, test: Dataset, configs: list[tuple[str, LearnerConfig]]) -> list[ComparisonRow]:
    if [c.name for c in train.schema] != [c.name for c in test.schema]:
        raise SchemaError("train and test datasets must share a schema")
    rows = []
    for name, config in configs:
        model = train_model(train, config)
        preds = model.predict_dataset(test)
        y = test.column(model.encoding.target)
        try:
            report = evaluate(y, preds)
            row = ComparisonRow(name, report.rmse, report.mae, report, model)
        except DegenerateVarianceError as err:
            row = ComparisonRow(name, err.rmse, err.mae, None, model)
        rows.append(row)
    rows.sort(key=lambda r: r.rmse)
    return rows
