"""The five-error evaluation suite: MAE, RMSE, relative absolute error,
relative squared error and the coefficient of determination.

RMSE divides by n (population convention). The relative errors normalize
by the mean predictor, so a constant target vector has no baseline error
to normalize by: that raises DegenerateVarianceError instead of quietly
propagating NaN. The error still carries the absolute metrics.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class MetricsError(ValueError):
    pass


class DegenerateVarianceError(MetricsError):
    """All targets equal: RAE/RSE/R2 are undefined. mae/rmse attributes
    hold the absolute errors, which are still well defined."""

    def __init__(self, mae: float, rmse: float):
        super().__init__("all target values are equal; relative errors are undefined")
        self.mae = mae
        self.rmse = rmse


@dataclass(frozen=True)
class EvaluationReport:
    mae: float
    rmse: float
    rae: float
    rse: float
    r2: float

    # Canonical display order: RMSE, RAE, RSE, R2, MAE.
    FIELD_LABELS = (
        ("rmse", "Root Mean Squared Error"),
        ("rae", "Relative Absolute Error"),
        ("rse", "Relative Squared Error"),
        ("r2", "Coefficient of Determination"),
        ("mae", "Mean Absolute Error"),
    )

    def to_ordered_dict(self) -> dict:
        return {label: getattr(self, attr) for attr, label in self.FIELD_LABELS}

    def lines(self) -> list[str]:
        return [f"{label:<29} {value:.6f}" for label, value in self.to_ordered_dict().items()]


def _check(y, y_hat) -> tuple[np.ndarray, np.ndarray]:
    y = np.asarray(y, dtype=np.float64)
    y_hat = np.asarray(y_hat, dtype=np.float64)
    if y.ndim != 1 or y_hat.ndim != 1:
        raise MetricsError("targets and predictions must be 1-dimensional")
    if len(y) != len(y_hat):
        raise MetricsError(f"length mismatch: {len(y)} targets vs {len(y_hat)} predictions")
    if len(y) == 0:
        raise MetricsError("cannot evaluate zero points")
    return y, y_hat


def mae(y, y_hat) -> float:
    y, y_hat = _check(y, y_hat)
    return float(np.sum(np.abs(y - y_hat)) / len(y))


def rmse(y, y_hat) -> float:
    y, y_hat = _check(y, y_hat)
    return float(np.sqrt(np.sum((y - y_hat) ** 2) / len(y)))


def _baseline_sums(y) -> tuple[float, float]:
    mean = np.sum(y) / len(y)
    return float(np.sum(np.abs(y - mean))), float(np.sum((y - mean) ** 2))


def rae(y, y_hat) -> float:
    y, y_hat = _check(y, y_hat)
    if np.all(y == y[0]):
        raise DegenerateVarianceError(mae(y, y_hat), rmse(y, y_hat))
    abs_base, _ = _baseline_sums(y)
    return float(np.sum(np.abs(y - y_hat)) / abs_base)


def rse(y, y_hat) -> float:
    y, y_hat = _check(y, y_hat)
    if np.all(y == y[0]):
        raise DegenerateVarianceError(mae(y, y_hat), rmse(y, y_hat))
    _, sq_base = _baseline_sums(y)
    return float(np.sum((y - y_hat) ** 2) / sq_base)


def r2(y, y_hat) -> float:
    return 1.0 - rse(y, y_hat)


def evaluate(y, y_hat) -> EvaluationReport:
    """Compute all five metrics; r2 is 1 - rse over the very same sums."""
    y, y_hat = _check(y, y_hat)
    abs_err = float(np.sum(np.abs(y - y_hat)))
    sq_err = float(np.sum((y - y_hat) ** 2))
    n = len(y)
    mae_v = abs_err / n
    rmse_v = float(np.sqrt(sq_err / n))
    if np.all(y == y[0]):
        raise DegenerateVarianceError(mae_v, rmse_v)
    abs_base, sq_base = _baseline_sums(y)
    rae_v = abs_err / abs_base
    rse_v = sq_err / sq_base
    return EvaluationReport(mae=mae_v, rmse=rmse_v, rae=rae_v, rse=rse_v, r2=1.0 - rse_v)
