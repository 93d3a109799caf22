"""k-nearest-neighbors regression over z-scored features.

Normalization constants come from the training matrix; a zero-variance
feature gets scale 0 so it contributes no distance at all. Prediction is
the unweighted mean of the k nearest targets under Euclidean distance,
with distance ties resolved toward the lower training-row index.
"""

from __future__ import annotations

import numpy as np

from .tree import TrainingError


class KnnRegressor:
    def __init__(self, matrix: np.ndarray, targets: np.ndarray, k: int, means: np.ndarray, scales: np.ndarray):
        self.matrix = matrix  # already z-scored
        self.targets = targets
        self.k = k
        self.means = means
        self.scales = scales

    @classmethod
    def fit(cls, X: np.ndarray, y: np.ndarray, k: int) -> "KnnRegressor":
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        if len(y) == 0:
            raise TrainingError("empty training set")
        if not 1 <= k <= len(y):
            raise TrainingError(f"k must be in [1, {len(y)}], got {k}")
        means = X.mean(axis=0)
        stds = X.std(axis=0)
        scales = np.where(stds > 0.0, 1.0 / np.where(stds > 0.0, stds, 1.0), 0.0)
        return cls((X - means) * scales, y.copy(), k, means, scales)

    def predict_one(self, x) -> float:
        x = np.asarray(x, dtype=np.float64)
        if len(x) != len(self.means):
            raise TrainingError(
                f"feature width mismatch: model expects {len(self.means)}, got {len(x)}"
            )
        z = (x - self.means) * self.scales
        d2 = np.sum((self.matrix - z) ** 2, axis=1)
        order = np.argsort(d2, kind="stable")  # stable: ties go to lower row index
        return float(np.sum(self.targets[order[: self.k]]) / self.k)

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim == 1:
            return np.array([self.predict_one(X)])
        return np.array([self.predict_one(row) for row in X])
