"""Gradient-boosted regression trees under squared-error loss.

Stage-wise: the model starts at the training-target mean, and every stage
fits a tree to the residuals of the current ensemble, then adds it scaled
by the shrinkage factor. With squared error the residual is exactly the
negative gradient, so each stage is one functional descent step.
"""

from __future__ import annotations

import numpy as np

from .tree import RegressionTree, TrainingError, TreeParams, _stable_mean


class GradientBoostedTrees:
    def __init__(self, base_score: float, shrinkage: float, trees: list[RegressionTree], params: TreeParams):
        self.base_score = base_score
        self.shrinkage = shrinkage
        self.trees = list(trees)
        self.params = params

    @classmethod
    def fit(cls, X: np.ndarray, y: np.ndarray, params: TreeParams) -> "GradientBoostedTrees":
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        if len(y) == 0:
            raise TrainingError("empty training set")
        base = _stable_mean(y)
        current = np.full(len(y), base)
        trees = []
        for _ in range(params.num_trees):
            residuals = y - current
            tree = RegressionTree.fit(X, residuals, params)
            trees.append(tree)
            current = current + params.learning_rate * tree.predict(X)
        return cls(base, params.learning_rate, trees, params)

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        single = X.ndim == 1
        if single:
            X = X.reshape(1, -1)
        out = np.full(len(X), self.base_score)
        for tree in self.trees:
            out = out + self.shrinkage * tree.predict(X)
        return out

    def staged_predict(self, X: np.ndarray):
        """Yield predictions after the base score and after each stage."""
        X = np.asarray(X, dtype=np.float64)
        out = np.full(len(X), self.base_score)
        yield out.copy()
        for tree in self.trees:
            out = out + self.shrinkage * tree.predict(X)
            yield out.copy()

    def predict_one(self, x) -> float:
        return float(self.predict(np.asarray(x, dtype=np.float64))[0])
