"""Bagged random forest: bootstrap-resampled trees with per-split feature
subsampling, averaged. Each tree takes its own generator seeded from the
master seed, so the ensemble is reproducible tree by tree."""

from __future__ import annotations

import math

import numpy as np

from ..rng import SplitMix64
from .tree import RegressionTree, TrainingError, TreeParams


class RandomForest:
    def __init__(self, trees: list[RegressionTree], seed: int, feature_subset_size: int, params: TreeParams):
        self.trees = list(trees)
        self.seed = seed
        self.feature_subset_size = feature_subset_size
        self.params = params

    @classmethod
    def fit(
        cls,
        X: np.ndarray,
        y: np.ndarray,
        params: TreeParams,
        n_trees: int,
        seed: int,
        bootstrap: bool = True,
        feature_subset_size: int | None = None,
    ) -> "RandomForest":
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        if n_trees < 1:
            raise TrainingError("n_trees must be >= 1")
        if len(y) == 0:
            raise TrainingError("empty training set")
        n, p = X.shape
        if feature_subset_size is None:
            feature_subset_size = math.ceil(math.sqrt(p))
        master = SplitMix64(seed)
        trees = []
        for _ in range(n_trees):
            rng = SplitMix64(master.next_u64())
            if bootstrap:
                idx = np.array([rng.randbelow(n) for _ in range(n)])
                Xb, yb = X[idx], y[idx]
            else:
                Xb, yb = X, y
            trees.append(
                RegressionTree.fit(Xb, yb, params, feature_rng=rng, feature_subset_size=feature_subset_size)
            )
        return cls(trees, seed, feature_subset_size, params)

    def predict(self, X: np.ndarray) -> np.ndarray:
        """Arithmetic mean of per-tree predictions, accumulated in tree order."""
        X = np.asarray(X, dtype=np.float64)
        single = X.ndim == 1
        if single:
            X = X.reshape(1, -1)
        total = np.zeros(len(X))
        for tree in self.trees:
            total = total + tree.predict(X)
        return total / len(self.trees)

    def predict_one(self, x) -> float:
        return float(self.predict(np.asarray(x, dtype=np.float64))[0])
