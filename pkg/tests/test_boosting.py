import numpy as np
import pytest

from carprice.learners import GradientBoostedTrees, TrainingError, TreeParams

STEP_X = np.array([[0.0], [1.0], [2.0], [3.0]])
STEP_Y = np.array([0.0, 0.0, 10.0, 10.0])


def params(**kw):
    return TreeParams(**{"max_leaves": 2, "min_samples_leaf": 1, "num_trees": 1, "learning_rate": 1.0, **kw})


def test_constant_target_fixed_point():
    y = np.full(6, 7.0)
    X = np.arange(6, dtype=float).reshape(-1, 1)
    model = GradientBoostedTrees.fit(X, y, params(num_trees=5, learning_rate=0.3))
    assert model.base_score == 7.0
    for tree in model.trees:
        assert len(tree.nodes) == 1
        assert tree.nodes[0].value == 0.0
    assert np.all(model.predict(X) == 7.0)


def test_single_stage_full_shrinkage():
    model = GradientBoostedTrees.fit(STEP_X, STEP_Y, params())
    assert model.base_score == 5.0
    stump = model.trees[0]
    leaf_values = sorted(n.value for n in stump.nodes if n.is_leaf)
    assert leaf_values == [-5.0, 5.0]
    assert list(model.predict(STEP_X)) == [0.0, 0.0, 10.0, 10.0]


def test_single_stage_half_shrinkage():
    model = GradientBoostedTrees.fit(STEP_X, STEP_Y, params(learning_rate=0.5))
    assert list(model.predict(STEP_X)) == [2.5, 2.5, 7.5, 7.5]


def test_zero_stage_model_predicts_base_score():
    model = GradientBoostedTrees.fit(STEP_X, STEP_Y, params(num_trees=0))
    assert model.trees == []
    assert list(model.predict(STEP_X)) == [5.0] * 4
    assert model.predict_one([99.0]) == 5.0


def test_training_rmse_non_increasing():
    rng = np.random.default_rng(9)
    X = rng.normal(size=(200, 3))
    y = 100.0 * X[:, 0] - 40.0 * X[:, 1] ** 2 + rng.normal(0.0, 5.0, size=200)
    model = GradientBoostedTrees.fit(
        X, y, params(num_trees=40, learning_rate=0.2, max_leaves=8, min_samples_leaf=5)
    )
    path = [float(np.sqrt(np.mean((y - stage) ** 2))) for stage in model.staged_predict(X)]
    assert len(path) == 41
    for earlier, later in zip(path[:-1], path[1:]):
        assert later <= earlier + 1e-9


def test_tree_order_independent_within_tolerance():
    rng = np.random.default_rng(13)
    X = rng.normal(size=(100, 2))
    y = rng.normal(50_000.0, 10_000.0, size=100)
    model = GradientBoostedTrees.fit(
        X, y, params(num_trees=30, learning_rate=0.2, max_leaves=6, min_samples_leaf=3)
    )
    reordered = GradientBoostedTrees(
        model.base_score, model.shrinkage, list(reversed(model.trees)), model.params
    )
    q = rng.normal(size=(25, 2))
    a, b = model.predict(q), reordered.predict(q)
    assert np.all(np.abs(a - b) <= 1e-9 * np.abs(a))


def test_empty_training_set():
    with pytest.raises(TrainingError):
        GradientBoostedTrees.fit(np.empty((0, 1)), np.empty(0), params())
