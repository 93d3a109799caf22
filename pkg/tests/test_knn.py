import numpy as np
import pytest

from carprice.learners import KnnRegressor, TrainingError


def test_k1_exact_match():
    X = np.array([[0.0], [5.0], [10.0]])
    y = np.array([1.0, 2.0, 3.0])
    model = KnnRegressor.fit(X, y, k=1)
    assert model.predict_one([5.0]) == 2.0


def test_k2_mean_of_two_nearest():
    # query sits at distance 1 and 2 (in z-space ratios) from the two points
    X = np.array([[0.0], [3.0], [100.0]])
    y = np.array([10.0, 20.0, 999.0])
    model = KnnRegressor.fit(X, y, k=2)
    assert model.predict_one([1.0]) == 15.0


def test_scale_invariance_after_zscore():
    rng = np.random.default_rng(10)
    X = rng.normal(size=(30, 2))
    y = rng.normal(size=30)
    q = rng.normal(size=2)
    base = KnnRegressor.fit(X, y, k=5).predict_one(q)
    X2 = X.copy()
    X2[:, 1] *= 1000.0
    q2 = q.copy()
    q2[1] *= 1000.0
    scaled = KnnRegressor.fit(X2, y, k=5).predict_one(q2)
    assert scaled == pytest.approx(base, rel=1e-9)


def test_k_equals_n_predicts_training_mean():
    rng = np.random.default_rng(14)
    X = rng.normal(size=(25, 3))
    y = rng.normal(size=25)
    model = KnnRegressor.fit(X, y, k=25)
    for q in rng.normal(size=(5, 3)):
        assert model.predict_one(q) == pytest.approx(np.mean(y), rel=1e-12)


def test_distance_tie_breaks_to_lower_index():
    X = np.array([[1.0], [-1.0], [1.0]])
    y = np.array([100.0, 200.0, 300.0])
    model = KnnRegressor.fit(X, y, k=1)
    # rows 0 and 2 are equidistant from the query; row 0 wins
    assert model.predict_one([0.5]) == 100.0


def test_zero_variance_feature_contributes_nothing():
    X = np.array([[1.0, 7.0], [2.0, 7.0], [3.0, 7.0]])
    y = np.array([1.0, 2.0, 3.0])
    model = KnnRegressor.fit(X, y, k=1)
    # wildly different constant-feature value must not affect neighbors
    assert model.predict_one([1.0, -9999.0]) == 1.0


def test_k_out_of_range():
    X = np.zeros((3, 1))
    y = np.zeros(3)
    with pytest.raises(TrainingError):
        KnnRegressor.fit(X, y, k=0)
    with pytest.raises(TrainingError):
        KnnRegressor.fit(X, y, k=4)


def test_batch_predict():
    X = np.array([[0.0], [1.0], [2.0]])
    y = np.array([0.0, 10.0, 20.0])
    model = KnnRegressor.fit(X, y, k=1)
    assert list(model.predict(np.array([[0.1], [1.9]]))) == [0.0, 20.0]


def test_width_mismatch():
    model = KnnRegressor.fit(np.zeros((3, 2)), np.zeros(3), k=1)
    with pytest.raises(TrainingError):
        model.predict_one([1.0])
