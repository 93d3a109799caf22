import pytest

from carprice.data import parse_csv, split_data, synthesize
from carprice.learners import LearnerConfig, compare_models
from carprice.metrics import evaluate


def test_boosted_beats_single_tree_on_synthetic():
    train, test = split_data(synthesize(1600, 42), 0.75, seed=42)
    rows = compare_models(train, test, [
        ("boosted", LearnerConfig(algo="boosted")),
        ("tree", LearnerConfig(algo="tree")),
    ])
    by_name = {r.name: r.rmse for r in rows}
    assert by_name["boosted"] < by_name["tree"]
    assert [r.name for r in rows] == ["boosted", "tree"]  # sorted by RMSE


def test_single_row_tree_rmse_zero():
    ds = parse_csv("Model,Year,Battery,Price,Miles\nModel S,2013,Base,34200,36800")
    rows = compare_models(ds, ds, [("tree", LearnerConfig(algo="tree", min_samples_leaf=1))])
    assert rows[0].rmse == 0.0
    assert rows[0].report is None  # constant target: relative errors undefined


def test_zero_stage_boosted_is_mean_predictor():
    ds = synthesize(400, 8)
    train, test = split_data(ds, 0.5, seed=1)
    rows = compare_models(train, train, [("mean", LearnerConfig(algo="boosted", trees=0))])
    report = rows[0].report
    # on its own training set the mean predictor has RSE 1 and R2 0
    assert report.rse == pytest.approx(1.0, abs=1e-12)
    assert report.r2 == pytest.approx(0.0, abs=1e-12)
    assert report.rae == pytest.approx(1.0, abs=1e-12)


def test_schema_mismatch_rejected():
    a = synthesize(20, 1)
    b = parse_csv("Model,Price\nModel S,100")
    with pytest.raises(Exception):
        compare_models(a, b, [("tree", LearnerConfig(algo="tree"))])
