from .tree import RegressionTree, TrainingError, TreeNode, TreeParams
from .boosting import GradientBoostedTrees
from .forest import RandomForest
from .knn import KnnRegressor
from .model import ALGORITHMS, FittedModel, LearnerConfig, SCORED_COLUMN, config_from_params, train_model
from .persistence import ModelFormatError, load_model, load_model_file, save_model
from .compare import ComparisonRow, compare_models

__all__ = [
    "ALGORITHMS",
    "ComparisonRow",
    "FittedModel",
    "GradientBoostedTrees",
    "KnnRegressor",
    "LearnerConfig",
    "ModelFormatError",
    "RandomForest",
    "RegressionTree",
    "SCORED_COLUMN",
    "TrainingError",
    "TreeNode",
    "TreeParams",
    "compare_models",
    "config_from_params",
    "load_model",
    "load_model_file",
    "save_model",
    "train_model",
]
