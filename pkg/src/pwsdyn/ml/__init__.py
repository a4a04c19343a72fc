"""From-scratch classifiers and neural nets with deterministic training."""

from .knn import KnnModel, train_knn
from .linear import LinearModel, train_linear_svm, train_logistic_regression
from .metrics import EvalReport, evaluate, report_csv_lines, report_text
from .modelio import load_model, save_model
from .nn import (
    AdamState,
    Conv2D,
    Dense,
    Dropout,
    Flatten,
    MaxPool2D,
    NeuralNet,
    Softmax,
    build_cnn,
    build_mlp,
    gradient_check,
    param_count,
    train_nn,
)
from .preprocess import Standardizer, fit_standardizer
from .tree import DecisionTree, ForestModel, TreeNode, train_decision_tree, train_random_forest

__all__ = [
    "KnnModel",
    "train_knn",
    "LinearModel",
    "train_linear_svm",
    "train_logistic_regression",
    "EvalReport",
    "evaluate",
    "report_csv_lines",
    "report_text",
    "load_model",
    "save_model",
    "AdamState",
    "Conv2D",
    "Dense",
    "Dropout",
    "Flatten",
    "MaxPool2D",
    "NeuralNet",
    "Softmax",
    "build_cnn",
    "build_mlp",
    "gradient_check",
    "param_count",
    "train_nn",
    "Standardizer",
    "fit_standardizer",
    "DecisionTree",
    "ForestModel",
    "TreeNode",
    "train_decision_tree",
    "train_random_forest",
]
