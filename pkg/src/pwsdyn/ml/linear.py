"""Multinomial logistic regression and linear one-vs-rest SVM on standardized features.

Logistic regression runs full-batch gradient descent on the softmax
cross-entropy from a zero init, so training is deterministic without a
seed.  The SVM runs seeded per-sample subgradient descent on the hinge
loss with L2 regularization.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import EmptyDatasetError
from ..rng import Stream
from .preprocess import Standardizer, fit_standardizer

__all__ = ["LinearModel", "train_logistic_regression", "train_linear_svm", "softmax"]


def softmax(Z: np.ndarray) -> np.ndarray:
    Z = Z - Z.max(axis=1, keepdims=True)
    E = np.exp(Z)
    return E / E.sum(axis=1, keepdims=True)


@dataclass
class LinearModel:
    weights: np.ndarray  # (n_classes, n_features)
    biases: np.ndarray  # (n_classes,)
    kind: str  # "logistic" | "svm"
    classes: np.ndarray
    standardizer: Standardizer

    def scores(self, X: np.ndarray) -> np.ndarray:
        Xs = self.standardizer.apply(np.asarray(X, dtype=np.float64))
        return Xs @ self.weights.T + self.biases

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        return softmax(self.scores(X))

    def predict(self, X: np.ndarray) -> np.ndarray:
        return self.classes[np.argmax(self.scores(X), axis=1)]


def train_logistic_regression(train, epochs: int = 500, lr: float = 0.1) -> LinearModel:
    if train.n_rows == 0:
        raise EmptyDatasetError("cannot fit logistic regression on zero rows")
    std = fit_standardizer(train.features)
    X = std.apply(train.features)
    classes, y_idx = np.unique(train.labels, return_inverse=True)
    n, d = X.shape
    C = len(classes)
    Y = np.zeros((n, C))
    Y[np.arange(n), y_idx] = 1.0
    W = np.zeros((C, d))
    b = np.zeros(C)
    for _ in range(epochs):
        P = softmax(X @ W.T + b)
        G = (P - Y) / n
        W -= lr * (G.T @ X)
        b -= lr * G.sum(axis=0)
    return LinearModel(W, b, "logistic", classes, std)


def train_linear_svm(train, epochs: int = 500, lr: float = 0.1,
                     reg: float = 1e-4, seed: int = 0) -> LinearModel:
    if train.n_rows == 0:
        raise EmptyDatasetError("cannot fit an SVM on zero rows")
    std = fit_standardizer(train.features)
    X = std.apply(train.features)
    classes, y_idx = np.unique(train.labels, return_inverse=True)
    n, d = X.shape
    C = len(classes)
    signs = np.where(y_idx[:, None] == np.arange(C)[None, :], 1.0, -1.0)  # (n, C)
    W = np.zeros((C, d))
    b = np.zeros(C)
    for epoch in range(epochs):
        order = Stream(seed, epoch).shuffle_indices(n)
        for i in order:
            x = X[i]
            yi = signs[i]
            margin = yi * (W @ x + b)
            active = margin < 1.0
            W *= 1.0 - lr * reg
            if active.any():
                W[active] += lr * yi[active, None] * x[None, :]
                b[active] += lr * yi[active]
    return LinearModel(W, b, "svm", classes, std)
