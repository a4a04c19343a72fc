"""k-nearest-neighbor classification on standardized features.

Distance ties break to the lower training-row index (stable argsort),
vote ties to the smallest class id.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import EmptyDatasetError
from .preprocess import Standardizer, fit_standardizer

__all__ = ["KnnModel", "train_knn"]


@dataclass
class KnnModel:
    k: int
    X: np.ndarray  # standardized training features
    y: np.ndarray
    classes: np.ndarray
    standardizer: Standardizer

    def predict(self, Xq: np.ndarray) -> np.ndarray:
        Xq = self.standardizer.apply(np.asarray(Xq, dtype=np.float64))
        out = np.empty(Xq.shape[0], dtype=np.int64)
        y_idx = np.searchsorted(self.classes, self.y)
        for start in range(0, Xq.shape[0], 256):
            block = Xq[start : start + 256]
            d2 = ((block[:, None, :] - self.X[None, :, :]) ** 2).sum(axis=2)
            order = np.argsort(d2, axis=1, kind="stable")[:, : self.k]
            for r in range(block.shape[0]):
                counts = np.bincount(y_idx[order[r]], minlength=len(self.classes))
                out[start + r] = self.classes[np.argmax(counts)]
        return out


def train_knn(train, k: int = 5) -> KnnModel:
    if train.n_rows == 0:
        raise EmptyDatasetError("cannot fit k-NN on zero rows")
    if not 1 <= k <= train.n_rows:
        raise ValueError(f"k must lie in [1, {train.n_rows}], got {k}")
    std = fit_standardizer(train.features)
    classes = np.unique(train.labels)
    return KnnModel(k, std.apply(train.features), train.labels.copy(), classes, std)
