"""CART decision trees with Gini impurity, and bootstrap-aggregated forests.

Determinism rules: candidate thresholds are midpoints of adjacent distinct
sorted feature values; equal-impurity ties go to the lowest feature index,
then the lowest threshold; leaf and vote ties go to the smallest class id.
Zero-gain splits are allowed (an XOR table needs one), so recursion stops
only on purity, the depth cap, min_leaf, or no valid candidate.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import EmptyDatasetError
from ..rng import Stream

__all__ = [
    "TreeNode",
    "DecisionTree",
    "ForestModel",
    "train_decision_tree",
    "train_random_forest",
]


@dataclass
class TreeNode:
    feature: int | None = None
    threshold: float | None = None
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None
    klass: int | None = None
    histogram: dict[int, int] | None = None

    @property
    def is_leaf(self) -> bool:
        return self.feature is None


@dataclass
class DecisionTree:
    root: TreeNode
    classes: np.ndarray
    max_depth: int | None
    min_leaf: int

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        out = np.empty(X.shape[0], dtype=np.int64)
        _predict_into(self.root, X, np.arange(X.shape[0]), out)
        return out


@dataclass
class ForestModel:
    trees: list[DecisionTree]
    n_trees: int
    feature_subsample: int
    seed: int
    bootstrap: bool = True
    classes: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=np.int64))

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        votes = np.stack([t.predict(X) for t in self.trees])  # (n_trees, n)
        classes = self.classes
        idx = np.searchsorted(classes, votes)
        counts = np.zeros((X.shape[0], len(classes)), dtype=np.int64)
        for t in range(votes.shape[0]):
            counts[np.arange(X.shape[0]), idx[t]] += 1
        return classes[np.argmax(counts, axis=1)]


def _predict_into(node, X, rows, out):
    if rows.size == 0:
        return
    if node.is_leaf:
        out[rows] = node.klass
        return
    go_left = X[rows, node.feature] <= node.threshold
    _predict_into(node.left, X, rows[go_left], out)
    _predict_into(node.right, X, rows[~go_left], out)


def _leaf(y_idx, classes) -> TreeNode:
    counts = np.bincount(y_idx, minlength=len(classes))
    klass = int(classes[np.argmax(counts)])
    hist = {int(classes[c]): int(counts[c]) for c in range(len(classes)) if counts[c]}
    return TreeNode(klass=klass, histogram=hist)


def _best_split(X, y_idx, n_classes, feat_candidates, min_leaf):
    """Lowest weighted Gini over midpoint thresholds; returns (feature, threshold)."""
    n = X.shape[0]
    best = (np.inf, -1, 0.0)
    for f in feat_candidates:
        order = np.argsort(X[:, f], kind="stable")
        xs = X[order, f]
        ys = y_idx[order]
        cut = np.flatnonzero(xs[:-1] < xs[1:]) + 1  # left part sizes
        if min_leaf > 1:
            cut = cut[(cut >= min_leaf) & (n - cut >= min_leaf)]
        if cut.size == 0:
            continue
        onehot = np.zeros((n, n_classes))
        onehot[np.arange(n), ys] = 1.0
        cum = np.cumsum(onehot, axis=0)
        left = cum[cut - 1]
        right = cum[-1] - left
        nl = cut.astype(np.float64)
        nr = n - nl
        gl = 1.0 - ((left / nl[:, None]) ** 2).sum(axis=1)
        gr = 1.0 - ((right / nr[:, None]) ** 2).sum(axis=1)
        weighted = (nl * gl + nr * gr) / n
        k = int(np.argmin(weighted))
        if weighted[k] < best[0]:
            thr = 0.5 * (xs[cut[k] - 1] + xs[cut[k]])
            best = (float(weighted[k]), int(f), float(thr))
    if best[1] < 0:
        return None
    return best[1], best[2]


def _grow(X, y_idx, classes, depth, max_depth, min_leaf, pick_features):
    n = X.shape[0]
    first = y_idx[0]
    if np.all(y_idx == first):
        return _leaf(y_idx, classes)
    if max_depth is not None and depth >= max_depth:
        return _leaf(y_idx, classes)
    if n < 2 * min_leaf:
        return _leaf(y_idx, classes)
    split = _best_split(X, y_idx, len(classes), pick_features(X.shape[1]), min_leaf)
    if split is None:
        return _leaf(y_idx, classes)
    f, thr = split
    go_left = X[:, f] <= thr
    node = TreeNode(feature=f, threshold=thr)
    node.left = _grow(X[go_left], y_idx[go_left], classes, depth + 1,
                      max_depth, min_leaf, pick_features)
    node.right = _grow(X[~go_left], y_idx[~go_left], classes, depth + 1,
                       max_depth, min_leaf, pick_features)
    return node


def train_decision_tree(train, max_depth: int | None = None,
                        min_leaf: int = 1) -> DecisionTree:
    if train.n_rows == 0:
        raise EmptyDatasetError("cannot train a tree on zero rows")
    X = train.features
    classes, y_idx = np.unique(train.labels, return_inverse=True)
    root = _grow(X, y_idx, classes, 0, max_depth, min_leaf, lambda d: range(d))
    return DecisionTree(root, classes, max_depth, min_leaf)


def train_random_forest(train, n_trees: int = 100, max_depth: int | None = None,
                        seed: int = 0, *, min_leaf: int = 1,
                        feature_subsample: int | None = None,
                        bootstrap: bool = True) -> ForestModel:
    if train.n_rows == 0:
        raise EmptyDatasetError("cannot train a forest on zero rows")
    if n_trees < 1:
        raise ValueError("n_trees must be >= 1")
    X = train.features
    classes, y_idx = np.unique(train.labels, return_inverse=True)
    d = X.shape[1]
    k = feature_subsample if feature_subsample is not None else max(1, round(d ** 0.5))
    k = min(k, d)
    trees = []
    for t in range(n_trees):
        st = Stream(seed, t)
        rows = st.bootstrap_indices(X.shape[0]) if bootstrap else np.arange(X.shape[0])

        def pick(n_feats, _st=st, _k=k):
            if _k >= n_feats:
                return range(n_feats)
            return np.sort(_st.shuffle_indices(n_feats)[:_k])

        root = _grow(X[rows], y_idx[rows], classes, 0, max_depth, min_leaf, pick)
        trees.append(DecisionTree(root, classes, max_depth, min_leaf))
    return ForestModel(trees, n_trees, k, seed, bootstrap, classes)
