"""Versioned plain-text model serialization.

Every model kind round-trips through ``save_model``/``load_model``.
Parameters are written in base-10 with 17 significant digits, so floats
survive exactly and repeated saves are byte-identical.
"""

from __future__ import annotations

import numpy as np

from ..errors import ParseError
from .knn import KnnModel
from .linear import LinearModel
from .nn import Conv2D, Dense, Dropout, Flatten, MaxPool2D, NeuralNet, Softmax
from .preprocess import Standardizer
from .tree import DecisionTree, ForestModel, TreeNode

__all__ = ["save_model", "load_model"]

_MAGIC = "pwsdyn-model 1"


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def _fmt_vec(arr) -> str:
    return " ".join(_fmt(v) for v in np.asarray(arr, dtype=np.float64).reshape(-1))


def _tree_lines(node: TreeNode, out: list[str]) -> None:
    if node.is_leaf:
        hist = " ".join(f"{k}:{v}" for k, v in sorted(node.histogram.items()))
        out.append(f"leaf {node.klass} {hist}")
    else:
        out.append(f"split {node.feature} {_fmt(node.threshold)}")
        _tree_lines(node.left, out)
        _tree_lines(node.right, out)


def _read_tree(lines, pos: int) -> tuple[TreeNode, int]:
    parts = lines[pos].split()
    if parts[0] == "leaf":
        hist = {}
        for cell in parts[2:]:
            k, v = cell.split(":")
            hist[int(k)] = int(v)
        return TreeNode(klass=int(parts[1]), histogram=hist), pos + 1
    if parts[0] != "split":
        raise ParseError(f"expected split/leaf, got {parts[0]!r}", line=pos + 1)
    node = TreeNode(feature=int(parts[1]), threshold=float(parts[2]))
    node.left, pos = _read_tree(lines, pos + 1)
    node.right, pos = _read_tree(lines, pos)
    return node, pos


def _depth_str(d) -> str:
    return "none" if d is None else str(d)


def _parse_depth(s: str):
    return None if s == "none" else int(s)


def save_model(model, path) -> None:
    lines: list[str] = []
    if isinstance(model, DecisionTree):
        lines.append(f"{_MAGIC} tree")
        lines.append("classes " + " ".join(str(int(c)) for c in model.classes))
        lines.append(f"max_depth {_depth_str(model.max_depth)}")
        lines.append(f"min_leaf {model.min_leaf}")
        _tree_lines(model.root, lines)
    elif isinstance(model, ForestModel):
        lines.append(f"{_MAGIC} forest")
        lines.append("classes " + " ".join(str(int(c)) for c in model.classes))
        lines.append(f"n_trees {model.n_trees}")
        lines.append(f"feature_subsample {model.feature_subsample}")
        lines.append(f"seed {model.seed}")
        lines.append(f"bootstrap {'true' if model.bootstrap else 'false'}")
        t0 = model.trees[0]
        lines.append(f"max_depth {_depth_str(t0.max_depth)}")
        lines.append(f"min_leaf {t0.min_leaf}")
        for t in model.trees:
            lines.append("tree")
            _tree_lines(t.root, lines)
    elif isinstance(model, KnnModel):
        lines.append(f"{_MAGIC} knn")
        lines.append(f"k {model.k}")
        lines.append("classes " + " ".join(str(int(c)) for c in model.classes))
        lines.append("mean " + _fmt_vec(model.standardizer.mean))
        lines.append("std " + _fmt_vec(model.standardizer.std))
        lines.append(f"rows {model.X.shape[0]} {model.X.shape[1]}")
        for row, lab in zip(model.X, model.y):
            lines.append(_fmt_vec(row) + f" {int(lab)}")
    elif isinstance(model, LinearModel):
        lines.append(f"{_MAGIC} linear")
        lines.append(f"kind {model.kind}")
        lines.append("classes " + " ".join(str(int(c)) for c in model.classes))
        lines.append("mean " + _fmt_vec(model.standardizer.mean))
        lines.append("std " + _fmt_vec(model.standardizer.std))
        lines.append(f"weights {model.weights.shape[0]} {model.weights.shape[1]}")
        for row in model.weights:
            lines.append(_fmt_vec(row))
        lines.append("biases " + _fmt_vec(model.biases))
    elif isinstance(model, NeuralNet):
        lines.append(f"{_MAGIC} nn")
        if model.input_shape is None:
            lines.append("input_shape none")
        else:
            lines.append("input_shape " + " ".join(str(v) for v in model.input_shape))
        if model.classes is None:
            lines.append("classes none")
        else:
            lines.append("classes " + " ".join(str(int(c)) for c in model.classes))
        if model.standardizer is None:
            lines.append("standardizer none")
        else:
            lines.append("standardizer yes")
            lines.append("mean " + _fmt_vec(model.standardizer.mean))
            lines.append("std " + _fmt_vec(model.standardizer.std))
        lines.append(f"layers {len(model.layers)}")
        for layer in model.layers:
            lines.append("layer " + layer.spec())
        for li, name, arr in model.param_items():
            shape = " ".join(str(s) for s in arr.shape)
            lines.append(f"param {li} {name} {arr.ndim} {shape}")
            flat = arr.reshape(-1)
            for start in range(0, flat.size, 8):
                lines.append(" ".join(_fmt(v) for v in flat[start : start + 8]))
    else:
        raise TypeError(f"cannot serialize model of type {type(model).__name__}")
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _layer_from_spec(parts: list[str]):
    kind = parts[0]
    if kind == "dense":
        act = None if parts[3] == "linear" else parts[3]
        return Dense(int(parts[1]), int(parts[2]), act)
    if kind == "conv2d":
        act = None if parts[4] == "linear" else parts[4]
        return Conv2D(int(parts[1]), int(parts[2]), int(parts[3]), act)
    if kind == "maxpool":
        return MaxPool2D(int(parts[1]))
    if kind == "flatten":
        return Flatten()
    if kind == "dropout":
        return Dropout(float(parts[1]))
    if kind == "softmax":
        return Softmax()
    raise ParseError(f"unknown layer kind {kind!r}", line=0)


def load_model(path):
    with open(path, "r", encoding="ascii") as fh:
        lines = fh.read().splitlines()
    if not lines or not lines[0].startswith(_MAGIC):
        raise ParseError("not a pwsdyn model file", line=1)
    kind = lines[0].split()[-1]
    if kind == "tree":
        classes = np.array([int(v) for v in lines[1].split()[1:]], dtype=np.int64)
        max_depth = _parse_depth(lines[2].split()[1])
        min_leaf = int(lines[3].split()[1])
        root, _ = _read_tree(lines, 4)
        return DecisionTree(root, classes, max_depth, min_leaf)
    if kind == "forest":
        classes = np.array([int(v) for v in lines[1].split()[1:]], dtype=np.int64)
        n_trees = int(lines[2].split()[1])
        feature_subsample = int(lines[3].split()[1])
        seed = int(lines[4].split()[1])
        bootstrap = lines[5].split()[1] == "true"
        max_depth = _parse_depth(lines[6].split()[1])
        min_leaf = int(lines[7].split()[1])
        pos = 8
        trees = []
        for _ in range(n_trees):
            if lines[pos] != "tree":
                raise ParseError("expected tree marker", line=pos + 1)
            root, pos = _read_tree(lines, pos + 1)
            trees.append(DecisionTree(root, classes, max_depth, min_leaf))
        return ForestModel(trees, n_trees, feature_subsample, seed, bootstrap, classes)
    if kind == "knn":
        k = int(lines[1].split()[1])
        classes = np.array([int(v) for v in lines[2].split()[1:]], dtype=np.int64)
        mean = np.array([float(v) for v in lines[3].split()[1:]])
        std = np.array([float(v) for v in lines[4].split()[1:]])
        n, d = (int(v) for v in lines[5].split()[1:])
        X = np.empty((n, d))
        y = np.empty(n, dtype=np.int64)
        for i in range(n):
            cells = lines[6 + i].split()
            X[i] = [float(v) for v in cells[:-1]]
            y[i] = int(cells[-1])
        return KnnModel(k, X, y, classes, Standardizer(mean, std))
    if kind == "linear":
        lin_kind = lines[1].split()[1]
        classes = np.array([int(v) for v in lines[2].split()[1:]], dtype=np.int64)
        mean = np.array([float(v) for v in lines[3].split()[1:]])
        std = np.array([float(v) for v in lines[4].split()[1:]])
        c, d = (int(v) for v in lines[5].split()[1:])
        W = np.empty((c, d))
        for i in range(c):
            W[i] = [float(v) for v in lines[6 + i].split()]
        biases = np.array([float(v) for v in lines[6 + c].split()[1:]])
        return LinearModel(W, biases, lin_kind, classes, Standardizer(mean, std))
    if kind == "nn":
        pos = 1
        shape_parts = lines[pos].split()[1:]
        input_shape = None if shape_parts == ["none"] else tuple(int(v) for v in shape_parts)
        pos += 1
        class_parts = lines[pos].split()[1:]
        classes = None if class_parts == ["none"] else np.array(
            [int(v) for v in class_parts], dtype=np.int64)
        pos += 1
        standardizer = None
        if lines[pos].split()[1] == "yes":
            mean = np.array([float(v) for v in lines[pos + 1].split()[1:]])
            std = np.array([float(v) for v in lines[pos + 2].split()[1:]])
            standardizer = Standardizer(mean, std)
            pos += 3
        else:
            pos += 1
        n_layers = int(lines[pos].split()[1])
        pos += 1
        layers = []
        for _ in range(n_layers):
            layers.append(_layer_from_spec(lines[pos].split()[1:]))
            pos += 1
        net = NeuralNet(layers, input_shape, classes, standardizer)
        while pos < len(lines) and lines[pos]:
            parts = lines[pos].split()
            if parts[0] != "param":
                raise ParseError("expected param block", line=pos + 1)
            li = int(parts[1])
            name = parts[2]
            ndim = int(parts[3])
            shape = tuple(int(v) for v in parts[4 : 4 + ndim])
            size = int(np.prod(shape)) if shape else 1
            pos += 1
            vals: list[float] = []
            while len(vals) < size:
                vals.extend(float(v) for v in lines[pos].split())
                pos += 1
            setattr(layers[li], name, np.array(vals).reshape(shape))
        return net
    raise ParseError(f"unknown model kind {kind!r}", line=1)
