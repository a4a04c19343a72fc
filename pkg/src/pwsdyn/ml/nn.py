"""From-scratch neural nets: dense/conv/pool/dropout/softmax layers, Adam, backprop.

The convolution is stride-1 "valid" only, computed by gathering 3x3-style
windows with ``sliding_window_view`` and contracting them with einsum (an
im2col formulation).  Training draws every stochastic choice (epoch
shuffles, dropout masks, weight init) from splitmix64 streams, and all
arithmetic happens in a fixed order, so a (seed, dataset) pair always
produces the same parameters.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import DivergedTrainingError, EmptyDatasetError
from ..rng import Stream
from .preprocess import Standardizer

__all__ = [
    "Dense",
    "Conv2D",
    "MaxPool2D",
    "Flatten",
    "Dropout",
    "Softmax",
    "AdamState",
    "NeuralNet",
    "build_mlp",
    "build_cnn",
    "param_count",
    "train_nn",
    "gradient_check",
]


class Dense:
    def __init__(self, n_in: int, n_out: int, activation: str | None = None):
        if activation not in (None, "relu"):
            raise ValueError(f"unsupported activation {activation!r}")
        self.n_in = n_in
        self.n_out = n_out
        self.activation = activation
        self.w = np.zeros((n_in, n_out))
        self.b = np.zeros(n_out)
        self.dw = None
        self.db = None
        self._x = None
        self._z = None

    def init_params(self, rng: Stream) -> None:
        scale = np.sqrt(2.0 / self.n_in)
        self.w = (rng.normal_block(self.n_in * self.n_out) * scale).reshape(self.n_in, self.n_out)
        self.b = np.zeros(self.n_out)

    def forward(self, x, train=False, rng=None):
        self._x = x
        z = x @ self.w + self.b
        self._z = z
        return np.maximum(z, 0.0) if self.activation == "relu" else z

    def backward(self, grad):
        if self.activation == "relu":
            grad = grad * (self._z > 0.0)
        self.dw = self._x.T @ grad
        self.db = grad.sum(axis=0)
        return grad @ self.w.T

    def params(self):
        return [("w", self.w), ("b", self.b)]

    def grads(self):
        return [self.dw, self.db]

    def spec(self) -> str:
        return f"dense {self.n_in} {self.n_out} {self.activation or 'linear'}"


class Conv2D:
    """Stride-1 valid convolution over (N, H, W, C) with (kh, kw, C, filters) weights."""

    def __init__(self, in_channels: int, filters: int, kernel: int = 3,
                 activation: str | None = "relu"):
        if activation not in (None, "relu"):
            raise ValueError(f"unsupported activation {activation!r}")
        self.in_channels = in_channels
        self.filters = filters
        self.kernel = kernel
        self.activation = activation
        self.w = np.zeros((kernel, kernel, in_channels, filters))
        self.b = np.zeros(filters)
        self.dw = None
        self.db = None
        self._win = None
        self._z = None
        self._x_shape = None

    def init_params(self, rng: Stream) -> None:
        fan_in = self.kernel * self.kernel * self.in_channels
        scale = np.sqrt(2.0 / fan_in)
        n = self.w.size
        self.w = (rng.normal_block(n) * scale).reshape(self.w.shape)
        self.b = np.zeros(self.filters)

    def forward(self, x, train=False, rng=None):
        self._x_shape = x.shape
        win = np.lib.stride_tricks.sliding_window_view(x, (self.kernel, self.kernel), axis=(1, 2))
        self._win = win  # (N, H', W', C, kh, kw)
        z = np.einsum("nhwckl,klcf->nhwf", win, self.w, optimize=True) + self.b
        self._z = z
        return np.maximum(z, 0.0) if self.activation == "relu" else z

    def backward(self, grad):
        if self.activation == "relu":
            grad = grad * (self._z > 0.0)
        self.dw = np.einsum("nhwckl,nhwf->klcf", self._win, grad, optimize=True)
        self.db = grad.sum(axis=(0, 1, 2))
        k = self.kernel
        pad = np.pad(grad, ((0, 0), (k - 1, k - 1), (k - 1, k - 1), (0, 0)))
        win_d = np.lib.stride_tricks.sliding_window_view(pad, (k, k), axis=(1, 2))
        w_flipped = self.w[::-1, ::-1]
        return np.einsum("nhwfkl,klcf->nhwc", win_d, w_flipped, optimize=True)

    def params(self):
        return [("w", self.w), ("b", self.b)]

    def grads(self):
        return [self.dw, self.db]

    def spec(self) -> str:
        return f"conv2d {self.in_channels} {self.filters} {self.kernel} {self.activation or 'linear'}"


class MaxPool2D:
    def __init__(self, size: int = 2):
        self.size = size
        self._idx = None
        self._x_shape = None

    def forward(self, x, train=False, rng=None):
        s = self.size
        n, h, w, c = x.shape
        h2, w2 = h // s, w // s
        self._x_shape = x.shape
        r = x[:, : h2 * s, : w2 * s, :].reshape(n, h2, s, w2, s, c)
        r = r.transpose(0, 1, 3, 5, 2, 4).reshape(n, h2, w2, c, s * s)
        self._idx = np.argmax(r, axis=4)
        return np.take_along_axis(r, self._idx[..., None], axis=4)[..., 0]

    def backward(self, grad):
        s = self.size
        n, h, w, c = self._x_shape
        h2, w2 = h // s, w // s
        scat = np.zeros((n, h2, w2, c, s * s))
        np.put_along_axis(scat, self._idx[..., None], grad[..., None], axis=4)
        scat = scat.reshape(n, h2, w2, c, s, s).transpose(0, 1, 4, 2, 5, 3)
        out = np.zeros(self._x_shape)
        out[:, : h2 * s, : w2 * s, :] = scat.reshape(n, h2 * s, w2 * s, c)
        return out

    def params(self):
        return []

    def grads(self):
        return []

    def spec(self) -> str:
        return f"maxpool {self.size}"


class Flatten:
    def __init__(self):
        self._shape = None

    def forward(self, x, train=False, rng=None):
        self._shape = x.shape
        return x.reshape(x.shape[0], -1)

    def backward(self, grad):
        return grad.reshape(self._shape)

    def params(self):
        return []

    def grads(self):
        return []

    def spec(self) -> str:
        return "flatten"


class Dropout:
    """Inverted dropout; active only when forward runs in training mode."""

    def __init__(self, rate: float):
        if not 0.0 <= rate < 1.0:
            raise ValueError("dropout rate must lie in [0, 1)")
        self.rate = rate
        self._mask = None

    def forward(self, x, train=False, rng=None):
        if not train or self.rate == 0.0:
            self._mask = None
            return x
        u = rng.uniform_block(x.size).reshape(x.shape)
        self._mask = (u >= self.rate) / (1.0 - self.rate)
        return x * self._mask

    def backward(self, grad):
        return grad if self._mask is None else grad * self._mask

    def params(self):
        return []

    def grads(self):
        return []

    def spec(self) -> str:
        return f"dropout {self.rate:.17g}"


class Softmax:
    def forward(self, x, train=False, rng=None):
        z = x - x.max(axis=1, keepdims=True)
        e = np.exp(z)
        return e / e.sum(axis=1, keepdims=True)

    def backward_from_targets(self, probs, y_idx):
        """Fused softmax + cross-entropy gradient with respect to the logits."""
        g = probs.copy()
        g[np.arange(len(y_idx)), y_idx] -= 1.0
        return g / len(y_idx)

    def params(self):
        return []

    def grads(self):
        return []

    def spec(self) -> str:
        return "softmax"


@dataclass
class AdamState:
    lr: float
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    t: int = 0
    m: list = field(default_factory=list)
    v: list = field(default_factory=list)


@dataclass
class NeuralNet:
    layers: list
    input_shape: tuple | None = None  # (h, w, c) for conv nets; None for flat input
    classes: np.ndarray | None = None
    standardizer: Standardizer | None = None
    adam: AdamState | None = None

    def _shape_input(self, X):
        X = np.asarray(X, dtype=np.float64)
        if self.standardizer is not None:
            X = self.standardizer.apply(X)
        if self.input_shape is not None and X.ndim == 2:
            X = X.reshape((X.shape[0],) + tuple(self.input_shape))
        return X

    def forward(self, X, train=False, rng=None):
        out = self._shape_input(X)
        for layer in self.layers:
            out = layer.forward(out, train=train, rng=rng)
        return out

    def predict_proba(self, X):
        return self.forward(X, train=False)

    def predict(self, X):
        idx = np.argmax(self.predict_proba(X), axis=1)
        if self.classes is not None:
            return self.classes[idx]
        return idx

    def param_items(self):
        items = []
        for li, layer in enumerate(self.layers):
            for name, arr in layer.params():
                items.append((li, name, arr))
        return items


def param_count(net: NeuralNet) -> int:
    return sum(arr.size for _, _, arr in net.param_items())


def build_mlp(input_dim: int, hidden: tuple[int, ...] = (64, 32, 16), n_out: int = 4,
              dropout_rate: float = 0.2, seed: int = 0) -> NeuralNet:
    """ReLU stack shrinking through ``hidden`` with dropout, softmax head of n_out classes."""
    rng = Stream(seed, 0)
    layers = []
    prev = input_dim
    for width in hidden:
        layers.append(Dense(prev, width, "relu"))
        if dropout_rate > 0.0:
            layers.append(Dropout(dropout_rate))
        prev = width
    layers.append(Dense(prev, n_out, None))
    layers.append(Softmax())
    for layer in layers:
        if isinstance(layer, (Dense, Conv2D)):
            layer.init_params(rng)
    return NeuralNet(layers, input_shape=None)


def build_cnn(height: int, width: int, n_classes: int = 2, seed: int = 0) -> NeuralNet:
    """conv(32, 3x3, relu) -> maxpool 2x2 -> flatten -> dense 256 -> dropout 0.5
    -> dense 512 -> softmax head."""
    if height < 4 or width < 4:
        raise ValueError("input must be at least 4x4")
    rng = Stream(seed, 0)
    h_conv, w_conv = height - 2, width - 2
    flat = (h_conv // 2) * (w_conv // 2) * 32
    layers = [
        Conv2D(1, 32, 3, "relu"),
        MaxPool2D(2),
        Flatten(),
        Dense(flat, 256, "relu"),
        Dropout(0.5),
        Dense(256, 512, "relu"),
        Dense(512, n_classes, None),
        Softmax(),
    ]
    for layer in layers:
        if isinstance(layer, (Dense, Conv2D)):
            layer.init_params(rng)
    return NeuralNet(layers, input_shape=(height, width, 1))


def _loss_from_probs(probs, y_idx) -> float:
    p = probs[np.arange(len(y_idx)), y_idx]
    with np.errstate(divide="ignore"):
        return float(-np.mean(np.log(p)))


def _backward_all(net: NeuralNet, probs, y_idx):
    softmax = net.layers[-1]
    grad = softmax.backward_from_targets(probs, y_idx)
    for layer in reversed(net.layers[:-1]):
        grad = layer.backward(grad)
    return grad


def train_nn(net: NeuralNet, train, epochs: int, batch_size: int = 32,
             lr: float = 1e-3, seed: int = 0) -> tuple[NeuralNet, list[float]]:
    """Mini-batch Adam on sparse categorical cross-entropy; returns loss history."""
    if train.n_rows == 0:
        raise EmptyDatasetError("cannot train on zero rows")
    if not isinstance(net.layers[-1], Softmax):
        raise ValueError("training expects a softmax output layer")
    X = train.features
    classes, y_idx = np.unique(train.labels, return_inverse=True)
    net.classes = classes
    rng = Stream(seed, 0)
    params = net.param_items()
    adam = AdamState(lr=lr, m=[np.zeros_like(a) for _, _, a in params],
                     v=[np.zeros_like(a) for _, _, a in params])
    net.adam = adam
    history = []
    n = X.shape[0]
    for epoch in range(epochs):
        order = rng.shuffle_indices(n)
        loss_sum = 0.0
        for start in range(0, n, batch_size):
            rows = order[start : start + batch_size]
            probs = net.forward(X[rows], train=True, rng=rng)
            loss = _loss_from_probs(probs, y_idx[rows])
            if not np.isfinite(loss):
                raise DivergedTrainingError(f"non-finite loss in epoch {epoch}", epoch=epoch)
            loss_sum += loss * len(rows)
            _backward_all(net, probs, y_idx[rows])
            adam.t += 1
            b1c = 1.0 - adam.beta1 ** adam.t
            b2c = 1.0 - adam.beta2 ** adam.t
            grads = []
            for layer in net.layers:
                grads.extend(layer.grads())
            for k, ((_, _, arr), g) in enumerate(zip(params, grads)):
                adam.m[k] = adam.beta1 * adam.m[k] + (1.0 - adam.beta1) * g
                adam.v[k] = adam.beta2 * adam.v[k] + (1.0 - adam.beta2) * (g * g)
                arr -= adam.lr * (adam.m[k] / b1c) / (np.sqrt(adam.v[k] / b2c) + adam.eps)
        history.append(loss_sum / n)
    return net, history


def gradient_check(net: NeuralNet, X, y, h: float = 1e-5) -> float:
    """Max relative error of backprop gradients against central finite differences.

    Runs in eval mode (dropout off).  Intended for small nets; every
    parameter entry is perturbed twice.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    classes, y_idx = np.unique(y, return_inverse=True)

    def loss() -> float:
        probs = net.forward(X, train=False)
        return _loss_from_probs(probs, y_idx)

    probs = net.forward(X, train=False)
    _backward_all(net, probs, y_idx)
    analytic = []
    for layer in net.layers:
        analytic.extend(g.copy() for g in layer.grads())
    worst = 0.0
    arrays = [arr for _, _, arr in net.param_items()]
    for arr, ga in zip(arrays, analytic):
        flat = arr.reshape(-1)
        gflat = ga.reshape(-1)
        for i in range(flat.size):
            keep = flat[i]
            flat[i] = keep + h
            lp = loss()
            flat[i] = keep - h
            lm = loss()
            flat[i] = keep
            gn = (lp - lm) / (2.0 * h)
            denom = max(abs(gn), abs(gflat[i]), 1e-6)
            worst = max(worst, abs(gn - gflat[i]) / denom)
    return worst
