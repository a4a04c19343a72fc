"""The five piecewise-smooth maps: parameter records, branch selection, stepping, Jacobians.

Each map has exactly two smooth branches separated by a border hyperplane
``x = const`` on the first state component.  The border point itself uses
the Left branch (left-closed convention) so branch selection is total and
deterministic.  The same convention fixes sgn(0) = -1 inside the Lozi
Jacobian.

``step_lanes`` is the single source of truth for the branch formulas; the
scalar ``step`` runs it with one lane, and the sweep/Lyapunov engines run
it with many lanes, so scalar and vectorized paths are bit-identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from enum import IntEnum

import numpy as np

from .errors import NonFiniteStateError

__all__ = [
    "Branch",
    "NormalForm1DParams",
    "TentParams",
    "LoziParams",
    "Pws3DParams",
    "Bcb2DParams",
    "MapInstance",
    "MAP_KINDS",
    "make_map",
    "normal_form_map",
    "tent_map",
    "lozi_map",
    "pws3d_map",
    "bcb2d_map",
    "as_state",
    "border_distance",
    "branch_index",
    "step",
    "jacobian",
    "step_lanes",
    "left_mask_lanes",
    "param_values",
]


class Branch(IntEnum):
    LEFT = 0
    RIGHT = 1


def _check_finite(obj) -> None:
    for f in fields(obj):
        v = getattr(obj, f.name)
        if not math.isfinite(v):
            raise ValueError(f"{type(obj).__name__}.{f.name} must be finite, got {v!r}")


@dataclass(frozen=True)
class NormalForm1DParams:
    """1D border-collision normal form: slope a left of 0, slope b right, gap l, offset mu."""

    a: float
    b: float
    l: float
    mu: float

    def __post_init__(self):
        _check_finite(self)


@dataclass(frozen=True)
class TentParams:
    """Tent map slope parameter; border sits at x = 0.5."""

    mu: float

    def __post_init__(self):
        _check_finite(self)


@dataclass(frozen=True)
class LoziParams:
    """Lozi map fold parameter a and contraction b."""

    a: float
    b: float = 0.5

    def __post_init__(self):
        _check_finite(self)


@dataclass(frozen=True)
class Pws3DParams:
    """3D piecewise-linear normal form.

    Each side applies the companion-form matrix

        [tau   1  0]
        [-sigma 0 1]
        [delta  0 0]

    plus the forcing mu * (1, 0, 0); the side is chosen by the sign of the
    first state component.
    """

    tau_l: float = -0.5
    sigma_l: float = 0.95
    delta_l: float = 0.2
    tau_r: float = 0.8
    sigma_r: float = -0.6
    delta_r: float = -0.95
    mu: float = 0.1

    def __post_init__(self):
        _check_finite(self)


@dataclass(frozen=True)
class Bcb2DParams:
    """2D border-collision normal form with per-side trace tau and determinant delta."""

    tau_l: float
    tau_r: float
    delta_l: float = 2.0
    delta_r: float = -0.2
    mu: float = -1.0

    def __post_init__(self):
        _check_finite(self)


_KIND_INFO = {
    # kind: (params type, dim, border location)
    "normal_form": (NormalForm1DParams, 1, 0.0),
    "tent": (TentParams, 1, 0.5),
    "lozi": (LoziParams, 2, 0.0),
    "pws3d": (Pws3DParams, 3, 0.0),
    "bcb2d": (Bcb2DParams, 2, 0.0),
}

MAP_KINDS = tuple(_KIND_INFO)


@dataclass(frozen=True)
class MapInstance:
    """A concrete map: its kind tag, parameter record, dimension, and border location."""

    kind: str
    params: object
    dim: int
    border: float


def make_map(kind: str, params) -> MapInstance:
    if kind not in _KIND_INFO:
        raise ValueError(f"unknown map kind {kind!r}; expected one of {MAP_KINDS}")
    ptype, dim, border = _KIND_INFO[kind]
    if not isinstance(params, ptype):
        raise TypeError(f"map kind {kind!r} needs {ptype.__name__}, got {type(params).__name__}")
    return MapInstance(kind, params, dim, border)


def normal_form_map(a: float = 0.5, b: float = 0.5, l: float = -0.1, mu: float = 0.0) -> MapInstance:
    return make_map("normal_form", NormalForm1DParams(a, b, l, mu))


def tent_map(mu: float) -> MapInstance:
    return make_map("tent", TentParams(mu))


def lozi_map(a: float, b: float = 0.5) -> MapInstance:
    return make_map("lozi", LoziParams(a, b))


def pws3d_map(delta_r: float = -0.95, **kwargs) -> MapInstance:
    return make_map("pws3d", Pws3DParams(delta_r=delta_r, **kwargs))


def bcb2d_map(tau_l: float, tau_r: float, delta_l: float = 2.0, delta_r: float = -0.2,
              mu: float = -1.0) -> MapInstance:
    return make_map("bcb2d", Bcb2DParams(tau_l, tau_r, delta_l, delta_r, mu))


def param_values(m: MapInstance) -> dict[str, float]:
    """Parameter record as a plain name->value dict (for echoes and overrides)."""
    return {f.name: getattr(m.params, f.name) for f in fields(m.params)}


def as_state(m: MapInstance, s) -> np.ndarray:
    """Validate and coerce a state to a float64 vector of length ``m.dim``."""
    arr = np.atleast_1d(np.asarray(s, dtype=np.float64))
    if arr.shape != (m.dim,):
        raise ValueError(f"state for {m.kind} must have shape ({m.dim},), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteStateError(f"non-finite state {arr!r}")
    return arr


def border_distance(m: MapInstance, s) -> float:
    """Signed distance of the first state component from the border.

    Negative or zero means the Left branch region, positive means Right.
    """
    return float(as_state(m, s)[0] - m.border)


def branch_index(m: MapInstance, s) -> Branch:
    return Branch.LEFT if border_distance(m, s) <= 0.0 else Branch.RIGHT


def _p(m: MapInstance, overrides, name: str):
    if overrides is not None and name in overrides:
        return overrides[name]
    return getattr(m.params, name)


def step_lanes(m: MapInstance, X: np.ndarray, overrides: dict | None = None) -> np.ndarray:
    """One map application over independent lanes, without validation.

    ``X`` has shape (L,) for 1D maps and (L, dim) otherwise.  ``overrides``
    may replace any parameter with a per-lane array (used by sweeps).
    """
    kind = m.kind
    if kind == "normal_form":
        a = _p(m, overrides, "a")
        b = _p(m, overrides, "b")
        l = _p(m, overrides, "l")
        mu = _p(m, overrides, "mu")
        return np.where(X <= 0.0, a * X + mu, b * X + mu + l)
    if kind == "tent":
        mu = _p(m, overrides, "mu")
        return np.where(X <= 0.5, mu * X, mu * (1.0 - X))
    if kind == "lozi":
        a = _p(m, overrides, "a")
        b = _p(m, overrides, "b")
        x = X[:, 0]
        y = X[:, 1]
        return np.stack([(1.0 - a * np.abs(x)) + y, b * x], axis=1)
    if kind == "pws3d":
        x = X[:, 0]
        y = X[:, 1]
        z = X[:, 2]
        left = x <= 0.0
        tau = np.where(left, _p(m, overrides, "tau_l"), _p(m, overrides, "tau_r"))
        sigma = np.where(left, _p(m, overrides, "sigma_l"), _p(m, overrides, "sigma_r"))
        delta = np.where(left, _p(m, overrides, "delta_l"), _p(m, overrides, "delta_r"))
        mu = _p(m, overrides, "mu")
        return np.stack([(tau * x + y) + mu, z - sigma * x, delta * x], axis=1)
    if kind == "bcb2d":
        x = X[:, 0]
        y = X[:, 1]
        left = x <= 0.0
        tau = np.where(left, _p(m, overrides, "tau_l"), _p(m, overrides, "tau_r"))
        delta = np.where(left, _p(m, overrides, "delta_l"), _p(m, overrides, "delta_r"))
        mu = _p(m, overrides, "mu")
        return np.stack([(tau * x + y) + mu, -delta * x], axis=1)
    raise ValueError(f"unknown map kind {kind!r}")


def left_mask_lanes(m: MapInstance, X: np.ndarray) -> np.ndarray:
    first = X if m.dim == 1 else X[:, 0]
    return first <= m.border


def step(m: MapInstance, s) -> np.ndarray:
    """One application of the branch formula selected left-closed at the border."""
    v = as_state(m, s)
    X = v if m.dim == 1 else v[None, :]
    with np.errstate(over="ignore", invalid="ignore"):
        out = step_lanes(m, X)
    out_v = out if m.dim == 1 else out[0]
    if not np.all(np.isfinite(out_v)):
        raise NonFiniteStateError("map step produced a non-finite value (overflow)", iteration=1)
    return np.array(out_v, dtype=np.float64, copy=True).reshape(m.dim)


def jacobian(m: MapInstance, s) -> np.ndarray:
    """Derivative matrix of the branch selected at ``s`` (left-closed at the border)."""
    v = as_state(m, s)
    left = v[0] <= m.border
    p = m.params
    kind = m.kind
    if kind == "normal_form":
        return np.array([[p.a if left else p.b]])
    if kind == "tent":
        return np.array([[p.mu if left else -p.mu]])
    if kind == "lozi":
        sgn = -1.0 if left else 1.0
        return np.array([[-p.a * sgn, 1.0], [p.b, 0.0]])
    if kind == "pws3d":
        tau, sigma, delta = (p.tau_l, p.sigma_l, p.delta_l) if left else (p.tau_r, p.sigma_r, p.delta_r)
        return np.array([[tau, 1.0, 0.0], [-sigma, 0.0, 1.0], [delta, 0.0, 0.0]])
    if kind == "bcb2d":
        tau, delta = (p.tau_l, p.delta_l) if left else (p.tau_r, p.delta_r)
        return np.array([[tau, 1.0], [-delta, 0.0]])
    raise ValueError(f"unknown map kind {kind!r}")
