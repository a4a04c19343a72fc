"""Orbit simulation, period detection, Lyapunov spectra, and behavior labels.

The Lyapunov spectrum uses the average of log |branch slope| along the
orbit in one dimension and Benettin-style QR reorthonormalization (one
modified Gram-Schmidt factorization per step, written out explicitly for
2x2 and 3x3 frames) in higher dimensions.  The Jacobian is always
evaluated at the pre-step state; the left-closed branch is used at the
border.

All public operations run on the shared lane engines with a single lane,
so batched sweeps and scalar calls produce bit-identical numbers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from .errors import DegenerateSlopeError, NonFiniteStateError
from .maps import MapInstance, as_state, left_mask_lanes, step_lanes

__all__ = [
    "DEFAULT_ITERS",
    "DEFAULT_TRANSIENT",
    "DEFAULT_PERIOD_TOL",
    "DEFAULT_MAX_PERIOD",
    "Orbit",
    "LyapunovSpectrum",
    "BehaviorLabel",
    "PeriodResult",
    "NormalFormFixedPoints",
    "simulate",
    "fixed_points_normal_form",
    "detect_period",
    "lyapunov_spectrum",
    "classify_behavior",
]

DEFAULT_ITERS = 10000
DEFAULT_TRANSIENT = 5000
DEFAULT_PERIOD_TOL = 1e-9
DEFAULT_MAX_PERIOD = 32

# Per-step floor for log of a vanishing derivative or QR diagonal; log of
# the smallest subnormal double.  An exponent pinned here stands in for
# -inf and is accompanied by the ``degenerate`` flag.
_LOG_FLOOR_ARG = 5e-324


class BehaviorLabel(IntEnum):
    REGULAR = 0
    CHAOTIC = 1
    HYPERCHAOTIC = 2


@dataclass(frozen=True)
class Orbit:
    """Post-transient states, one row per retained iterate."""

    states: np.ndarray  # (n_kept, dim)
    transient_discarded: int
    map_echo: MapInstance


@dataclass(frozen=True)
class LyapunovSpectrum:
    exponents: np.ndarray  # (dim,), sorted descending
    n_iterations: int
    left_visits: int
    right_visits: int
    degenerate: bool = False


@dataclass(frozen=True)
class PeriodResult:
    period: int | None
    cycle_points: np.ndarray  # (period, dim); empty when aperiodic


@dataclass(frozen=True)
class NormalFormFixedPoints:
    x_left: float
    x_right: float
    admissible_left: bool
    admissible_right: bool


def _x0_lanes(m: MapInstance, x0) -> np.ndarray:
    v = as_state(m, x0)
    return v.copy() if m.dim == 1 else v[None, :].copy()


def _finite_rows(m: MapInstance, X: np.ndarray) -> np.ndarray:
    return np.isfinite(X) if m.dim == 1 else np.isfinite(X).all(axis=1)


def _evolve_lanes(m, X, n_steps, overrides=None, keep_last=0):
    """Advance lanes ``n_steps``; freeze lanes that leave the finite range.

    Returns (X_final, kept, alive, first_bad).  ``kept`` stacks the last
    ``keep_last`` post-step states, shape (keep_last, L[, dim]).
    ``first_bad`` holds the 1-based step of first divergence, -1 if none.
    """
    L = X.shape[0]
    alive = np.ones(L, dtype=bool)
    first_bad = np.full(L, -1, dtype=np.int64)
    kept = np.empty((keep_last,) + X.shape, dtype=np.float64) if keep_last else None
    start_keep = n_steps - keep_last
    sel = alive if m.dim == 1 else alive[:, None]
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(n_steps):
            Xn = step_lanes(m, X, overrides)
            ok = _finite_rows(m, Xn)
            newly = alive & ~ok
            if newly.any():
                first_bad[newly] = k + 1
                alive = alive & ok
                sel = alive if m.dim == 1 else alive[:, None]
            X = np.where(sel, Xn, X)
            if keep_last and k >= start_keep:
                kept[k - start_keep] = X
    return X, kept, alive, first_bad


def simulate(m: MapInstance, x0, n_total: int = DEFAULT_ITERS,
             n_transient: int = DEFAULT_TRANSIENT) -> Orbit:
    """Iterate ``n_total`` steps from ``x0`` and keep the last ``n_total - n_transient``."""
    if not (n_total > n_transient >= 0):
        raise ValueError(f"need n_total > n_transient >= 0, got {n_total}, {n_transient}")
    X = _x0_lanes(m, x0)
    keep = n_total - n_transient
    _, kept, alive, first_bad = _evolve_lanes(m, X, n_total, keep_last=keep)
    if not alive[0]:
        i = int(first_bad[0])
        raise NonFiniteStateError(f"orbit diverged at iteration {i}", iteration=i)
    states = kept[:, 0]
    if m.dim == 1:
        states = states[:, None]
    return Orbit(states.copy(), n_transient, m)


def fixed_points_normal_form(p) -> NormalFormFixedPoints:
    """Branch fixed points mu/(1-a) and (mu+l)/(1-b) with side-admissibility flags."""
    if p.a == 1.0 or p.b == 1.0:
        raise DegenerateSlopeError(f"fixed point undefined for unit slope (a={p.a}, b={p.b})")
    x_left = p.mu / (1.0 - p.a)
    x_right = (p.mu + p.l) / (1.0 - p.b)
    return NormalFormFixedPoints(x_left, x_right, x_left <= 0.0, x_right > 0.0)


def _detect_period_lanes(m, X, max_period, tol, n_transient, overrides=None):
    """Batched period detection.

    Returns (periods, alive, x_ref, traj) where periods is -1 for lanes
    with no recurrence within ``max_period``, x_ref is the post-transient
    state per lane, and traj stacks the ``max_period`` following states.
    """
    X, _, alive, _ = _evolve_lanes(m, X, n_transient, overrides)
    x_ref = X.copy()
    L = X.shape[0]
    periods = np.full(L, -1, dtype=np.int64)
    traj = np.empty((max_period,) + X.shape, dtype=np.float64)
    sel = alive if m.dim == 1 else alive[:, None]
    with np.errstate(over="ignore", invalid="ignore"):
        for p in range(1, max_period + 1):
            Xn = step_lanes(m, X, overrides)
            ok = _finite_rows(m, Xn)
            alive = alive & ok
            sel = alive if m.dim == 1 else alive[:, None]
            X = np.where(sel, Xn, X)
            traj[p - 1] = X
            dist = np.abs(X - x_ref) if m.dim == 1 else np.abs(X - x_ref).max(axis=1)
            hit = alive & (periods < 0) & (dist < tol)
            periods[hit] = p
    return periods, alive, x_ref, traj


def detect_period(m: MapInstance, x0, max_period: int = DEFAULT_MAX_PERIOD,
                  tol: float = DEFAULT_PERIOD_TOL,
                  n_transient: int = DEFAULT_TRANSIENT) -> PeriodResult:
    """Smallest p <= max_period with sup-norm recurrence below ``tol``.

    The recurrence is tested at the post-transient point; an orbit with no
    recurrence at this tolerance yields ``period=None``, which is the
    expected outcome for chaotic parameters, not an error.
    """
    if max_period < 1:
        raise ValueError("max_period must be >= 1")
    if not tol > 0.0:
        raise ValueError("tol must be positive")
    X = _x0_lanes(m, x0)
    periods, alive, x_ref, traj = _detect_period_lanes(m, X, max_period, tol, n_transient)
    if not alive[0]:
        raise NonFiniteStateError("orbit diverged during period detection")
    p = int(periods[0])
    if p < 0:
        return PeriodResult(None, np.empty((0, m.dim)))
    pts = [x_ref[0] if m.dim > 1 else x_ref[0:1]]
    for k in range(p - 1):
        pts.append(traj[k, 0] if m.dim > 1 else traj[k, 0:1])
    return PeriodResult(p, np.array(pts, dtype=np.float64).reshape(p, m.dim))


def _deriv_abs_1d(m, X, overrides):
    def par(name):
        if overrides is not None and name in overrides:
            return overrides[name]
        return getattr(m.params, name)

    if m.kind == "normal_form":
        return np.where(X <= 0.0, np.abs(par("a")), np.abs(par("b")))
    if m.kind == "tent":
        # both branch slopes are +-mu, so |f'| = |mu| on either side
        return np.abs(par("mu")) * np.ones_like(X)
    raise ValueError(f"{m.kind} is not a 1D map")


def _lyapunov_lanes_1d(m, X, n, n_transient, overrides):
    X, _, alive, _ = _evolve_lanes(m, X, n_transient, overrides)
    L = X.shape[0]
    acc = np.zeros(L)
    left = np.zeros(L, dtype=np.int64)
    degenerate = np.zeros(L, dtype=bool)
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        for _ in range(n):
            left += X <= m.border
            d = _deriv_abs_1d(m, X, overrides)
            degenerate |= alive & (d == 0.0)
            acc += np.log(np.maximum(d, _LOG_FLOOR_ARG))
            Xn = step_lanes(m, X, overrides)
            ok = _finite_rows(m, Xn)
            alive = alive & ok
            X = np.where(alive, Xn, X)
    return (acc / n)[:, None], left, alive, degenerate


def _jac_entries_2d(m, x, overrides):
    """(j00, j10) per lane for the 2D kinds; their Jacobians share j01=1, j11=0."""
    def par(name):
        if overrides is not None and name in overrides:
            return overrides[name]
        return getattr(m.params, name)

    left = x <= 0.0
    if m.kind == "lozi":
        a = par("a")
        return np.where(left, a, -a), par("b") * np.ones_like(x)
    if m.kind == "bcb2d":
        tau = np.where(left, par("tau_l"), par("tau_r"))
        delta = np.where(left, par("delta_l"), par("delta_r"))
        return tau, -delta
    raise ValueError(f"{m.kind} is not a 2D map")


def _lyapunov_lanes_2d(m, X, n, n_transient, overrides):
    X, _, alive, _ = _evolve_lanes(m, X, n_transient, overrides)
    L = X.shape[0]
    q00 = np.ones(L)
    q01 = np.zeros(L)
    q10 = np.zeros(L)
    q11 = np.ones(L)
    acc0 = np.zeros(L)
    acc1 = np.zeros(L)
    left = np.zeros(L, dtype=np.int64)
    degenerate = np.zeros(L, dtype=bool)
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        for _ in range(n):
            x = X[:, 0]
            left += x <= m.border
            j00, j10 = _jac_entries_2d(m, x, overrides)
            m00 = j00 * q00 + q10
            m01 = j00 * q01 + q11
            m10 = j10 * q00
            m11 = j10 * q01
            r0 = np.sqrt(m00 * m00 + m10 * m10)
            q00n = m00 / r0
            q10n = m10 / r0
            t = q00n * m01 + q10n * m11
            u0 = m01 - t * q00n
            u1 = m11 - t * q10n
            r1 = np.sqrt(u0 * u0 + u1 * u1)
            q00, q10 = q00n, q10n
            q01 = u0 / r1
            q11 = u1 / r1
            degenerate |= alive & ((r0 == 0.0) | (r1 == 0.0))
            acc0 += np.log(np.maximum(r0, _LOG_FLOOR_ARG))
            acc1 += np.log(np.maximum(r1, _LOG_FLOOR_ARG))
            Xn = step_lanes(m, X, overrides)
            ok = _finite_rows(m, Xn)
            alive = alive & ok
            X = np.where(alive[:, None], Xn, X)
    exps = np.stack([acc0 / n, acc1 / n], axis=1)
    return exps, left, alive, degenerate


def _lyapunov_lanes_3d(m, X, n, n_transient, overrides):
    def par(name):
        if overrides is not None and name in overrides:
            return overrides[name]
        return getattr(m.params, name)

    X, _, alive, _ = _evolve_lanes(m, X, n_transient, overrides)
    L = X.shape[0]
    # columns of the orthonormal frame, each a triple of lane arrays
    cols = [
        [np.ones(L), np.zeros(L), np.zeros(L)],
        [np.zeros(L), np.ones(L), np.zeros(L)],
        [np.zeros(L), np.zeros(L), np.ones(L)],
    ]
    acc = [np.zeros(L), np.zeros(L), np.zeros(L)]
    left = np.zeros(L, dtype=np.int64)
    degenerate = np.zeros(L, dtype=bool)
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        for _ in range(n):
            x = X[:, 0]
            lmask = x <= m.border
            left += lmask
            tau = np.where(lmask, par("tau_l"), par("tau_r"))
            sigma = np.where(lmask, par("sigma_l"), par("sigma_r"))
            delta = np.where(lmask, par("delta_l"), par("delta_r"))
            mapped = []
            for q0, q1, q2 in cols:
                mapped.append([tau * q0 + q1, q2 - sigma * q0, delta * q0])
            c0 = mapped[0]
            r0 = np.sqrt(c0[0] ** 2 + c0[1] ** 2 + c0[2] ** 2)
            e0 = [c0[k] / r0 for k in range(3)]
            c1 = mapped[1]
            t0 = e0[0] * c1[0] + e0[1] * c1[1] + e0[2] * c1[2]
            u1 = [c1[k] - t0 * e0[k] for k in range(3)]
            r1 = np.sqrt(u1[0] ** 2 + u1[1] ** 2 + u1[2] ** 2)
            e1 = [u1[k] / r1 for k in range(3)]
            c2 = mapped[2]
            s0 = e0[0] * c2[0] + e0[1] * c2[1] + e0[2] * c2[2]
            s1 = e1[0] * c2[0] + e1[1] * c2[1] + e1[2] * c2[2]
            u2 = [c2[k] - s0 * e0[k] - s1 * e1[k] for k in range(3)]
            r2 = np.sqrt(u2[0] ** 2 + u2[1] ** 2 + u2[2] ** 2)
            e2 = [u2[k] / r2 for k in range(3)]
            cols = [e0, e1, e2]
            degenerate |= alive & ((r0 == 0.0) | (r1 == 0.0) | (r2 == 0.0))
            acc[0] += np.log(np.maximum(r0, _LOG_FLOOR_ARG))
            acc[1] += np.log(np.maximum(r1, _LOG_FLOOR_ARG))
            acc[2] += np.log(np.maximum(r2, _LOG_FLOOR_ARG))
            Xn = step_lanes(m, X, overrides)
            ok = _finite_rows(m, Xn)
            alive = alive & ok
            X = np.where(alive[:, None], Xn, X)
    exps = np.stack([a / n for a in acc], axis=1)
    return exps, left, alive, degenerate


def _lyapunov_lanes(m, X, n, n_transient, overrides=None):
    """Dispatch on dimension; exponents come back sorted descending per lane."""
    if m.dim == 1:
        exps, left, alive, degenerate = _lyapunov_lanes_1d(m, X, n, n_transient, overrides)
    elif m.dim == 2:
        exps, left, alive, degenerate = _lyapunov_lanes_2d(m, X, n, n_transient, overrides)
    else:
        exps, left, alive, degenerate = _lyapunov_lanes_3d(m, X, n, n_transient, overrides)
    exps = np.sort(exps, axis=1)[:, ::-1]
    return exps, left, alive, degenerate


def lyapunov_spectrum(m: MapInstance, x0, n: int = DEFAULT_ITERS,
                      n_transient: int = DEFAULT_TRANSIENT) -> LyapunovSpectrum:
    """Full Lyapunov spectrum with branch-visit counts over the n accumulation steps."""
    if n < 1:
        raise ValueError("n must be >= 1")
    X = _x0_lanes(m, x0)
    exps, left, alive, degenerate = _lyapunov_lanes(m, X, n, n_transient)
    if not alive[0]:
        raise NonFiniteStateError("orbit diverged during Lyapunov accumulation")
    lv = int(left[0])
    return LyapunovSpectrum(np.array(exps[0], copy=True), n, lv, n - lv, bool(degenerate[0]))


def classify_behavior(spec) -> BehaviorLabel:
    """0/1/2 for zero, one, or two-or-more positive exponents.

    Accepts a LyapunovSpectrum or a bare exponent sequence.
    """
    exps = np.asarray(getattr(spec, "exponents", spec), dtype=np.float64)
    if not np.all(np.isfinite(exps)):
        raise ValueError("behavior label needs a finite spectrum")
    n_pos = int(np.sum(exps > 0.0))
    return BehaviorLabel(min(n_pos, 2))
