"""One-parameter sweeps, border-collision event detection, and two-parameter charts.

Border-collision candidates are located as grid cells where the
target-period mask flips between adjacent parameter values; each bracket
is then refined by bisection on the "detected period equals target"
predicate.  The event reports

* ``param_star``   the refined inside endpoint (target period verified),
* ``grid_hit``     the last grid value where the target period was seen,
* ``border_point_residual``  |signed border distance| of the cycle point
  nearest the border at ``param_star``,
* ``border_confirmed``       residual below the 1e-9 border tolerance.

For collisions of an attracting orbit (the 1D normal form) the residual
vanishes and the event is confirmed.  When the colliding orbit is not the
attractor on either side (tent map at |mu| = 1, where the colliding fixed
point is virtual below the bifurcation), the region edge is still refined
to the stated parameter tolerance but the residual stays O(1) and the
event is emitted unconfirmed.

The bisection predicate re-evaluates orbits with plain Python floats whose
operation order matches the lane kernels exactly, so grid scan and
refinement agree bit for bit.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields, replace

import numpy as np

from .dynamics import (
    DEFAULT_ITERS,
    DEFAULT_MAX_PERIOD,
    DEFAULT_PERIOD_TOL,
    DEFAULT_TRANSIENT,
    BehaviorLabel,
    LyapunovSpectrum,
    PeriodResult,
    _detect_period_lanes,
    _evolve_lanes,
    _lyapunov_lanes,
)
from .maps import MapInstance, make_map
from .rng import Stream

__all__ = [
    "SweepSpec",
    "ScanPoint",
    "BifurcationScan",
    "BcbEvent",
    "ChartGrid",
    "sweep_1p",
    "period_vs_param",
    "detect_bcb",
    "chart_2p",
    "chart_from_labels",
    "DEFAULT_BCB_TRANSIENT",
]

# Near-marginal orbits (tent at |mu| close to 1) converge at rate |1 - |mu||;
# reproducing the 1000-point grid boundary next to the bifurcation requires
# the transient to push the residual below the period tolerance there.
DEFAULT_BCB_TRANSIENT = 20000

_BORDER_RESIDUAL_TOL = 1e-9


@dataclass(frozen=True)
class SweepSpec:
    """A one-parameter grid over ``param`` of ``base`` with an x0 policy.

    ``x0`` fixes the initial state for every grid point; ``None`` selects
    the default policy (0.1 for 1D maps, a per-point seeded uniform draw
    from [-0.5, 0.5]^dim otherwise).
    """

    base: MapInstance
    param: str
    lo: float
    hi: float
    n_points: int
    x0: tuple | float | None = None
    seed: int = 0

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"need lo < hi, got [{self.lo}, {self.hi}]")
        if self.n_points < 2:
            raise ValueError("n_points must be >= 2")
        names = {f.name for f in fields(self.base.params)}
        if self.param not in names:
            raise ValueError(f"{self.base.kind} has no parameter {self.param!r}")

    def grid(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.n_points)


@dataclass(frozen=True)
class ScanPoint:
    param_value: float
    samples: np.ndarray  # (n_samples, dim) post-transient attractor samples
    period: PeriodResult
    spectrum: LyapunovSpectrum | None
    label: BehaviorLabel | None
    diverged: bool


@dataclass(frozen=True)
class BifurcationScan:
    spec: SweepSpec
    points: tuple[ScanPoint, ...]

    def params(self) -> np.ndarray:
        return np.array([p.param_value for p in self.points])

    def periods(self) -> list[int | None]:
        return [p.period.period for p in self.points]


@dataclass(frozen=True)
class BcbEvent:
    param_star: float
    period_before: int | None
    period_after: int | None
    border_point_residual: float
    grid_hit: float
    bracket: tuple[float, float]
    border_confirmed: bool
    refined: bool


@dataclass(frozen=True)
class ChartGrid:
    """Behavior labels over a (tau_l, tau_r) grid; label -1 marks divergent cells."""

    tau_l_axis: tuple[float, float, int]
    tau_r_axis: tuple[float, float, int]
    labels: np.ndarray  # (n_tau_l, n_tau_r) int8
    source: str  # "ground_truth" | "predicted"

    def __post_init__(self):
        expect = (self.tau_l_axis[2], self.tau_r_axis[2])
        if self.labels.shape != expect:
            raise ValueError(f"label matrix shape {self.labels.shape} != axes {expect}")


def _sweep_x0_lanes(spec: SweepSpec, n_lanes: int) -> np.ndarray:
    m = spec.base
    if spec.x0 is not None:
        v = np.atleast_1d(np.asarray(spec.x0, dtype=np.float64))
        X = np.broadcast_to(v, (n_lanes, m.dim)).copy()
    elif m.dim == 1:
        X = np.full((n_lanes, 1), 0.1)
    else:
        X = np.empty((n_lanes, m.dim))
        for i in range(n_lanes):
            X[i] = Stream(spec.seed, i).uniform_block(m.dim, -0.5, 0.5)
    return X[:, 0].copy() if m.dim == 1 else X


def sweep_1p(spec: SweepSpec, *, n_iter: int = DEFAULT_ITERS,
             n_transient: int = DEFAULT_TRANSIENT,
             max_period: int = DEFAULT_MAX_PERIOD,
             tol: float = DEFAULT_PERIOD_TOL,
             with_lyapunov: bool = False,
             n_samples: int = 100) -> BifurcationScan:
    """Simulate, detect periods, and optionally label every grid point of a sweep.

    Divergent grid points come back as flagged ScanPoints, not errors.
    """
    if not n_iter > n_transient >= 0:
        raise ValueError(f"need n_iter > n_transient >= 0, got {n_iter}, {n_transient}")
    m = spec.base
    grid = spec.grid()
    L = spec.n_points
    overrides = {spec.param: grid}
    X0 = _sweep_x0_lanes(spec, L)
    keep = min(n_samples, n_iter - n_transient)
    _, kept, alive_o, _ = _evolve_lanes(m, X0.copy(), n_iter, overrides, keep_last=keep)
    periods, alive_p, x_ref, traj = _detect_period_lanes(
        m, X0.copy(), max_period, tol, n_transient, overrides)
    if with_lyapunov:
        exps, left, alive_l, _ = _lyapunov_lanes(
            m, X0.copy(), n_iter - n_transient, n_transient, overrides)
    points = []
    for i in range(L):
        diverged = not (alive_o[i] and alive_p[i])
        samples = kept[:, i].reshape(keep, m.dim).copy()
        p = int(periods[i])
        if diverged or p < 0:
            pr = PeriodResult(None, np.empty((0, m.dim)))
        else:
            pts = [x_ref[i]] + [traj[k, i] for k in range(p - 1)]
            pr = PeriodResult(p, np.array(pts, dtype=np.float64).reshape(p, m.dim))
        spec_i = None
        lab = None
        if with_lyapunov and not diverged and alive_l[i]:
            lv = int(left[i])
            n_acc = n_iter - n_transient
            spec_i = LyapunovSpectrum(np.array(exps[i], copy=True), n_acc, lv, n_acc - lv)
            lab = BehaviorLabel(min(int(np.sum(exps[i] > 0.0)), 2))
        points.append(ScanPoint(float(grid[i]), samples, pr, spec_i, lab, diverged))
    return BifurcationScan(spec, tuple(points))


def period_vs_param(spec: SweepSpec, max_period: int = DEFAULT_MAX_PERIOD,
                    **kwargs) -> list[tuple[float, int | None]]:
    scan = sweep_1p(spec, max_period=max_period, n_samples=1, **kwargs)
    return [(p.param_value, p.period.period) for p in scan.points]


# ---------------------------------------------------------------------------
# scalar twin of the lane kernels, used by bisection refinement

def _step_scalar(kind: str, q: dict, s):
    if kind == "normal_form":
        x = s
        return q["a"] * x + q["mu"] if x <= 0.0 else q["b"] * x + q["mu"] + q["l"]
    if kind == "tent":
        x = s
        return q["mu"] * x if x <= 0.5 else q["mu"] * (1.0 - x)
    if kind == "lozi":
        x, y = s
        return ((1.0 - q["a"] * abs(x)) + y, q["b"] * x)
    if kind == "pws3d":
        x, y, z = s
        if x <= 0.0:
            tau, sigma, delta = q["tau_l"], q["sigma_l"], q["delta_l"]
        else:
            tau, sigma, delta = q["tau_r"], q["sigma_r"], q["delta_r"]
        return ((tau * x + y) + q["mu"], z - sigma * x, delta * x)
    if kind == "bcb2d":
        x, y = s
        if x <= 0.0:
            tau, delta = q["tau_l"], q["delta_l"]
        else:
            tau, delta = q["tau_r"], q["delta_r"]
        return ((tau * x + y) + q["mu"], -delta * x)
    raise ValueError(kind)


def _finite_scalar(s) -> bool:
    if isinstance(s, tuple):
        return all(math.isfinite(v) for v in s)
    return math.isfinite(s)


def _detect_period_scalar(kind, q, x0, max_period, tol, n_transient):
    """Pure-float period detection, op ordering identical to the lane path.

    Returns (period or None, cycle points list); None cycle on divergence.
    """
    s = x0 if isinstance(x0, tuple) else float(x0)
    for _ in range(n_transient):
        s = _step_scalar(kind, q, s)
        if not _finite_scalar(s):
            return None, None
    ref = s
    pts = [ref]
    for p in range(1, max_period + 1):
        s = _step_scalar(kind, q, s)
        if not _finite_scalar(s):
            return None, None
        if isinstance(s, tuple):
            dist = max(abs(a - b) for a, b in zip(s, ref))
        else:
            dist = abs(s - ref)
        if dist < tol:
            return p, pts
        pts.append(s)
    return None, None


def _nearest_border_signed(m: MapInstance, pts) -> float:
    best = None
    for s in pts:
        first = s[0] if isinstance(s, tuple) else s
        d = first - m.border
        if best is None or abs(d) < abs(best):
            best = d
    return best


def detect_bcb(spec: SweepSpec, target_period: int = 1,
               tol_param: float = 1e-9, *,
               tol: float = DEFAULT_PERIOD_TOL,
               max_period: int = DEFAULT_MAX_PERIOD,
               n_transient: int = DEFAULT_BCB_TRANSIENT) -> list[BcbEvent]:
    """Locate and refine parameter values where the target-period orbit ends.

    An empty result is a valid outcome, not an error.
    """
    if target_period < 1:
        raise ValueError("target_period must be >= 1")
    m = spec.base
    grid = spec.grid()
    max_period = max(max_period, target_period)
    overrides = {spec.param: grid}
    X0 = _sweep_x0_lanes(spec, spec.n_points)
    periods, alive, _, _ = _detect_period_lanes(m, X0, max_period, tol, n_transient, overrides)
    mask = alive & (periods == target_period)

    base_vals = {f.name: getattr(m.params, f.name) for f in fields(m.params)}

    def x0_for(i: int):
        if spec.x0 is not None:
            v = np.atleast_1d(np.asarray(spec.x0, dtype=np.float64))
            return float(v[0]) if m.dim == 1 else tuple(float(c) for c in v)
        if m.dim == 1:
            return 0.1
        return tuple(float(c) for c in Stream(spec.seed, i).uniform_block(m.dim, -0.5, 0.5))

    def predicate(value: float, x0) -> tuple[bool, list | None]:
        q = dict(base_vals)
        q[spec.param] = float(value)
        p, pts = _detect_period_scalar(m.kind, q, x0, max_period, tol, n_transient)
        return p == target_period, pts

    events = []
    for i in range(spec.n_points - 1):
        if mask[i] == mask[i + 1]:
            continue
        inside_idx = i if mask[i] else i + 1
        outside_idx = i + 1 if mask[i] else i
        x0 = x0_for(inside_idx)
        a = float(grid[inside_idx])
        b = float(grid[outside_idx])
        ok_a, pts = predicate(a, x0)
        if not ok_a:
            # scalar twin disagreed with the grid scan; report unrefined
            events.append(BcbEvent(a, _period_or_none(periods, alive, i),
                                   _period_or_none(periods, alive, i + 1),
                                   math.inf, float(grid[inside_idx]),
                                   (float(grid[i]), float(grid[i + 1])), False, False))
            continue
        # shrink to tol_param, then keep going until the border residual is
        # met or the bracket exhausts float resolution (the residual shrinks
        # with the bracket when the colliding orbit is the attractor)
        while True:
            width_ok = abs(b - a) <= tol_param
            if width_ok and abs(_nearest_border_signed(m, pts)) < _BORDER_RESIDUAL_TOL:
                break
            mid = 0.5 * (a + b)
            if mid == a or mid == b:
                break
            ok, mid_pts = predicate(mid, x0)
            if ok:
                a, pts = mid, mid_pts
            else:
                b = mid
        g = _nearest_border_signed(m, pts)
        residual = abs(g)
        events.append(BcbEvent(
            param_star=a,
            period_before=_period_or_none(periods, alive, i),
            period_after=_period_or_none(periods, alive, i + 1),
            border_point_residual=residual,
            grid_hit=float(grid[inside_idx]),
            bracket=(min(a, b), max(a, b)),
            border_confirmed=residual < _BORDER_RESIDUAL_TOL,
            refined=True,
        ))
    events.sort(key=lambda e: e.param_star)
    return events


def _period_or_none(periods, alive, i) -> int | None:
    if not alive[i] or periods[i] < 0:
        return None
    return int(periods[i])


# ---------------------------------------------------------------------------
# two-parameter charts

def _chart_chunk(params, tau_l_flat, tau_r_flat, seed, n, n_transient, lo, hi):
    base = make_map("bcb2d", replace(params, tau_l=0.0, tau_r=0.0))
    idx = np.arange(lo, hi)
    X = np.empty((hi - lo, 2))
    for k, i in enumerate(idx):
        X[k] = Stream(seed, int(i)).uniform_block(2, -0.5, 0.5)
    overrides = {"tau_l": tau_l_flat[lo:hi], "tau_r": tau_r_flat[lo:hi]}
    exps, _, alive, _ = _lyapunov_lanes(base, X, n, n_transient, overrides)
    labels = np.where(alive, (exps[:, 0] > 0.0).astype(np.int8), np.int8(-1))
    return labels


def chart_2p(tau_l_axis: tuple[float, float, int],
             tau_r_axis: tuple[float, float, int],
             params=None, *,
             n: int = DEFAULT_ITERS,
             n_transient: int = DEFAULT_TRANSIENT,
             seed: int = 0,
             workers: int = 1) -> ChartGrid:
    """Ground-truth two-class behavior chart of the 2D normal form.

    Cell (i, j) carries the label for (tau_l[i], tau_r[j]): 0 regular,
    1 chaotic (at least one positive exponent), -1 divergent.  Cell x0
    draws come from per-cell streams keyed by the row-major cell index, so
    the chart is identical for any worker count.
    """
    from .maps import Bcb2DParams

    if params is None:
        params = Bcb2DParams(tau_l=0.0, tau_r=0.0)
    n_l, n_r = tau_l_axis[2], tau_r_axis[2]
    tls = np.linspace(tau_l_axis[0], tau_l_axis[1], n_l)
    trs = np.linspace(tau_r_axis[0], tau_r_axis[1], n_r)
    tau_l_flat = np.repeat(tls, n_r)
    tau_r_flat = np.tile(trs, n_l)
    L = n_l * n_r
    workers = max(1, int(workers))
    bounds = [(k * L // workers, (k + 1) * L // workers) for k in range(workers)]
    bounds = [(lo, hi) for lo, hi in bounds if hi > lo]
    if len(bounds) == 1:
        labels = _chart_chunk(params, tau_l_flat, tau_r_flat, seed, n, n_transient, 0, L)
    else:
        with ThreadPoolExecutor(max_workers=len(bounds)) as pool:
            parts = list(pool.map(
                lambda be: _chart_chunk(params, tau_l_flat, tau_r_flat, seed, n, n_transient, *be),
                bounds))
        labels = np.concatenate(parts)
    return ChartGrid(tau_l_axis, tau_r_axis, labels.reshape(n_l, n_r), "ground_truth")


def chart_from_labels(tau_l_axis, tau_r_axis, labels: np.ndarray,
                      source: str = "predicted") -> ChartGrid:
    return ChartGrid(tau_l_axis, tau_r_axis, labels.astype(np.int8), source)
