"""Labeled dataset generation, train/test splitting, and CSV/manifest serialization.

Three dataset families:

* period tables        one row per periodic grid point of a one-parameter
                       sweep, features (parameter, final state), label = period
* labeled images       cobweb diagrams of the tent map or Lozi phase
                       portraits, binary regular/chaotic labels from the
                       leading Lyapunov exponent
* orbit windows        flattened trailing state windows of the 3D map,
                       three-class regular/chaotic/hyperchaotic labels

Every stochastic choice is drawn from a per-sample splitmix64 stream keyed
by (seed, sample index), so generation is reproducible and independent of
worker chunking.  Dataset provenance records the full generator
configuration; ``regenerate_dataset`` rebuilds a byte-identical dataset
from it.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace

import numpy as np

from .bifurcation import SweepSpec, _sweep_x0_lanes
from .dynamics import (
    DEFAULT_ITERS,
    DEFAULT_MAX_PERIOD,
    DEFAULT_PERIOD_TOL,
    DEFAULT_TRANSIENT,
    Orbit,
    _detect_period_lanes,
    _evolve_lanes,
    _lyapunov_lanes,
)
from .errors import ParseError, TooFewRowsError
from .maps import MapInstance, lozi_map, make_map, param_values, pws3d_map, tent_map
from .raster import RasterImage, render_cobweb, render_phase_portrait
from .rng import Stream

__all__ = [
    "Dataset",
    "SplitDataset",
    "ImageSamples",
    "BEHAVIOR_LABEL_NAMES",
    "LOZI_PORTRAIT_BOUNDS",
    "gen_period_dataset",
    "gen_image_dataset",
    "gen_orbit_feature_dataset",
    "split_dataset",
    "write_csv",
    "read_csv",
    "write_manifest",
    "read_manifest",
    "images_to_dataset",
    "regenerate_dataset",
]

BEHAVIOR_LABEL_NAMES = {0: "regular", 1: "chaotic", 2: "hyperchaotic"}
LOZI_PORTRAIT_BOUNDS = (-2.0, 2.0, -2.0, 2.0)

TENT_COBWEB_RANGE = (-1.5, 1.5)
LOZI_PORTRAIT_RANGE = (-0.1, 1.7)
PWS3D_DELTA_R_RANGE = (-1.05, -0.85)


@dataclass(frozen=True)
class Dataset:
    features: np.ndarray  # (n, d) float64
    labels: np.ndarray  # (n,) int64
    column_names: tuple[str, ...]
    label_names: dict[int, str]
    provenance: dict

    def __post_init__(self):
        if self.features.shape[0] != self.labels.shape[0]:
            raise ValueError("feature and label row counts differ")
        if self.features.shape[1] != len(self.column_names):
            raise ValueError("column name count does not match feature columns")
        if self.features.size and not np.all(np.isfinite(self.features)):
            raise ValueError("features contain non-finite values")
        missing = set(np.unique(self.labels)) - set(self.label_names)
        if missing:
            raise ValueError(f"labels {sorted(missing)} missing from label_names")

    @property
    def n_rows(self) -> int:
        return self.features.shape[0]


@dataclass(frozen=True)
class SplitDataset:
    train: Dataset
    test: Dataset
    test_fraction: float
    seed: int


@dataclass(frozen=True)
class ImageSamples:
    """Rendered diagrams with behavior labels and the parameters that made them."""

    images: np.ndarray  # (n, res, res) uint8
    labels: np.ndarray  # (n,) int64
    params: np.ndarray  # (n,) sampled map parameter per image
    provenance: dict
    resampled: int


def gen_period_dataset(spec: SweepSpec, max_period: int = DEFAULT_MAX_PERIOD, *,
                       n_iter: int = DEFAULT_ITERS,
                       n_transient: int = DEFAULT_TRANSIENT,
                       tol: float = DEFAULT_PERIOD_TOL) -> Dataset:
    """One row per grid point with a detected period; aperiodic points are dropped."""
    m = spec.base
    grid = spec.grid()
    overrides = {spec.param: grid}
    X0 = _sweep_x0_lanes(spec, spec.n_points)
    periods, alive_p, _, _ = _detect_period_lanes(m, X0.copy(), max_period, tol,
                                                  n_transient, overrides)
    X_final, _, alive_o, _ = _evolve_lanes(m, X0.copy(), n_iter, overrides)
    keep = alive_p & alive_o & (periods > 0)
    if not keep.any():
        warnings.warn("sweep produced no periodic points; dataset is empty")
    finals = X_final[:, None] if m.dim == 1 else X_final
    feats = np.column_stack([grid[keep], finals[keep]])
    labels = periods[keep].astype(np.int64)
    state_cols = ["x_final", "y_final", "z_final"][: m.dim]
    columns = (spec.param,) + tuple(state_cols)
    label_names = {int(p): f"period-{int(p)}" for p in np.unique(labels)} if labels.size else {}
    prov = {
        "generator": "period",
        "map": m.kind,
        **{f"map_{k}": v for k, v in param_values(m).items()},
        "param": spec.param,
        "lo": spec.lo,
        "hi": spec.hi,
        "n_points": spec.n_points,
        "x0": "default" if spec.x0 is None else spec.x0,
        "seed": spec.seed,
        "max_period": max_period,
        "n_iter": n_iter,
        "n_transient": n_transient,
        "tol": tol,
    }
    return Dataset(feats, labels, columns, label_names, prov)


def _run_ranges(fn, n: int, workers: int) -> None:
    """Apply fn to contiguous index ranges; each range writes disjoint slots."""
    workers = max(1, int(workers))
    bounds = [(k * n // workers, (k + 1) * n // workers) for k in range(workers)]
    bounds = [b for b in bounds if b[1] > b[0]]
    if len(bounds) == 1:
        fn(bounds[0])
        return
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=len(bounds)) as pool:
        list(pool.map(fn, bounds))


def _sample_until_bounded(make_map_for, streams, pending, n_iter, n_transient,
                          draw_param, max_rounds=64):
    """Draw per-sample parameters/x0s until every lane has a finite orbit.

    Returns (params array, x0 array, label array, exps array, resample count).
    """
    n = len(streams)
    params = np.empty(n)
    x0s = None
    labels = np.full(n, -1, dtype=np.int64)
    exps_out = None
    resampled = 0
    pending = list(pending)
    for _ in range(max_rounds):
        if not pending:
            break
        draws = [draw_param(streams[i]) for i in pending]
        vals = np.array([d[0] for d in draws])
        X0 = np.array([d[1] for d in draws])
        if x0s is None:
            x0s = np.empty((n,) + X0.shape[1:])
        m, overrides = make_map_for(vals)
        X = X0[:, 0].copy() if m.dim == 1 else X0.copy()
        exps, _, alive, degen = _lyapunov_lanes(m, X, n_iter - n_transient,
                                                n_transient, overrides)
        if exps_out is None:
            exps_out = np.empty((n, exps.shape[1]))
        ok = alive & ~degen
        still = []
        for k, i in enumerate(pending):
            params[i] = vals[k]
            x0s[i] = X0[k]
            if ok[k]:
                labels[i] = min(int(np.sum(exps[k] > 0.0)), 2)
                exps_out[i] = exps[k]
            else:
                resampled += 1
                still.append(i)
        pending = still
    if pending:
        raise RuntimeError(f"could not find bounded orbits for samples {pending[:5]}...")
    return params, x0s, labels, exps_out, resampled


def gen_image_dataset(family: str, n_samples: int, resolution: int = 64, seed: int = 0, *,
                      n_iter: int = DEFAULT_ITERS,
                      n_transient: int = DEFAULT_TRANSIENT,
                      cobweb_steps: int = 120,
                      portrait_points: int = 3000,
                      workers: int = 1) -> ImageSamples:
    """Sample map parameters, label each by the leading exponent sign, render diagrams.

    Families: ``tent_cobweb`` (mu uniform in (-1.5, 1.5), cobweb from
    x0 = 0.1) and ``lozi_portrait`` (a uniform in (-0.1, 1.7), b = 0.5,
    random x0, post-transient scatter).  Divergent draws are resampled
    from the same per-sample stream and counted.
    """
    if n_samples < 2:
        raise ValueError("n_samples must be >= 2")
    streams = [Stream(seed, i) for i in range(n_samples)]
    if family == "tent_cobweb":
        lo, hi = TENT_COBWEB_RANGE

        def draw(st):
            return st.uniform(lo, hi), np.array([0.1])

        def mk(vals):
            return tent_map(0.0), {"mu": vals}

        pvals, _, labels, _, resampled = _sample_until_bounded(
            mk, streams, range(n_samples), n_iter, n_transient, draw)
        images = np.empty((n_samples, resolution, resolution), dtype=np.uint8)

        def render_range(lo_hi):
            for i in range(*lo_hi):
                img = render_cobweb(tent_map(float(pvals[i])), 0.1, cobweb_steps, resolution)
                images[i] = img.pixels

        _run_ranges(render_range, n_samples, workers)
    elif family == "lozi_portrait":
        lo, hi = LOZI_PORTRAIT_RANGE

        def draw(st):
            a = st.uniform(lo, hi)
            x0 = st.uniform_block(2, -0.5, 0.5)
            return a, x0

        def mk(vals):
            return lozi_map(0.0), {"a": vals}

        pvals, x0s, labels, _, resampled = _sample_until_bounded(
            mk, streams, range(n_samples), n_iter, n_transient, draw)
        base = lozi_map(0.0)
        keep = min(portrait_points, n_iter - n_transient)
        _, kept, alive, _ = _evolve_lanes(base, x0s.copy(), n_iter,
                                          {"a": pvals}, keep_last=keep)
        images = np.empty((n_samples, resolution, resolution), dtype=np.uint8)

        def render_range(lo_hi):
            for i in range(*lo_hi):
                orbit = Orbit(kept[:, i].copy(), n_transient, base)
                img = render_phase_portrait(orbit, LOZI_PORTRAIT_BOUNDS, resolution)
                images[i] = img.pixels

        _run_ranges(render_range, n_samples, workers)
    else:
        raise ValueError(f"unknown image family {family!r}")
    prov = {
        "generator": family,
        "n_samples": n_samples,
        "resolution": resolution,
        "seed": seed,
        "n_iter": n_iter,
        "n_transient": n_transient,
        "cobweb_steps": cobweb_steps,
        "portrait_points": portrait_points,
    }
    # collapse to the two-class regular/chaotic labels used by the image task
    return ImageSamples(images, np.minimum(labels, 1), pvals, prov, resampled)


def gen_orbit_feature_dataset(delta_r_range: tuple[float, float] = PWS3D_DELTA_R_RANGE,
                              n_samples: int = 500, window: int = 64, seed: int = 0, *,
                              n_iter: int = DEFAULT_ITERS,
                              n_transient: int = DEFAULT_TRANSIENT) -> Dataset:
    """Flattened trailing orbit windows of the 3D map, labeled 0/1/2 by the spectrum.

    Divergent or degenerate samples are flagged and excluded (not resampled).
    """
    if window < 1:
        raise ValueError("window must be >= 1")
    lo, hi = delta_r_range
    drs = np.empty(n_samples)
    X0 = np.empty((n_samples, 3))
    for i in range(n_samples):
        st = Stream(seed, i)
        drs[i] = st.uniform(lo, hi)
        X0[i] = st.uniform_block(3, -0.5, 0.5)
    base = pws3d_map()
    overrides = {"delta_r": drs}
    exps, _, alive_l, degen = _lyapunov_lanes(base, X0.copy(), n_iter - n_transient,
                                              n_transient, overrides)
    _, kept, alive_o, _ = _evolve_lanes(base, X0.copy(), n_transient + window,
                                        overrides, keep_last=window)
    ok = alive_l & alive_o & ~degen
    if not ok.all():
        warnings.warn(f"excluded {int((~ok).sum())} divergent/degenerate samples")
    # kept: (window, n, 3) -> rows of x_t0, y_t0, z_t0, x_t1, ...
    feats = kept.transpose(1, 0, 2).reshape(n_samples, 3 * window)[ok]
    labels = np.minimum((exps > 0.0).sum(axis=1), 2).astype(np.int64)[ok]
    columns = tuple(f"{c}{t}" for t in range(window) for c in ("x", "y", "z"))
    prov = {
        "generator": "orbit_window",
        "delta_r_lo": lo,
        "delta_r_hi": hi,
        "n_samples": n_samples,
        "window": window,
        "seed": seed,
        "n_iter": n_iter,
        "n_transient": n_transient,
    }
    return Dataset(feats, labels, columns, BEHAVIOR_LABEL_NAMES, prov)


def split_dataset(ds: Dataset, test_fraction: float, seed: int = 0) -> SplitDataset:
    """Seeded shuffle then partition; partitions are disjoint and exhaustive."""
    if not 0.0 < test_fraction < 1.0:
        raise ValueError("test_fraction must lie strictly between 0 and 1")
    n = ds.n_rows
    if n < 2:
        raise TooFewRowsError(f"cannot split {n} row(s) into two non-empty parts")
    n_test = int(n * test_fraction + 0.5)
    n_test = max(1, min(n - 1, n_test))
    perm = Stream(seed, 0).shuffle_indices(n)
    test_idx = perm[:n_test]
    train_idx = perm[n_test:]

    def part(idx, tag):
        prov = dict(ds.provenance)
        prov.update({"split": tag, "test_fraction": test_fraction, "split_seed": seed})
        return Dataset(ds.features[idx].copy(), ds.labels[idx].copy(),
                       ds.column_names, dict(ds.label_names), prov)

    return SplitDataset(part(train_idx, "train"), part(test_idx, "test"),
                        test_fraction, seed)


def write_csv(ds: Dataset, path) -> None:
    """Header ``col1,...,colN,label``; 17 significant digit decimal floats."""
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(",".join(ds.column_names) + ",label\n")
        for row, lab in zip(ds.features, ds.labels):
            fh.write(",".join(f"{v:.17g}" for v in row) + f",{int(lab)}\n")


def read_csv(path) -> Dataset:
    with open(path, "r", encoding="ascii") as fh:
        lines = fh.read().split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise ParseError("empty file", line=1)
    header = lines[0].split(",")
    if len(header) < 2 or header[-1] != "label":
        raise ParseError("header must end with a 'label' column", line=1)
    columns = tuple(header[:-1])
    feats = np.empty((len(lines) - 1, len(columns)))
    labels = np.empty(len(lines) - 1, dtype=np.int64)
    for k, line in enumerate(lines[1:], start=2):
        cells = line.split(",")
        if len(cells) != len(header):
            raise ParseError(f"expected {len(header)} cells, found {len(cells)}", line=k)
        try:
            feats[k - 2] = [float(c) for c in cells[:-1]]
            labels[k - 2] = int(cells[-1])
        except ValueError:
            raise ParseError("non-numeric cell", line=k) from None
    label_names = {int(v): str(int(v)) for v in np.unique(labels)} if labels.size else {}
    return Dataset(feats, labels, columns, label_names, {"source": str(path)})


def _format_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def write_manifest(path, entries: dict) -> None:
    """Plain-text ``key = value`` lines, sorted by key for byte determinism."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for key in sorted(entries):
            fh.write(f"{key} = {_format_value(entries[key])}\n")


def read_manifest(path) -> dict[str, str]:
    out = {}
    with open(path, "r", encoding="utf-8") as fh:
        for k, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            if " = " not in line:
                raise ParseError("expected 'key = value'", line=k)
            key, value = line.split(" = ", 1)
            out[key] = value
    return out


def images_to_dataset(samples: ImageSamples) -> Dataset:
    """Flatten images to one row per sample; ink becomes 1.0, background 0.0."""
    n, h, w = samples.images.shape
    feats = 1.0 - samples.images.reshape(n, h * w).astype(np.float64) / 255.0
    columns = tuple(f"px{i:04d}" for i in range(h * w))
    prov = dict(samples.provenance)
    prov["encoding"] = "ink1"
    return Dataset(feats, samples.labels.astype(np.int64), columns,
                   {0: "regular", 1: "chaotic"}, prov)


def _spec_from_provenance(prov) -> SweepSpec:
    kind = prov["map"]
    pvals = {k[4:]: float(v) for k, v in prov.items() if k.startswith("map_")}
    from . import maps as _maps

    ptype = {"normal_form": _maps.NormalForm1DParams, "tent": _maps.TentParams,
             "lozi": _maps.LoziParams, "pws3d": _maps.Pws3DParams,
             "bcb2d": _maps.Bcb2DParams}[kind]
    base = make_map(kind, ptype(**pvals))
    x0 = prov["x0"]
    x0 = None if x0 == "default" else float(x0)
    return SweepSpec(base, prov["param"], float(prov["lo"]), float(prov["hi"]),
                     int(prov["n_points"]), x0, int(prov["seed"]))


def regenerate_dataset(prov: dict):
    """Rebuild a dataset byte-identically from its provenance record."""
    gen = prov["generator"]
    if gen == "period":
        return gen_period_dataset(
            _spec_from_provenance(prov), int(prov["max_period"]),
            n_iter=int(prov["n_iter"]), n_transient=int(prov["n_transient"]),
            tol=float(prov["tol"]))
    if gen in ("tent_cobweb", "lozi_portrait"):
        return gen_image_dataset(
            gen, int(prov["n_samples"]), int(prov["resolution"]), int(prov["seed"]),
            n_iter=int(prov["n_iter"]), n_transient=int(prov["n_transient"]),
            cobweb_steps=int(prov["cobweb_steps"]),
            portrait_points=int(prov["portrait_points"]))
    if gen == "orbit_window":
        return gen_orbit_feature_dataset(
            (float(prov["delta_r_lo"]), float(prov["delta_r_hi"])),
            int(prov["n_samples"]), int(prov["window"]), int(prov["seed"]),
            n_iter=int(prov["n_iter"]), n_transient=int(prov["n_transient"]))
    raise ValueError(f"unknown generator {gen!r}")
