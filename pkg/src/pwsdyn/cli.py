"""Command-line entry points.

Subcommands reproduce the full pipeline end to end: ``simulate`` and
``sweep`` emit orbit and bifurcation-diagram data, ``detect-bcb`` locates
border-collision parameters, ``gen-dataset`` builds the labeled datasets,
``train``/``evaluate`` run the classifiers, and ``chart2p`` produces
ground-truth and model-predicted two-parameter behavior charts.

Artifacts are data-first: CSV tables and binary PGM images, plus one
plain-text ``manifest.txt`` per run echoing the resolved configuration and
versions.  Re-running a subcommand with the same configuration reproduces
every artifact byte for byte, for any ``--workers`` value.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from . import __version__
from .bifurcation import (
    DEFAULT_BCB_TRANSIENT,
    SweepSpec,
    chart_2p,
    chart_from_labels,
    detect_bcb,
    sweep_1p,
)
from .datasets import (
    Dataset,
    gen_image_dataset,
    gen_orbit_feature_dataset,
    gen_period_dataset,
    read_csv,
    split_dataset,
    write_csv,
    write_manifest,
)
from .dynamics import (
    DEFAULT_ITERS,
    DEFAULT_MAX_PERIOD,
    DEFAULT_PERIOD_TOL,
    DEFAULT_TRANSIENT,
    simulate,
)
from .errors import NonFiniteStateError, ParseError, PwsdynError
from .maps import (
    MapInstance,
    bcb2d_map,
    lozi_map,
    make_map,
    normal_form_map,
    param_values,
    pws3d_map,
    tent_map,
)
from .ml import (
    build_cnn,
    build_mlp,
    evaluate,
    fit_standardizer,
    load_model,
    report_csv_lines,
    report_text,
    save_model,
    train_decision_tree,
    train_knn,
    train_linear_svm,
    train_logistic_regression,
    train_nn,
    train_random_forest,
)
from .raster import RasterImage, write_pgm

MAP_CHOICES = ("normal-form", "tent", "lozi", "pws3d", "bcb2d")

# per-map defaults for the swept parameter and its range
SWEEP_DEFAULTS = {
    "normal-form": ("mu", -0.1, 0.2),
    "tent": ("mu", -1.5, 1.5),
    "lozi": ("a", -0.1, 1.7),
    "pws3d": ("delta_r", -1.05, -0.85),
    "bcb2d": ("tau_l", -1.0, 3.0),
}

CHART_GRAY = {0: 220, 1: 40, -1: 255}


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    out_dir: Path
    entries: dict


def _default_out() -> str:
    return os.environ.get("PWSDYN_OUT", "pwsdyn_out")


def _add_map_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--map", choices=MAP_CHOICES, required=True)
    for flag in ("a", "b", "l", "mu", "tau-l", "sigma-l", "delta-l",
                 "tau-r", "sigma-r", "delta-r"):
        p.add_argument(f"--{flag}", type=float, default=None)


def _build_map(args) -> MapInstance:
    def pick(**defaults):
        out = {}
        for name, default in defaults.items():
            v = getattr(args, name)
            out[name] = default if v is None else v
        return out

    if args.map == "normal-form":
        return normal_form_map(**pick(a=0.5, b=0.5, l=-0.1, mu=0.0))
    if args.map == "tent":
        return tent_map(**pick(mu=1.5))
    if args.map == "lozi":
        return lozi_map(**pick(a=1.68, b=0.5))
    if args.map == "pws3d":
        return pws3d_map(**pick(delta_r=-0.95, tau_l=-0.5, sigma_l=0.95, delta_l=0.2,
                                tau_r=0.8, sigma_r=-0.6, mu=0.1))
    if args.map == "bcb2d":
        return bcb2d_map(**pick(tau_l=0.5, tau_r=0.5, delta_l=2.0, delta_r=-0.2, mu=-1.0))
    raise ValueError(args.map)


def _parse_range(text: str) -> tuple[float, float]:
    lo, _, hi = text.partition(":")
    return float(lo), float(hi)


def _parse_grid(text: str) -> tuple[int, int]:
    a, _, b = text.lower().partition("x")
    return int(a), int(b)


def _prepare_out(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    probe = out / ".write_probe"
    probe.write_text("")
    probe.unlink()
    return out


def _manifest(out: Path, subcommand: str, args, extra: dict | None = None) -> RunConfig:
    entries = {"subcommand": subcommand,
               "pwsdyn_version": __version__,
               "numpy_version": np.__version__,
               "python_version": sys.version.split()[0]}
    for key, value in sorted(vars(args).items()):
        if key in ("out", "func"):
            continue
        if value is not None:
            entries[f"arg_{key}"] = value
    if extra:
        entries.update(extra)
    write_manifest(out / "manifest.txt", entries)
    return RunConfig(subcommand, out, entries)


def _sweep_spec_from_args(args) -> SweepSpec:
    m = _build_map(args)
    default_param, default_lo, default_hi = SWEEP_DEFAULTS[args.map]
    param = args.param or default_param
    lo, hi = _parse_range(args.range) if args.range else (default_lo, default_hi)
    x0 = args.x0[0] if (args.x0 is not None and m.dim == 1) else \
        (tuple(args.x0) if args.x0 is not None else None)
    return SweepSpec(m, param, lo, hi, args.points, x0, args.seed)


def _write_rows(path: Path, header: str, rows) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(row + "\n")


def _g(v: float) -> str:
    return f"{v:.17g}"


# ---------------------------------------------------------------------------
# subcommands

def cmd_simulate(args) -> int:
    out = _prepare_out(args)
    m = _build_map(args)
    x0 = args.x0 if args.x0 is not None else ([0.1] * m.dim)
    orbit = simulate(m, np.array(x0, dtype=np.float64), args.iters, args.transient)
    comps = ["x", "y", "z"][: m.dim]
    rows = []
    for k, s in enumerate(orbit.states):
        rows.append(f"{args.transient + k + 1}," + ",".join(_g(v) for v in s))
    _write_rows(out / "orbit.csv", "n," + ",".join(comps), rows)
    _manifest(out, "simulate", args, {f"map_{k}": v for k, v in param_values(m).items()})
    print(f"wrote {len(rows)} orbit rows to {out / 'orbit.csv'}")
    return 0


def cmd_sweep(args) -> int:
    out = _prepare_out(args)
    spec = _sweep_spec_from_args(args)
    scan = sweep_1p(spec, n_iter=args.iters, n_transient=args.transient,
                    max_period=args.max_period, tol=args.tol,
                    with_lyapunov=args.lyapunov, n_samples=args.samples)
    dim = spec.base.dim
    comps = ["x", "y", "z"][:dim]
    summary_header = "param,period,diverged"
    if args.lyapunov:
        summary_header += "," + ",".join(f"lambda{i + 1}" for i in range(dim)) + ",label"
    srows = []
    arows = []
    for pt in scan.points:
        cells = [_g(pt.param_value),
                 "" if pt.period.period is None else str(pt.period.period),
                 "1" if pt.diverged else "0"]
        if args.lyapunov:
            if pt.spectrum is None:
                cells += [""] * dim + [""]
            else:
                cells += [_g(v) for v in pt.spectrum.exponents]
                cells += [str(int(pt.label))]
        srows.append(",".join(cells))
        if not pt.diverged:
            for s in pt.samples:
                arows.append(_g(pt.param_value) + "," + ",".join(_g(v) for v in s))
    _write_rows(out / "sweep_summary.csv", summary_header, srows)
    _write_rows(out / "sweep_attractor.csv", "param," + ",".join(comps), arows)
    _manifest(out, "sweep", args,
              {f"map_{k}": v for k, v in param_values(spec.base).items()})
    print(f"swept {spec.param} over [{_g(spec.lo)}, {_g(spec.hi)}] "
          f"({spec.n_points} points) -> {out}")
    return 0


def cmd_detect_bcb(args) -> int:
    out = _prepare_out(args)
    spec = _sweep_spec_from_args(args)
    events = detect_bcb(spec, args.target_period, args.tol_param,
                        tol=args.tol, max_period=args.max_period,
                        n_transient=args.transient)
    rows = []
    for e in events:
        rows.append(",".join([
            _g(e.param_star), _g(e.grid_hit),
            "" if e.period_before is None else str(e.period_before),
            "" if e.period_after is None else str(e.period_after),
            _g(e.border_point_residual),
            "1" if e.border_confirmed else "0",
            _g(e.bracket[0]), _g(e.bracket[1]),
            "1" if e.refined else "0",
        ]))
        print(f"BCB event: {spec.param}*={_g(e.param_star)} grid_hit={_g(e.grid_hit)} "
              f"period {e.period_before}->{e.period_after} "
              f"residual={e.border_point_residual:.3g}")
    _write_rows(out / "bcb_events.csv",
                "param_star,grid_hit,period_before,period_after,border_residual,"
                "border_confirmed,bracket_lo,bracket_hi,refined", rows)
    _manifest(out, "detect-bcb", args,
              {f"map_{k}": v for k, v in param_values(spec.base).items()})
    print(f"{len(events)} event(s) -> {out / 'bcb_events.csv'}")
    return 0


def cmd_gen_dataset(args) -> int:
    out = _prepare_out(args)
    if args.family == "period":
        spec = _sweep_spec_from_args(args)
        ds = gen_period_dataset(spec, args.max_period, n_iter=args.iters,
                                n_transient=args.transient, tol=args.tol)
        path = out / "dataset.csv"
        write_csv(ds, path)
        _manifest(out, "gen-dataset", args, dict(ds.provenance))
        print(f"wrote {ds.n_rows} rows, labels {sorted(ds.label_names)} -> {path}")
        return 0
    if args.family == "pws3d":
        lo, hi = _parse_range(args.delta_r_range)
        ds = gen_orbit_feature_dataset((lo, hi), args.n_samples, args.window,
                                       args.seed, n_iter=args.iters,
                                       n_transient=args.transient)
        path = out / "dataset.csv"
        write_csv(ds, path)
        _manifest(out, "gen-dataset", args, dict(ds.provenance))
        print(f"wrote {ds.n_rows} rows, labels {sorted(ds.label_names)} -> {path}")
        return 0
    family = {"cobweb": "tent_cobweb", "lozi": "lozi_portrait"}[args.family]
    samples = gen_image_dataset(family, args.n_samples, args.resolution, args.seed,
                                n_iter=args.iters, n_transient=args.transient,
                                workers=args.workers)
    img_dir = out / "images"
    img_dir.mkdir(exist_ok=True)
    rows = []
    for i in range(samples.images.shape[0]):
        name = f"sample_{i:05d}.pgm"
        write_pgm(RasterImage(args.resolution, args.resolution, samples.images[i]),
                  img_dir / name)
        rows.append(f"{name},{_g(samples.params[i])},{int(samples.labels[i])}")
    _write_rows(out / "labels.csv", "file,param,label", rows)
    _manifest(out, "gen-dataset", args,
              {**samples.provenance, "resampled": samples.resampled})
    print(f"wrote {samples.images.shape[0]} images ({samples.resampled} resampled) -> {img_dir}")
    return 0


def _infer_image_side(n_cols: int, args) -> tuple[int, int]:
    if args.image_size:
        return _parse_grid(args.image_size)
    side = int(round(n_cols ** 0.5))
    if side * side != n_cols:
        raise PwsdynError(
            f"dataset has {n_cols} columns, not a square image; pass --image-size HxW")
    return side, side


def cmd_train(args) -> int:
    out = _prepare_out(args)
    ds = read_csv(args.dataset)
    split = split_dataset(ds, args.test_fraction, args.seed)
    train, test = split.train, split.test
    n_classes = len(np.unique(train.labels))
    history = None
    if args.model == "dtc":
        model = train_decision_tree(train, args.max_depth, args.min_leaf)
    elif args.model == "rf":
        model = train_random_forest(train, args.trees, args.max_depth, args.seed,
                                    min_leaf=args.min_leaf)
    elif args.model == "knn":
        model = train_knn(train, args.k)
    elif args.model == "logreg":
        model = train_logistic_regression(train, args.epochs, args.lr)
    elif args.model == "svm":
        model = train_linear_svm(train, args.epochs, args.lr, args.reg, args.seed)
    elif args.model == "mlp":
        n_out = max(args.n_out, n_classes)
        net = build_mlp(train.features.shape[1], n_out=n_out,
                        dropout_rate=args.dropout, seed=args.seed)
        net.standardizer = fit_standardizer(train.features)
        model, history = train_nn(net, train, args.epochs, args.batch_size,
                                  args.lr, args.seed)
    elif args.model == "cnn":
        h, w = _infer_image_side(train.features.shape[1], args)
        net = build_cnn(h, w, n_classes=n_classes, seed=args.seed)
        model, history = train_nn(net, train, args.epochs, args.batch_size,
                                  args.lr, args.seed)
    else:
        raise PwsdynError(f"unknown model {args.model!r}")
    report = evaluate(model, test)
    save_model(model, out / "model.txt")
    with open(out / "report.txt", "w", encoding="ascii", newline="\n") as fh:
        fh.write(report_text(report))
    _write_rows(out / "report.csv", report_csv_lines(report)[0], report_csv_lines(report)[1:])
    extra = {"test_accuracy": report.accuracy, "n_train": train.n_rows,
             "n_test": test.n_rows}
    if history is not None:
        _write_rows(out / "loss_history.csv", "epoch,loss",
                    [f"{i},{_g(v)}" for i, v in enumerate(history)])
        extra["final_loss"] = history[-1]
    _manifest(out, "train", args, extra)
    print(f"{args.model}: test accuracy {report.accuracy:.4f} "
          f"({train.n_rows} train / {test.n_rows} test) -> {out}")
    return 0


def cmd_evaluate(args) -> int:
    out = _prepare_out(args)
    model = load_model(args.model_file)
    ds = read_csv(args.dataset)
    report = evaluate(model, ds)
    with open(out / "report.txt", "w", encoding="ascii", newline="\n") as fh:
        fh.write(report_text(report))
    _write_rows(out / "report.csv", report_csv_lines(report)[0], report_csv_lines(report)[1:])
    _manifest(out, "evaluate", args, {"accuracy": report.accuracy, "n_rows": ds.n_rows})
    print(f"accuracy {report.accuracy:.4f} on {ds.n_rows} rows -> {out}")
    return 0


def _chart_to_pgm(chart, path) -> None:
    # rows run top-down over descending tau_r so the chart plots like a figure
    labels = chart.labels
    n_l, n_r = labels.shape
    img = np.empty((n_r, n_l), dtype=np.uint8)
    for lab, gray in CHART_GRAY.items():
        img[labels.T[::-1] == lab] = gray
    write_pgm(RasterImage(n_l, n_r, img), path)


def _chart_to_csv(chart, path) -> None:
    tls = np.linspace(*chart.tau_l_axis)
    trs = np.linspace(*chart.tau_r_axis)
    rows = []
    for i, tl in enumerate(tls):
        for j in range(chart.tau_r_axis[2]):
            rows.append(f"{_g(tl)},{_g(trs[j])},{int(chart.labels[i, j])}")
    _write_rows(path, "tau_l,tau_r,label", rows)


def cmd_chart2p(args) -> int:
    out = _prepare_out(args)
    n_l, n_r = _parse_grid(args.grid)
    tl_lo, tl_hi = _parse_range(args.tau_l_range)
    tr_lo, tr_hi = _parse_range(args.tau_r_range)
    from .maps import Bcb2DParams

    params = Bcb2DParams(0.0, 0.0,
                         delta_l=args.delta_l if args.delta_l is not None else 2.0,
                         delta_r=args.delta_r if args.delta_r is not None else -0.2,
                         mu=args.mu if args.mu is not None else -1.0)
    chart = chart_2p((tl_lo, tl_hi, n_l), (tr_lo, tr_hi, n_r), params,
                     n=args.iters, n_transient=args.transient,
                     seed=args.seed, workers=args.workers)
    _chart_to_pgm(chart, out / "chart_truth.pgm")
    _chart_to_csv(chart, out / "chart_truth.csv")
    extra = {"n_regular": int((chart.labels == 0).sum()),
             "n_chaotic": int((chart.labels == 1).sum()),
             "n_divergent": int((chart.labels == -1).sum())}
    if args.mode == "train-predict":
        rl_lo, rl_hi = _parse_range(args.train_tau_l)
        rr_lo, rr_hi = _parse_range(args.train_tau_r)
        tls = np.linspace(tl_lo, tl_hi, n_l)
        trs = np.linspace(tr_lo, tr_hi, n_r)
        TL = np.repeat(tls, n_r)
        TR = np.tile(trs, n_l)
        flat = chart.labels.reshape(-1)
        region = (TL > rl_lo) & (TL < rl_hi) & (TR > rr_lo) & (TR < rr_hi) & (flat >= 0)
        feats = np.column_stack([TL[region], TR[region]])
        ds = Dataset(feats, flat[region].astype(np.int64), ("tau_l", "tau_r"),
                     {0: "regular", 1: "chaotic"}, {"generator": "chart_region"})
        split = split_dataset(ds, 0.2, args.seed)
        net = build_mlp(2, n_out=2, dropout_rate=args.dropout, seed=args.seed)
        net.standardizer = fit_standardizer(split.train.features)
        net, _ = train_nn(net, split.train, args.epochs, args.batch_size,
                          args.lr, args.seed)
        holdout = evaluate(net, split.test)
        all_feats = np.column_stack([TL, TR])
        pred_labels = net.predict(all_feats).reshape(n_l, n_r)
        pred = chart_from_labels(chart.tau_l_axis, chart.tau_r_axis, pred_labels)
        _chart_to_pgm(pred, out / "chart_pred.pgm")
        _chart_to_csv(pred, out / "chart_pred.csv")
        save_model(net, out / "model.txt")
        valid = flat >= 0
        agreement = float(np.mean(pred_labels.reshape(-1)[valid] == flat[valid]))
        extra.update({"holdout_accuracy": holdout.accuracy,
                      "train_region_cells": int(region.sum()),
                      "full_grid_agreement": agreement})
        print(f"held-out accuracy inside training region: {holdout.accuracy:.4f}")
        print(f"full-grid agreement with ground truth: {agreement:.4f}")
    _manifest(out, "chart2p", args, extra)
    print(f"chart {n_l}x{n_r}: {extra['n_regular']} regular, "
          f"{extra['n_chaotic']} chaotic, {extra['n_divergent']} divergent -> {out}")
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pwsdyn", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, sweepish=False):
        p.add_argument("--out", default=_default_out())
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--iters", type=int, default=DEFAULT_ITERS)
        p.add_argument("--transient", type=int, default=DEFAULT_TRANSIENT)
        if sweepish:
            p.add_argument("--param", default=None)
            p.add_argument("--range", "--param-range", dest="range", default=None,
                           help="lo:hi (use --range=-1:1 when lo is negative)")
            p.add_argument("--points", type=int, default=1000)
            p.add_argument("--max-period", type=int, default=DEFAULT_MAX_PERIOD)
            p.add_argument("--tol", type=float, default=DEFAULT_PERIOD_TOL)
            p.add_argument("--x0", type=float, nargs="+", default=None)

    p = sub.add_parser("simulate", help="iterate one orbit and write it as CSV")
    _add_map_flags(p)
    common(p)
    p.add_argument("--x0", type=float, nargs="+", default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="one-parameter bifurcation scan")
    _add_map_flags(p)
    common(p, sweepish=True)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--lyapunov", action="store_true")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("detect-bcb", help="locate and refine border-collision events")
    _add_map_flags(p)
    common(p, sweepish=True)
    p.add_argument("--target-period", type=int, default=1)
    p.add_argument("--tol-param", type=float, default=1e-9)
    p.set_defaults(func=cmd_detect_bcb, transient=DEFAULT_BCB_TRANSIENT)

    p = sub.add_parser("gen-dataset", help="generate a labeled dataset")
    p.add_argument("--family", choices=("period", "cobweb", "lozi", "pws3d"), required=True)
    _add_map_flags_optional(p)
    common(p, sweepish=True)
    p.add_argument("--n-samples", type=int, default=1000)
    p.add_argument("--resolution", type=int, default=64)
    p.add_argument("--window", type=int, default=64)
    p.add_argument("--delta-r-range", default="-1.05:-0.85")
    p.set_defaults(func=cmd_gen_dataset)

    p = sub.add_parser("train", help="train a classifier on a dataset CSV")
    common(p)
    p.add_argument("--dataset", required=True)
    p.add_argument("--model", choices=("dtc", "rf", "knn", "logreg", "svm", "mlp", "cnn"),
                   required=True)
    p.add_argument("--test-fraction", type=float, default=0.2)
    p.add_argument("--max-depth", type=int, default=None)
    p.add_argument("--min-leaf", type=int, default=1)
    p.add_argument("--trees", type=int, default=100)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--epochs", type=int, default=500)
    p.add_argument("--lr", type=float, default=None)
    p.add_argument("--reg", type=float, default=1e-4)
    p.add_argument("--batch-size", type=int, default=32)
    p.add_argument("--dropout", type=float, default=0.2)
    p.add_argument("--n-out", type=int, default=4)
    p.add_argument("--image-size", default=None, help="HxW for cnn on non-square data")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", help="evaluate a saved model on a dataset CSV")
    common(p)
    p.add_argument("--model-file", required=True)
    p.add_argument("--dataset", required=True)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("chart2p", help="two-parameter behavior chart (truth or predicted)")
    common(p)
    p.add_argument("--mode", choices=("truth", "train-predict"), default="truth")
    p.add_argument("--grid", default="100x100")
    p.add_argument("--tau-l-range", default="-1:3")
    p.add_argument("--tau-r-range", default="-0.2:1")
    p.add_argument("--train-tau-l", default="0:2")
    p.add_argument("--train-tau-r", default="0.6:1")
    p.add_argument("--delta-l", type=float, default=None)
    p.add_argument("--delta-r", type=float, default=None)
    p.add_argument("--mu", type=float, default=None)
    p.add_argument("--epochs", type=int, default=300)
    p.add_argument("--batch-size", type=int, default=64)
    p.add_argument("--lr", type=float, default=None)
    p.add_argument("--dropout", type=float, default=0.0)
    p.set_defaults(func=cmd_chart2p)

    return parser


def _add_map_flags_optional(p: argparse.ArgumentParser) -> None:
    p.add_argument("--map", choices=MAP_CHOICES, default=None)
    for flag in ("a", "b", "l", "mu", "tau-l", "sigma-l", "delta-l",
                 "tau-r", "sigma-r", "delta-r"):
        p.add_argument(f"--{flag}", type=float, default=None)


_DEFAULT_LR = {"logreg": 0.1, "svm": 0.1, "mlp": 1e-3, "cnn": 1e-3}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "lr", None) is None and hasattr(args, "lr"):
        args.lr = _DEFAULT_LR.get(getattr(args, "model", ""), 1e-3)
    if args.subcommand == "gen-dataset" and args.family == "period" and args.map is None:
        args.map = "normal-form"
    if args.subcommand == "gen-dataset" and args.family != "period" and args.map is None:
        args.map = {"cobweb": "tent", "lozi": "lozi", "pws3d": "pws3d"}[args.family]
    try:
        return args.func(args)
    except NonFiniteStateError as exc:
        print(f"error: NonFiniteState: {exc}", file=sys.stderr)
        return 5
    except (ParseError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except PwsdynError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 4
    except ValueError as exc:
        print(f"error: ValueError: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
