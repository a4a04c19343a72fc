"""Period-prediction benchmark: five classifiers on the two 1D-map datasets.

Generates both period datasets, trains every classic model on an 80/20
split, prints an accuracy table, and writes a per-period mean-prediction
heatmap CSV per dataset (rows normalized across models).
"""

import sys
from pathlib import Path

import numpy as np

from pwsdyn.bifurcation import SweepSpec
from pwsdyn.datasets import gen_period_dataset, split_dataset, write_csv
from pwsdyn.maps import normal_form_map, tent_map
from pwsdyn.ml import (
    evaluate,
    train_decision_tree,
    train_knn,
    train_linear_svm,
    train_logistic_regression,
    train_random_forest,
)

OUT = Path(sys.argv[1] if len(sys.argv) > 1 else "out/classic_ml")
OUT.mkdir(parents=True, exist_ok=True)
SEED = 7

DATASETS = {
    "normal_form": SweepSpec(normal_form_map(0.5, 0.5, -0.1, 0.0), "mu", -0.1, 0.2, 1000),
    "tent": SweepSpec(tent_map(0.0), "mu", -1.0, 1.0, 1000),
}

MODELS = {
    "dtc": lambda train: train_decision_tree(train),
    "lr": lambda train: train_logistic_regression(train),
    "knn": lambda train: train_knn(train, 5),
    "rf": lambda train: train_random_forest(train, 100, seed=SEED),
    "svm": lambda train: train_linear_svm(train, seed=SEED),
}

for name, spec in DATASETS.items():
    ds = gen_period_dataset(spec)
    write_csv(ds, OUT / f"{name}_dataset.csv")
    split = split_dataset(ds, 0.2, seed=SEED)
    reports = {}
    print(f"\n{name}: {split.train.n_rows} train / {split.test.n_rows} test, "
          f"periods {sorted(ds.label_names)}")
    for model_name, fit in MODELS.items():
        rep = evaluate(fit(split.train), split.test)
        reports[model_name] = rep
        print(f"  {model_name:6s} accuracy {rep.accuracy:.3f}")
    periods = sorted({c for rep in reports.values() for c in rep.per_label_mean_prediction})
    lines = ["period," + ",".join(reports)]
    for p in periods:
        row = np.array([reports[m].per_label_mean_prediction.get(p, 0.0) for m in reports])
        total = row.sum()
        if total > 0:
            row = row / total
        lines.append(f"{p}," + ",".join(f"{v:.6f}" for v in row))
    heat = OUT / f"{name}_heatmap.csv"
    heat.write_text("\n".join(lines) + "\n")
    print(f"  heatmap -> {heat}")
