"""Three-class behavior classification of the 3D map from raw orbit windows."""

import sys
from pathlib import Path

import numpy as np

from pwsdyn.datasets import gen_orbit_feature_dataset, split_dataset, write_csv
from pwsdyn.ml import build_mlp, evaluate, fit_standardizer, report_text, train_nn

OUT = Path(sys.argv[1] if len(sys.argv) > 1 else "out/orbit_mlp")
OUT.mkdir(parents=True, exist_ok=True)
SEED = 3

ds = gen_orbit_feature_dataset(n_samples=500, window=64, seed=SEED)
write_csv(ds, OUT / "orbit_windows.csv")
print("labels:", dict(zip(*np.unique(ds.labels, return_counts=True))))

split = split_dataset(ds, 0.2, seed=SEED)
net = build_mlp(3 * 64, n_out=4, dropout_rate=0.2, seed=SEED)
net.standardizer = fit_standardizer(split.train.features)
net, history = train_nn(net, split.train, epochs=100, batch_size=32, lr=1e-3, seed=SEED)
rep = evaluate(net, split.test)
(OUT / "report.txt").write_text(report_text(rep))
print(report_text(rep))
