"""Regular-vs-chaotic image classification with the from-scratch CNN.

Builds the tent cobweb and Lozi portrait image sets, trains the CNN on a
70/30 split of each, and prints overall plus per-class accuracies.
"""

import sys
import time
from pathlib import Path

from pwsdyn.datasets import gen_image_dataset, images_to_dataset, split_dataset
from pwsdyn.ml import build_cnn, evaluate, save_model, train_nn

OUT = Path(sys.argv[1] if len(sys.argv) > 1 else "out/image_cnn")
OUT.mkdir(parents=True, exist_ok=True)
N_IMAGES = int(sys.argv[2]) if len(sys.argv) > 2 else 400
EPOCHS = int(sys.argv[3]) if len(sys.argv) > 3 else 50
SEED = 21

for family in ("tent_cobweb", "lozi_portrait"):
    t0 = time.time()
    samples = gen_image_dataset(family, N_IMAGES, 64, seed=SEED)
    ds = images_to_dataset(samples)
    split = split_dataset(ds, 0.3, seed=SEED)
    net = build_cnn(64, 64, n_classes=2, seed=SEED)
    net, history = train_nn(net, split.train, epochs=EPOCHS, batch_size=32,
                            lr=1e-3, seed=SEED)
    rep = evaluate(net, split.test)
    save_model(net, OUT / f"{family}_cnn.txt")
    per_class = " ".join(f"class{k}={v:.3f}" for k, v in rep.per_class_accuracy.items())
    print(f"{family}: test accuracy {rep.accuracy:.4f} ({per_class}) "
          f"final loss {history[-1]:.4f} [{time.time() - t0:.0f}s]")
