"""Two-parameter behavior chart: ground truth plus model reconstruction.

Runs the chart2p subcommand in train-predict mode, which writes the
ground-truth chart, trains the MLP on the restricted training window, and
emits the predicted full-grid chart next to it.
"""

import sys

from pwsdyn.cli import main

OUT = sys.argv[1] if len(sys.argv) > 1 else "out/chart2p"

sys.exit(main([
    "chart2p", "--mode", "train-predict", "--grid", "100x100",
    "--seed", "11", "--out", OUT,
]))
