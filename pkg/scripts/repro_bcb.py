"""Bifurcation-diagram data and border-collision values for the two 1D maps.

Writes sweep CSVs (attractor samples plus period-vs-parameter columns) and
refined border-collision events for the piecewise-linear normal form and
the tent map into out/bcb/.
"""

import sys

from pwsdyn.cli import main

OUT = sys.argv[1] if len(sys.argv) > 1 else "out/bcb"

runs = [
    ["sweep", "--map", "normal-form", "--a", "0.5", "--b", "0.5", "--l", "-0.1",
     "--points", "1000", "--lyapunov", "--out", f"{OUT}/normal_form_sweep"],
    ["sweep", "--map", "tent", "--points", "1000", "--lyapunov",
     "--out", f"{OUT}/tent_sweep"],
    ["detect-bcb", "--map", "normal-form", "--a", "0.5", "--b", "0.5", "--l", "-0.1",
     "--out", f"{OUT}/normal_form_bcb"],
    ["detect-bcb", "--map", "tent", "--out", f"{OUT}/tent_bcb"],
]

for argv in runs:
    code = main(argv)
    if code != 0:
        sys.exit(code)
