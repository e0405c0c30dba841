"""
Bifurcation diagram
===================

Sweep the activity, record z1 on each branch, and write a CSV table and an
SVG plot next to this script.
"""

from pathlib import Path

import numpy as np

import hardcore_tree as ht
from hardcore_tree.diagram import sweep_to_csv, sweep_to_svg

here = Path(__file__).resolve().parent
grid = np.linspace(0.5, 4.0, 120)
points = ht.sweep("loop", 3, grid)

first = next(p for p in points if p.count == 3)
print(f"first activity with three solutions: {first.lam:.4f} (critical value {32 / 27:.4f})")

(here / "loop_k3_sweep.csv").write_text(sweep_to_csv(points))
(here / "loop_k3_sweep.svg").write_text(sweep_to_svg(points, title="loop, k = 3"))
print("wrote", here / "loop_k3_sweep.csv", "and", here / "loop_k3_sweep.svg")
