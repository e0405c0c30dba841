"""
How many translation-invariant measures?
========================================

For the loop and the rod on the order-3 Cayley tree the number of fixed
points of the boundary-law recursion jumps from 1 to 3 as the activity
crosses a critical value. Key and whistle always have exactly one.
"""

import numpy as np

import hardcore_tree as ht

# a coarse activity grid on each side of the jump
for graph, grid in [("loop", [0.5, 1.0, 1.2, 1.3, 2.0, 5.0]), ("rod", [0.05, 0.1, 0.15, 0.2, 1.0, 10.0])]:
    print(f"\n{graph}, k = 3")
    for lam in grid:
        sset = ht.solve_all(graph, ht.ModelParams(3, lam))
        zs = "  ".join(f"({s.z.z1:.6g}, {s.z.z2:.6g})" for s in sset)
        print(f"  lambda = {lam:<6g} count = {sset.count}   {zs}")

# the asymmetric solutions come in swapped pairs
sset = ht.solve_all("loop", ht.ModelParams(3, 2.0))
pairs = [(s.z.z1, s.z.z2) for s in sset if s.branch is ht.Branch.ASYMMETRIC]
print("\nasymmetric pair at lambda = 2:", pairs)
print("swap of the first equals the second:", np.allclose(pairs[0][::-1], pairs[1]))

# key and whistle, any k
for graph in ("key", "whistle"):
    counts = {k: [ht.solve_all(graph, ht.ModelParams(k, lam)).count for lam in (0.01, 1.0, 100.0)] for k in (1, 2, 3, 4)}
    print(f"{graph}: {counts}")
