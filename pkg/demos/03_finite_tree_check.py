"""
Checking fixed points on a finite tree
======================================

A boundary law is a fixed point exactly when the finite-volume measures are
consistent: summing the depth-n measure over its outer shell gives the
depth-(n-1) measure. On small trees both can be enumerated outright.
"""

import hardcore_tree as ht

tree = ht.FiniteTree.cayley(2, 2)
print("vertices:", tree.n_vertices, " boundary:", len(tree.boundary))
for g in ht.FertileGraph:
    print(f"  {g.value:8s} admissible configurations: {ht.count_admissible(g, tree)}")

# defect at the solution and after nudging it
p = ht.ModelParams(2, 1.0)
for g in ht.FertileGraph:
    for s in ht.solve_all(g, p):
        d0 = ht.consistency_defect(g, p, 2, s.z)
        d1 = ht.consistency_defect(g, p, 2, (s.z.z1 * 1.05, s.z.z2))
        print(f"  {g.value:8s} z = ({s.z.z1:.6f}, {s.z.z2:.6f})  defect {d0:.1e}, nudged {d1:.1e}")

# the measure itself: the most likely configurations of the loop model
mu = ht.measure("loop", p, tree, ht.BoundaryWeights.translation_invariant("loop", tree, ht.solve_all("loop", p).solutions[0].z, p.lam))
top = mu.probabilities.argsort()[::-1][:5]
for i in top:
    print("  ", "".join(map(str, mu.support[i])), f"{mu.probabilities[i]:.4f}")
