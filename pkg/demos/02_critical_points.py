"""
Critical activities from the branch map
=======================================

On the asymmetric branch the cube-root activity is a function phi(x) of
x = z1**(1/3). The minimum of phi is where the asymmetric pair is born.
"""

from fractions import Fraction

import numpy as np

import hardcore_tree as ht

expected = {("loop", 3): Fraction(32, 27), ("rod", 3): Fraction(4, 27), ("loop", 2): Fraction(9, 4), ("rod", 2): Fraction(1)}

for (graph, k), exact in expected.items():
    cp = ht.find_lambda_cr(graph, k)
    print(f"{graph}, k={k}: lambda_cr = {cp.lambda_cr:.15f}  exact {exact} = {float(exact):.15f}")
    print(f"    x* = {cp.x_star:.12f}, z* = ({cp.z_star.z1:.12f}, {cp.z_star.z2:.12f})")

# phi along the loop branch; the minimum sits at 2**(-1/3)
bm = ht.branch_map("loop", 3)
x = np.linspace(0.4, 1.2, 9)
print("\n   x       phi(x)^3")
for xi in x:
    print(f"  {xi:.2f}   {bm.phi(xi) ** 3:.6f}")

# phi is convex, so the octic has 0, 1 (double) or 2 roots on the branch
rep = ht.verify_convexity_loop_k3(raise_on_violation=False)
print(f"\nconvexity: {len(rep.violations)} violations on {rep.grid_size} points, alpha(1) = {rep.alpha_at_1}")
for lam in (1.0, 32 / 27, 2.0):
    print(f"  lambda = {lam:.6g}: branch roots {ht.loop_k3_branch_polynomial(lam)}")
