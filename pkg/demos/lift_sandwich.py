"""
Lifting a pair into a single block permutation pair
===================================================

A set of m matrices becomes two md x md matrices: a block cyclic shift
and a block diagonal.  The lifted sequence is squeezed between running
maxima of the original one.
"""

import numpy as np

from mirs import compute_mirs, pair_lift, pj_matrices, sandwich_check
from mirs.diophantine import build_theta

pj = pj_matrices(1 / 3, build_theta(1.0, 20).theta)
lift = pair_lift(pj)
print("B0 =\n", lift.B0.astype(int))

N = 24
a = compute_mirs(pj, N)
b = compute_mirs(lift.as_set(), N)
run = np.maximum.accumulate(np.concatenate([[1.0], a.values]))
print(" n   lower     b_n     upper")
for n in range(1, N + 1, 3):
    print(f"{n:2d}  {run[n // 3]:.4f}  {b.a(n):.4f}  {run[n]:.4f}")

print("largest violations (lower, upper):", sandwich_check(a, b, len(pj)))
