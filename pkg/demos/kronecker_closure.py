"""
Closure under Kronecker products and block sums
===============================================

Rate sequences multiply under Kronecker products and take maxima under
block-diagonal sums.  Coupling blocks break the equality but stay within
an explicit sandwich.
"""

import numpy as np

from mirs import (
    BlockCombineSpec,
    block_combine,
    compute_mirs,
    jordan_block,
    kron_product_set,
    MatrixSet,
    rotation,
)
from mirs.constructions import sandwich_bounds

J = MatrixSet.of([jordan_block(2), np.eye(2)], claimed_jsr=1.0)
R = MatrixSet.of([rotation(0.3), rotation(1.7)], claimed_jsr=1.0)

a, b = compute_mirs(J, 10).values, compute_mirs(R, 10).values
c = compute_mirs(kron_product_set(J, R), 10).values
print("kron: max |c_n - a_n b_n| =", np.max(np.abs(c - a * b)))

c0 = compute_mirs(block_combine(BlockCombineSpec.zero_coupled(J, R)), 10).values
print("block sum: max |c_n - max(a_n, b_n)| =", np.max(np.abs(c0 - np.maximum(a, b))))

spec = BlockCombineSpec(R, R, (np.eye(2), np.zeros((2, 2))))
c1 = compute_mirs(block_combine(spec), 10).values
lo, hi = sandwich_bounds(b, b, spec.K0)
print(" n  lower   c_n     upper")
for n in range(10):
    print(f"{n + 1:2d}  {lo[n]:.3f}  {c1[n]:.3f}  {hi[n]:.3f}")
