"""
Coupling sequence of a block-triangular set
===========================================

Splitting each matrix as [[B, S], [0, C]] with contractive diagonal blocks,
the norms alpha_n of the accumulated coupling form a subadditive sequence
that controls the whole product norm up to an additive constant.
"""

from mirs import coupling_sequence, pj_matrices, pj_triangular_split
from mirs.diophantine import build_theta

pj = pj_matrices(1 / 3, build_theta(1.0, 20).theta)
cr = coupling_sequence(pj_triangular_split(pj), 20)
print(" n  alpha_n  hat a_n")
for n, (al, ha) in enumerate(zip(cr.alpha_seq, cr.hat_seq), 1):
    print(f"{n:2d}  {al:.4f}   {ha:.4f}")
print("subadditive:", cr.subadditive_ok, " sandwich:", cr.sandwich_ok)
