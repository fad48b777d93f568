"""
Angles that are badly approximable to a prescribed order
========================================================

Partial quotients a_n = ceil(q_{n-1}^(gamma - 1)) make n^gamma |sin n theta|
bounded below, and of order one along the denominators q_n.
"""

from mirs import badness_check, build_theta
from mirs.diophantine import denominator_sup

for gamma, N in ((1.0, 100_000), (2.0, 10_000)):
    cf = build_theta(gamma, 8)
    print(f"gamma = {gamma:g}")
    print("  quotients:", cf.quotients)
    print("  vartheta  =", cf.vartheta[:50], "...")
    rep = badness_check(cf, N)
    print(f"  min over n <= {N} of n^gamma |sin n theta| = {rep.inf_value:.5f} at n = {rep.argmin}")
    print(f"  max over stored q of q^gamma |sin q theta| = {denominator_sup(cf):.5f}")

# exact modular reduction keeps sin(n theta) accurate for enormous n
golden = build_theta(1.0, 40)
for n in (10 ** 6, 10 ** 12, 10 ** 18):
    s, c, _ = golden.sincos(n)
    print(f"sin({n} theta) = {s:+.15f}")
