"""
Cyclic covers and the Mahler measure
====================================

The torsion of the n-fold cyclic branched cover grows exponentially, and the
growth rate is the logarithmic Mahler measure of the Alexander polynomial.
"""

import math

from knotvol import alexander_poly, log_mahler, mahler_quadrature, mahler_roots, parse_pd, silver_williams_sequence

d = parse_pd("X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)")
delta = alexander_poly(d).delta

# Jensen's formula against the rectangle rule on the unit circle
print("roots:      ", mahler_roots(delta).measure)
print("quadrature: ", mahler_quadrature(delta, 256).measure)
print("golden**2:  ", (3 + math.sqrt(5)) / 2)

# (1/n) ln a_n approaches ln m(Delta)
limit = log_mahler(delta)
for n, value in silver_williams_sequence(delta, 12):
    print(f"{n:3d}  {value:.12f}  {value - limit:+.2e}")

# the trefoil has roots on the circle: every sixth cover is infinite
trefoil = alexander_poly(parse_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)")).delta
seq = silver_williams_sequence(trefoil, 30)
print("skipped:", seq.skipped)
