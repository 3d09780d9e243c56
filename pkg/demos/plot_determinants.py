"""
Determinants three ways
=======================

The determinant of a knot can be read off the Alexander polynomial at -1,
the Jones polynomial at -1, or the order of the first homology of the
double branched cover.  All three are exact integers.
"""

from knotvol import alexander_poly, cyclic_cover_order, jones_poly, parse_pd

# the figure-eight knot as a planar diagram
d = parse_pd("X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)")

delta = alexander_poly(d).delta
print("Alexander:", delta)
print("Jones:    ", jones_poly(d))

# three routes to the same integer
print("|Delta(-1)| =", abs(delta(-1)))
print("|J(-1)|     =", abs(jones_poly(d).to_laurent()(-1)))
print("|H_1(X_2)|  =", cyclic_cover_order(delta, 2))

# the other cyclic covers grow like m(Delta)**n
for n in (3, 5, 10, 20):
    print(n, cyclic_cover_order(delta, n))
