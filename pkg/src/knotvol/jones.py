"""Kauffman bracket state sum and the Jones polynomial.

Smoothing convention for ``X(a,b,c,d)``: the A-smoothing joins ``a-b`` and
``c-d``, the B-smoothing joins ``a-d`` and ``b-c``.  With the standard table PD
code of 3_1 this gives ``J = -t^-4 + t^-3 + t^-1``.
"""

from __future__ import annotations

import numpy as np

from .errors import TooManyCrossings
from .notation import KnotDiagram
from .polyring import IntLaurentPoly

__all__ = [
    "QuarterLaurentPoly",
    "kauffman_bracket",
    "writhe",
    "jones_poly",
    "MAX_CROSSINGS",
]

MAX_CROSSINGS = 24
_CHUNK_BITS = 16

# partner slot of each of the four positions under the two smoothings
_A_PARTNER = (1, 0, 3, 2)
_B_PARTNER = (3, 2, 1, 0)


class QuarterLaurentPoly(IntLaurentPoly):
    """Integer Laurent polynomial in ``t**(1/4)``: exponent ``q`` stands for ``t**(q/4)``."""

    __slots__ = ()

    def _rebuild(self, coeffs):
        return QuarterLaurentPoly(coeffs)

    def is_integral(self) -> bool:
        return all(e % 4 == 0 for e in self._c)

    def to_laurent(self) -> IntLaurentPoly:
        """The same polynomial as an ordinary Laurent polynomial in ``t``."""
        if not self.is_integral():
            raise ValueError(f"{self!r} has fractional powers of t")
        return IntLaurentPoly({e // 4: c for e, c in self._c.items()})

    def evaluate_t(self, t: complex) -> complex:
        """Value at ``t`` (principal branch of the fourth root)."""
        root = complex(t) ** 0.25
        return sum(c * root**e for e, c in self._c.items())

    def __repr__(self):
        if not self._c:
            return "QuarterLaurentPoly(0)"
        terms = [f"{c}*t^({e}/4)" for e, c in self.items()]
        return f"QuarterLaurentPoly({' + '.join(terms)})"


def _neighbor_tables(d: KnotDiagram):
    """For each label, its two (crossing, slot) occurrences as arrays."""
    n2 = d.arc_count
    occ = [[] for _ in range(n2)]
    for k, cr in enumerate(d.crossings):
        for p, x in enumerate(cr):
            occ[x - 1].append((k, p))
    xa = np.empty((2, n2), dtype=np.int64)  # neighbor label under A smoothing
    xb = np.empty((2, n2), dtype=np.int64)
    ks = np.empty((2, n2), dtype=np.int64)
    for x, pair in enumerate(occ):
        for side, (k, p) in enumerate(pair):
            ks[side, x] = k
            xa[side, x] = d.crossings[k][_A_PARTNER[p]] - 1
            xb[side, x] = d.crossings[k][_B_PARTNER[p]] - 1
    return ks, xa, xb


def _loop_counts(d: KnotDiagram, states: np.ndarray, tables) -> np.ndarray:
    """Number of loops of each state (bit k set = B-smoothing at crossing k)."""
    ks, xa, xb = tables
    n = len(d.crossings)
    bits = ((states[:, None] >> np.arange(n, dtype=np.int64)[None, :]) & 1).astype(bool)
    nb0 = np.where(bits[:, ks[0]], xb[0][None, :], xa[0][None, :])
    nb1 = np.where(bits[:, ks[1]], xb[1][None, :], xa[1][None, :])
    lab = np.broadcast_to(np.arange(d.arc_count), nb0.shape).copy()
    rows = np.arange(len(states))[:, None]
    while True:
        new = np.minimum(lab, np.minimum(lab[rows, nb0], lab[rows, nb1]))
        new = new[rows, new]  # pointer jumping
        if np.array_equal(new, lab):
            break
        lab = new
    return (lab == np.arange(d.arc_count)[None, :]).sum(axis=1)


def kauffman_bracket(d: KnotDiagram) -> IntLaurentPoly:
    """Kauffman bracket in the variable ``A`` (returned as a Laurent polynomial in A).

    Sum over all ``2**n`` states of ``A**(#A - #B) * (-A**2 - A**-2)**(loops - 1)``.
    """
    n = len(d.crossings)
    if n > MAX_CROSSINGS:
        raise TooManyCrossings(f"{n} crossings exceeds the state-sum bound {MAX_CROSSINGS}")
    if n == 0:
        return IntLaurentPoly({0: 1})
    tables = _neighbor_tables(d)
    hist = {}  # (A-exponent, loops) -> count
    total = 1 << n
    chunk = 1 << min(n, _CHUNK_BITS)
    for start in range(0, total, chunk):
        states = np.arange(start, start + chunk, dtype=np.int64)
        loops = _loop_counts(d, states, tables)
        nb = np.zeros(len(states), dtype=np.int64)
        for k in range(n):
            nb += (states >> k) & 1
        a_exp = n - 2 * nb
        key = (a_exp + n) * (2 * n + 2) + loops
        vals, counts = np.unique(key, return_counts=True)
        for v, c in zip(vals.tolist(), counts.tolist()):
            e, lp = divmod(v, 2 * n + 2)
            hist[(e - n, lp)] = hist.get((e - n, lp), 0) + c
    loop_factor = IntLaurentPoly({2: -1, -2: -1})
    out = IntLaurentPoly()
    powers = {1: IntLaurentPoly({0: 1})}
    for (e, lp), c in sorted(hist.items()):
        if lp not in powers:
            powers[lp] = loop_factor ** (lp - 1)
        out = out + powers[lp].shift(e).scale(c)
    return out


def writhe(d: KnotDiagram) -> int:
    return sum(d.signs())


def jones_poly(d: KnotDiagram) -> QuarterLaurentPoly:
    """Jones polynomial: ``(-A**3)**(-writhe) * <D>`` with ``A = t**(-1/4)``."""
    br = kauffman_bracket(d)
    w = writhe(d)
    normalized = br.shift(-3 * w).scale(-1 if w % 2 else 1)
    return QuarterLaurentPoly({-e: c for e, c in normalized.items()})
