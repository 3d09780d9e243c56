"""Alexander polynomial, determinant and cyclic branched cover orders.

The knot group is read off the diagram as a Wirtinger presentation, Fox
derivatives of the relators are abelianized (every generator goes to ``t``) and
the Alexander polynomial is a codimension-one minor of that matrix, computed
exactly by fraction-free elimination.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import DegenerateDiagram
from .notation import KnotDiagram
from .polyring import IntLaurentPoly, poly_div_exact, resultant_with_cyclotomic_family

__all__ = [
    "WirtingerPresentation",
    "AlexanderResult",
    "SilverWilliams",
    "wirtinger",
    "fox_derivative_abelian",
    "alexander_matrix",
    "bareiss_det",
    "canonicalize",
    "alexander_poly",
    "cyclic_cover_order",
    "silver_williams_sequence",
    "INFINITE",
]

INFINITE = math.inf

Word = tuple  # tuple of (generator, +1/-1)


@dataclass(frozen=True)
class WirtingerPresentation:
    """Knot group presentation with one generator per PD edge label.

    ``relators[k]`` is the conjugation relator at crossing ``k``; it reads
    ``x_c x_i x_a^-1 x_i^-1`` at a positive crossing and ``x_c x_i^-1 x_a^-1 x_i``
    at a negative one, where ``x_i`` is the incoming over-strand edge.  The two
    edges of each over-strand are the same Wirtinger arc; ``identifications``
    lists those ``(incoming, outgoing)`` edge pairs, one per crossing.
    """

    generator_count: int
    relators: tuple
    identifications: tuple

    def arc_of(self) -> dict[int, int]:
        """Map edge label -> representative label of its Wirtinger arc."""
        parent = {g: g for g in range(1, self.generator_count + 1)}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for i, o in self.identifications:
            ri, ro = find(i), find(o)
            if ri != ro:
                parent[max(ri, ro)] = min(ri, ro)
        return {g: find(g) for g in parent}

    def collapsed(self) -> tuple[list[int], list[Word]]:
        """Arc generators and relators rewritten in them (Tietze elimination of the identifications)."""
        arc = self.arc_of()
        gens = sorted(set(arc.values()))
        rels = [tuple((arc[g], e) for g, e in r) for r in self.relators]
        return gens, rels


def wirtinger(d: KnotDiagram) -> WirtingerPresentation:
    relators, idents = [], []
    for k, (a, b, c, _) in enumerate(d.crossings):
        over_in, over_out = d.over_in_out(k)
        if d.sign(k) > 0:
            relators.append(((c, 1), (over_in, 1), (a, -1), (over_in, -1)))
        else:
            relators.append(((c, 1), (over_in, -1), (a, -1), (over_in, 1)))
        idents.append((over_in, over_out))
    return WirtingerPresentation(d.arc_count, tuple(relators), tuple(idents))


def fox_derivative_abelian(word: Word, gen: int) -> IntLaurentPoly:
    """Fox derivative of ``word`` by ``gen`` with every generator sent to ``t``."""
    out = {}
    exp = 0
    for g, e in word:
        if g == gen:
            if e > 0:
                out[exp] = out.get(exp, 0) + 1
            else:
                out[exp - 1] = out.get(exp - 1, 0) - 1
        exp += e
    return IntLaurentPoly(out)


def alexander_matrix(gens: Sequence[int], relators: Sequence[Word]) -> list[list[IntLaurentPoly]]:
    return [[fox_derivative_abelian(r, g) for g in gens] for r in relators]


def bareiss_det(m: list[list[IntLaurentPoly]]) -> IntLaurentPoly:
    """Exact determinant over Z[t, 1/t] by fraction-free Bareiss elimination."""
    n = len(m)
    if n == 0:
        return IntLaurentPoly({0: 1})
    a = [list(row) for row in m]
    sign = 1
    prev = IntLaurentPoly({0: 1})
    for k in range(n - 1):
        if a[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not a[i][k].is_zero()), None)
            if swap is None:
                return IntLaurentPoly()
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        piv = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            for j in range(k + 1, n):
                num = piv * a[i][j] - aik * a[k][j]
                a[i][j] = poly_div_exact(num, prev) if not num.is_zero() else num
            a[i][k] = IntLaurentPoly()
        prev = piv
    det = a[n - 1][n - 1]
    return -det if sign < 0 else det


def canonicalize(p: IntLaurentPoly) -> IntLaurentPoly:
    """Centre exponents symmetrically about 0 and make the value at 1 positive."""
    if p.is_zero():
        raise DegenerateDiagram("zero Alexander polynomial")
    if p.span % 2:
        raise DegenerateDiagram(f"odd degree span in {p!r}")
    q = p.shift(-(p.valuation + p.span // 2))
    return -q if q(1) < 0 else q


@dataclass(frozen=True)
class AlexanderResult:
    delta: IntLaurentPoly
    determinant: int


def alexander_poly(d: KnotDiagram) -> AlexanderResult:
    """Canonical Alexander polynomial and determinant of a knot diagram.

    Deletes the column of the arc through edge 1 and the last crossing's
    relator, then normalizes the minor to ``delta(1/t) == delta(t)``,
    ``delta(1) == 1``.

    >>> from knotvol.notation import parse_pd
    >>> alexander_poly(parse_pd("X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)")).determinant
    5
    """
    if d.is_unknot_diagram:
        return AlexanderResult(IntLaurentPoly({0: 1}), 1)
    gens, rels = wirtinger(d).collapsed()
    m = alexander_matrix(gens[1:], rels[:-1])
    raw = bareiss_det(m)
    if raw.is_zero():
        raise DegenerateDiagram("Alexander minor vanishes")
    delta = canonicalize(raw)
    if delta(1) != 1:
        raise DegenerateDiagram(f"Alexander polynomial {delta!r} has |delta(1)| != 1")
    return AlexanderResult(delta, abs(delta(-1)))


def cyclic_cover_order(delta: IntLaurentPoly, n: int):
    """Order of H_1 of the n-fold cyclic branched cover, or ``INFINITE``.

    The order is ``|prod_{j=1}^{n-1} delta(zeta_n^j)|``, an exact integer; a
    zero product means the cover has positive first Betti number.
    """
    value = resultant_with_cyclotomic_family(delta, n)
    return value if value else INFINITE


@dataclass(frozen=True)
class SilverWilliams:
    """``(n, log(a_n) / n)`` for the finite cover orders ``a_n``; ``skipped`` lists infinite ones."""

    values: tuple
    skipped: tuple

    def __iter__(self):
        return iter(self.values)

    def value_at(self, n: int) -> float:
        return dict(self.values)[n]


def silver_williams_sequence(delta: IntLaurentPoly, n_max: int) -> SilverWilliams:
    """Normalized log torsion of cyclic covers, ``n = 2..n_max``.

    The values tend to the log Mahler measure of ``delta``.
    """
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    values, skipped = [], []
    for n in range(2, n_max + 1):
        a = cyclic_cover_order(delta, n)
        if a is INFINITE:
            skipped.append(n)
        else:
            values.append((n, math.log(a) / n))
    return SilverWilliams(tuple(values), tuple(skipped))
