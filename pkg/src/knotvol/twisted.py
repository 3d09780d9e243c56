"""Twisted Alexander polynomial of a knot for an SL(2, C) representation.

A representation is given on the PD edges of a diagram (both edges of an
over-strand carry the same matrix).  With ``Phi(x) = t * rho(x)`` the Fox
Jacobian of the Wirtinger relators (last relator dropped) becomes a
``2(n-1) x 2n`` block matrix over C[t, 1/t].  Deleting the block column of one
arc ``x_j`` gives a square matrix, and

    T(t) = det(deleted matrix) / det(t * rho(x_j) - I)

is independent of the arc up to a unit ``+-t**k``.  The normalized polynomial
is centred so that its exponents run symmetrically about 0 and signed so
that ``Re T(1) >= 0`` (``Re T(-1) >= 0`` for the knots where ``T(1) = 0``).

``T`` does not change under conjugation of the representation, but the
floating point determinant loses digits when the matrix entries are large.
The representation is therefore first conjugated to its balanced form, the
one with the smallest total squared matrix norm.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Iterable, TextIO

import numpy as np
from scipy.optimize import minimize

from .alexander import wirtinger
from .errors import (
    ArcMismatch,
    DegenerateColumn,
    DivisionFailure,
    EmptyInput,
    MalformedSyntax,
    NotARepresentation,
    NotDivisible,
    NotSL2,
    Reducible,
)
from .mahler import log_mahler
from .notation import KnotDiagram
from .polyring import CxLaurentPoly, PolyMatrix, poly_det, poly_div_exact

__all__ = [
    "Sl2Rep",
    "TwistedResult",
    "load_rep",
    "write_rep",
    "validate_rep",
    "balance_rep",
    "twisted_alexander",
    "twisted_fox_matrix",
    "normalize_twisted",
    "value_at",
    "empirical_constant",
    "DEFAULT_TOLERANCE",
]

DEFAULT_TOLERANCE = 1e-8
DIVISION_TOLERANCE = 1e-9
# |T(+-1)| at most this times the sum of |coefficients| counts as zero
ZERO_VALUE = 1e-9


@dataclass(frozen=True)
class Sl2Rep:
    """2x2 complex matrices indexed by PD edge label."""

    arc_matrices: dict = field(hash=False)
    tolerance: float = DEFAULT_TOLERANCE
    knot: str = ""

    def __getitem__(self, label: int) -> np.ndarray:
        return self.arc_matrices[label]

    def conjugated(self, p: np.ndarray) -> "Sl2Rep":
        """The representation ``x -> P rho(x) P^-1``."""
        p_inv = np.linalg.inv(p)
        return Sl2Rep({k: p @ m @ p_inv for k, m in self.arc_matrices.items()}, self.tolerance, self.knot)


_HEADER = re.compile(r"^knot\s+(\S+)\s+arcs\s+(\d+)\s+tolerance\s+(\S+)\s*$")


def load_rep(stream: TextIO | str, diagram: KnotDiagram) -> Sl2Rep:
    """Read a representation file and validate it against ``diagram``.

    Format::

        knot <name> arcs <count> tolerance <real>
        arc <label> <re11> <im11> <re12> <im12> <re21> <im21> <re22> <im22>
        ...

    ``#`` starts a comment line.
    """
    if isinstance(stream, str):
        import io

        stream = io.StringIO(stream)
    header = None
    mats = {}
    for lineno, raw in enumerate(stream, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if header is None:
            m = _HEADER.match(line)
            if not m:
                raise MalformedSyntax(f"line {lineno}: bad representation header {line!r}")
            try:
                header = (m.group(1), int(m.group(2)), float(m.group(3)))
            except ValueError:
                raise MalformedSyntax(f"line {lineno}: bad tolerance") from None
            continue
        parts = line.split()
        if len(parts) != 10 or parts[0] != "arc":
            raise MalformedSyntax(f"line {lineno}: expected 'arc <label>' and 8 reals")
        try:
            label = int(parts[1])
            x = [float(v) for v in parts[2:]]
        except ValueError:
            raise MalformedSyntax(f"line {lineno}: non-numeric field") from None
        if label in mats:
            raise MalformedSyntax(f"line {lineno}: arc {label} given twice")
        mats[label] = np.array(
            [[complex(x[0], x[1]), complex(x[2], x[3])], [complex(x[4], x[5]), complex(x[6], x[7])]]
        )
    if header is None:
        raise MalformedSyntax("missing representation header")
    name, count, tol = header
    if not tol > 0:
        raise MalformedSyntax("tolerance must be positive")
    if count != diagram.arc_count or set(mats) != set(range(1, diagram.arc_count + 1)):
        raise ArcMismatch(
            f"representation for {name} covers arcs {sorted(mats)[:5]}..., diagram has {diagram.arc_count}"
        )
    rep = Sl2Rep(mats, tol, name)
    validate_rep(rep, diagram)
    return rep


def write_rep(rep: Sl2Rep, stream: TextIO, digits: int = 17) -> None:
    stream.write(f"knot {rep.knot or 'K'} arcs {len(rep.arc_matrices)} tolerance {rep.tolerance:g}\n")
    for label in sorted(rep.arc_matrices):
        m = rep.arc_matrices[label]
        vals = []
        for z in (m[0, 0], m[0, 1], m[1, 0], m[1, 1]):
            vals += [f"{z.real:.{digits}g}", f"{z.imag:.{digits}g}"]
        stream.write(f"arc {label} " + " ".join(vals) + "\n")


def _word_matrix(rep: Sl2Rep, word) -> np.ndarray:
    out = np.eye(2, dtype=complex)
    for g, e in word:
        m = rep[g]
        out = out @ (m if e > 0 else np.linalg.inv(m))
    return out


def validate_rep(rep: Sl2Rep, diagram: KnotDiagram) -> None:
    """Check SL(2) membership, the Wirtinger relations and irreducibility."""
    tol = rep.tolerance
    for label, m in rep.arc_matrices.items():
        if abs(np.linalg.det(m) - 1) > tol:
            raise NotSL2(f"arc {label}: det = {np.linalg.det(m):.6g}")
    pres = wirtinger(diagram)
    eye = np.eye(2)
    for k, r in enumerate(pres.relators):
        dev = np.linalg.norm(_word_matrix(rep, r) - eye)
        if dev > tol:
            raise NotARepresentation(f"crossing {k}: relator deviates from identity by {dev:.3g}")
    for i, o in pres.identifications:
        dev = np.linalg.norm(rep[i] - rep[o])
        if dev > tol:
            raise NotARepresentation(f"over-strand edges {i} and {o} carry different matrices ({dev:.3g})")
    mats = [rep[g] for g in sorted(set(pres.arc_of().values()))]
    for i, m in enumerate(mats):
        for n in mats[i + 1 :]:
            comm = m @ n @ np.linalg.inv(m) @ np.linalg.inv(n)
            if abs(np.trace(comm) - 2) > tol:
                return
    raise Reducible("all commutator traces equal 2")


def _fox_block(word, gen: int, rep: Sl2Rep) -> dict[int, np.ndarray]:
    """Fox derivative of ``word`` by ``gen`` under ``x -> t * rho(x)`` as {exponent: 2x2 matrix}."""
    out: dict[int, np.ndarray] = {}
    prefix = np.eye(2, dtype=complex)
    exp = 0
    for g, e in word:
        m = rep[g]
        if e > 0:
            if g == gen:
                out[exp] = out.get(exp, 0) + prefix
            prefix = prefix @ m
        else:
            m_inv = np.linalg.inv(m)
            prefix = prefix @ m_inv
            if g == gen:
                out[exp - 1] = out.get(exp - 1, 0) - prefix
        exp += e
    return out


def twisted_fox_matrix(diagram: KnotDiagram, rep: Sl2Rep, prune_tolerance: float = 0.0):
    """Block Fox matrix (last relator dropped) and the ordered arc generators."""
    gens, rels = wirtinger(diagram).collapsed()
    rows = []
    for r in rels[:-1]:
        r0 = [[] for _ in range(2)]
        for g in gens:
            blk = _fox_block(r, g, rep)
            for a in range(2):
                for b in range(2):
                    r0[a].append(CxLaurentPoly({e: m[a, b] for e, m in blk.items()}, prune_tolerance))
        rows.extend(r0)
    return PolyMatrix.from_rows(rows), gens


def value_at(p: CxLaurentPoly, t: float) -> complex:
    """``p(t)``, returned as exactly 0 when it is below rounding level."""
    v = complex(p(t))
    scale = math.fsum(abs(c) for _, c in p.items())
    return 0j if abs(v) <= ZERO_VALUE * scale else v


def normalize_twisted(p: CxLaurentPoly) -> CxLaurentPoly:
    """Centre the exponents about 0 and fix the sign so that ``Re p(1) >= 0``.

    When ``p(1)`` vanishes the sign is taken from ``p(-1)`` instead, and when
    that vanishes too from the top coefficient.
    """
    if p.is_zero():
        raise DivisionFailure("twisted polynomial vanishes")
    q = p.shift(-(p.valuation + p.span // 2))
    v = value_at(q, 1) or value_at(q, -1) or complex(q.coeff(q.degree))
    return -q if v.real < 0 else q


@dataclass(frozen=True)
class TwistedResult:
    t_poly: CxLaurentPoly
    eval_minus_one: complex
    eval_plus_one: complex
    log_mahler: float
    deleted_arc: int


def balance_rep(rep: Sl2Rep) -> Sl2Rep:
    """Conjugate ``rep`` to minimize the summed squared Frobenius norms of its matrices.

    Conjugators ``P = [[a, a b], [0, 1/a]]`` reach every conjugate up to a
    unitary factor, which leaves Frobenius norms unchanged, so the search is
    over ``(log a, Re b, Im b)``.  The objective is a sum of ``2 cosh`` of
    hyperbolic displacements, convex along geodesics, so its only critical
    point is the minimum.
    """
    labels = sorted(rep.arc_matrices)
    m = np.array([rep[k] for k in labels], dtype=complex)
    moved = False
    # BFGS on finite differences stalls far from the minimum, so restart
    # from each improved point until the cost stops falling
    for _ in range(20):
        def conj(x, m=m):
            a, b = math.exp(x[0]), x[1] + 1j * x[2]
            p = np.array([[a, a * b], [0, 1 / a]])
            p_inv = np.array([[1 / a, -a * b], [0, a]])
            return p @ m @ p_inv

        def cost(x):
            return math.log(float(np.sum(np.abs(conj(x)) ** 2)))

        # diagonal part first: a**4 balances the off-diagonal masses
        up = float(np.sum(np.abs(m[:, 0, 1]) ** 2))
        low = float(np.sum(np.abs(m[:, 1, 0]) ** 2))
        x0 = np.array([0.25 * math.log(low / up) if up > 0 and low > 0 else 0.0, 0.0, 0.0])
        best = minimize(cost, x0, method="BFGS", options=dict(gtol=1e-10))
        if not best.fun < cost(np.zeros(3)) - 1e-12:
            break
        m = conj(best.x)
        moved = True
    if not moved:
        return rep
    return Sl2Rep(dict(zip(labels, m)), rep.tolerance, rep.knot)


def twisted_alexander(diagram: KnotDiagram, rep: Sl2Rep, deleted_arc: int | None = None) -> TwistedResult:
    """Normalized twisted Alexander polynomial and the quantities derived from it.

    ``deleted_arc`` is any PD edge label; the block column of its Wirtinger
    arc is removed.  By default the first arc whose ``det(t rho - I)`` is not
    numerically zero is used.
    """
    rep = balance_rep(rep)
    fox, gens = twisted_fox_matrix(diagram, rep)
    arc = wirtinger(diagram).arc_of()
    scale = max(float(np.max(np.abs(rep[g]))) for g in gens)

    def denominator(g):
        m = rep[g]
        return CxLaurentPoly({2: np.linalg.det(m), 1: -np.trace(m), 0: 1.0})

    if deleted_arc is None:
        cand = [g for g in gens if denominator(g).norm() > rep.tolerance * max(scale, 1.0) ** 2]
        if not cand:
            raise DegenerateColumn("no arc with nonvanishing det(t rho - I)")
        j = cand[0]
    else:
        j = arc[deleted_arc]
        if denominator(j).norm() <= rep.tolerance:
            raise DegenerateColumn(f"arc {deleted_arc} has vanishing det(t rho - I)")
    idx = gens.index(j)
    sub = fox.delete(cols=(2 * idx, 2 * idx + 1))
    num = poly_det(sub)
    try:
        t_raw = poly_div_exact(num, denominator(j), DIVISION_TOLERANCE)
    except NotDivisible as exc:
        raise DivisionFailure(str(exc)) from None
    t_poly = normalize_twisted(t_raw)
    return TwistedResult(
        t_poly,
        value_at(t_poly, -1),
        value_at(t_poly, 1),
        log_mahler(t_poly),
        j,
    )


def empirical_constant(records: Iterable[tuple[float, float]]) -> float:
    """Mean of ``log_mahler / volume`` over ``(log_mahler, volume)`` pairs."""
    ratios = [lm / v for lm, v in records]
    if not ratios:
        raise EmptyInput("no records")
    return math.fsum(ratios) / len(ratios)
