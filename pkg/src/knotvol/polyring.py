"""Laurent polynomials in one variable over the integers and the complex numbers.

Polynomials are stored sparsely as ``{exponent: coefficient}`` maps with no zero
entries.  Integer polynomials are exact (Python ints); complex polynomials carry
a pruning tolerance below which coefficients are treated as zero.

Besides the ring operations this module provides the numerical machinery used
by the invariants: determinants of polynomial matrices by evaluation and
interpolation on the unit circle, Aberth-Ehrlich root finding, and the exact
integer resultant against ``1 + t + ... + t**(n-1)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from numbers import Integral
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import NotDivisible, NotSquare, RootFindingError, ZeroBase, ZeroPolynomial

__all__ = [
    "IntLaurentPoly",
    "CxLaurentPoly",
    "PolyMatrix",
    "RootResult",
    "poly_arith",
    "poly_eval",
    "poly_div_exact",
    "poly_det",
    "poly_roots",
    "integer_resultant",
    "resultant_with_cyclotomic_family",
]

DIVISION_TOLERANCE = 1e-9
ROOT_RESIDUAL_TOLERANCE = 1e-9
ABERTH_MAX_ITER = 200
_GOLDEN_ANGLE = math.pi * (3.0 - math.sqrt(5.0))


class _LaurentPoly:
    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[int, object] | None = None):
        raise NotImplementedError

    # -- construction helpers -------------------------------------------------
    @classmethod
    def from_list(cls, coeffs: Iterable, low: int = 0, **kw):
        """Build ``sum(coeffs[i] * t**(low + i))``; coefficients listed low to high."""
        return cls({low + i: c for i, c in enumerate(coeffs)}, **kw)

    @classmethod
    def monomial(cls, coeff, exponent: int = 0, **kw):
        return cls({exponent: coeff}, **kw)

    # -- inspection -----------------------------------------------------------
    def items(self):
        return sorted(self._c.items())

    def coeff(self, e: int):
        return self._c.get(e, 0)

    def is_zero(self) -> bool:
        return not self._c

    @property
    def degree(self) -> int:
        """Highest exponent.  Raises ZeroPolynomial on the zero polynomial."""
        if not self._c:
            raise ZeroPolynomial("zero polynomial has no degree")
        return max(self._c)

    @property
    def valuation(self) -> int:
        if not self._c:
            raise ZeroPolynomial("zero polynomial has no valuation")
        return min(self._c)

    @property
    def span(self) -> int:
        return self.degree - self.valuation if self._c else 0

    def to_list(self) -> list:
        """Coefficients of ``p / t**valuation``, low to high."""
        if not self._c:
            return []
        lo = self.valuation
        return [self._c.get(e, 0) for e in range(lo, self.degree + 1)]

    def norm(self) -> float:
        return math.sqrt(math.fsum(abs(c) ** 2 for c in self._c.values()))

    def max_abs(self) -> float:
        return max((abs(c) for c in self._c.values()), default=0.0)

    # -- unit manipulations ---------------------------------------------------
    def shift(self, k: int):
        """Multiply by ``t**k``."""
        return self._rebuild({e + k: c for e, c in self._c.items()})

    def substitute_inverse(self):
        """``p(1/t)``."""
        return self._rebuild({-e: c for e, c in self._c.items()})

    def scale(self, s):
        return self._rebuild({e: c * s for e, c in self._c.items()})

    # -- arithmetic -----------------------------------------------------------
    def __neg__(self):
        return self._rebuild({e: -c for e, c in self._c.items()})

    def __add__(self, other):
        return poly_arith(self, other, "add")

    def __radd__(self, other):
        return poly_arith(other, self, "add")

    def __sub__(self, other):
        return poly_arith(self, other, "sub")

    def __rsub__(self, other):
        return poly_arith(other, self, "sub")

    def __mul__(self, other):
        return poly_arith(self, other, "mul")

    def __rmul__(self, other):
        return poly_arith(other, self, "mul")

    def __pow__(self, n: int):
        if n < 0:
            if len(self._c) == 1:
                (e, c), = self._c.items()
                if c in (1, -1):
                    return self._rebuild({e * n: c ** (-n)})
            raise ValueError("negative powers only exist for units")
        result = self._rebuild({0: 1})
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __call__(self, z):
        return poly_eval(self, z)

    def __eq__(self, other):
        if isinstance(other, (int, float, complex)):
            other = self._rebuild({0: other})
        if not isinstance(other, _LaurentPoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    def __bool__(self):
        return bool(self._c)

    def __repr__(self):
        if not self._c:
            return f"{type(self).__name__}(0)"
        terms = []
        for e, c in self.items():
            terms.append(f"{c}" if e == 0 else f"{c}*t^{e}")
        return f"{type(self).__name__}({' + '.join(terms)})"

    def _rebuild(self, coeffs):
        raise NotImplementedError


class IntLaurentPoly(_LaurentPoly):
    """Exact Laurent polynomial with integer coefficients.

    >>> t = IntLaurentPoly.monomial(1, 1)
    >>> (t - 1) * (t + 1) == IntLaurentPoly({2: 1, 0: -1})
    True
    """

    __slots__ = ()

    def __init__(self, coeffs: Mapping[int, int] | None = None):
        c = {}
        for e, v in (coeffs or {}).items():
            if not isinstance(v, Integral):
                raise TypeError(f"integer coefficient expected, got {v!r}")
            if v:
                c[int(e)] = int(v)
        self._c = c

    def _rebuild(self, coeffs):
        return IntLaurentPoly(coeffs)

    def to_complex(self, prune_tolerance: float = 0.0) -> "CxLaurentPoly":
        return CxLaurentPoly(self._c, prune_tolerance=prune_tolerance)

    def content(self) -> int:
        return math.gcd(*self._c.values()) if self._c else 0


class CxLaurentPoly(_LaurentPoly):
    """Laurent polynomial with complex double coefficients.

    Coefficients whose modulus does not exceed ``prune_tolerance`` are dropped
    on construction, so every stored coefficient is numerically nonzero.
    """

    __slots__ = ("prune_tolerance",)

    def __init__(self, coeffs: Mapping[int, complex] | None = None, prune_tolerance: float = 0.0):
        if prune_tolerance < 0:
            raise ValueError("prune_tolerance must be nonnegative")
        self.prune_tolerance = float(prune_tolerance)
        c = {}
        for e, v in (coeffs or {}).items():
            v = complex(v)
            if abs(v) > self.prune_tolerance:
                c[int(e)] = v
        self._c = c

    def _rebuild(self, coeffs):
        return CxLaurentPoly(coeffs, prune_tolerance=self.prune_tolerance)

    def with_tolerance(self, tol: float) -> "CxLaurentPoly":
        return CxLaurentPoly(self._c, prune_tolerance=tol)

    def to_complex(self, prune_tolerance: float | None = None) -> "CxLaurentPoly":
        if prune_tolerance is None:
            return self
        return self.with_tolerance(prune_tolerance)

    def allclose(self, other: "_LaurentPoly", rtol: float = 1e-9, atol: float = 0.0) -> bool:
        """Coefficientwise closeness relative to the larger coefficient norm."""
        exps = set(self._c) | set(other._c)
        scale = max(self.max_abs(), other.max_abs(), 1e-300)
        return all(abs(self.coeff(e) - other.coeff(e)) <= atol + rtol * scale for e in exps)


def _as_poly(x, like):
    if isinstance(x, _LaurentPoly):
        return x
    if isinstance(x, Integral) and isinstance(like, IntLaurentPoly):
        return IntLaurentPoly({0: x})
    return CxLaurentPoly({0: x}, prune_tolerance=getattr(like, "prune_tolerance", 0.0))


def poly_arith(a, b, op: str):
    """Add, subtract or multiply two Laurent polynomials.

    Integer operands give an exact integer result.  If either operand is
    complex the result is complex and inherits the larger pruning tolerance.
    Plain numbers are promoted to constant polynomials.
    """
    if not isinstance(a, _LaurentPoly):
        a = _as_poly(a, b)
    if not isinstance(b, _LaurentPoly):
        b = _as_poly(b, a)
    if isinstance(a, IntLaurentPoly) and isinstance(b, IntLaurentPoly):
        build = IntLaurentPoly
    else:
        tol = max(getattr(a, "prune_tolerance", 0.0), getattr(b, "prune_tolerance", 0.0))

        def build(c):
            return CxLaurentPoly(c, prune_tolerance=tol)

    if op in ("add", "sub"):
        out = dict(a._c)
        sign = 1 if op == "add" else -1
        for e, c in b._c.items():
            out[e] = out.get(e, 0) + sign * c
        return build(out)
    if op == "mul":
        out = {}
        for e1, c1 in a._c.items():
            for e2, c2 in b._c.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return build(out)
    raise ValueError(f"unknown operation {op!r}")


def poly_eval(p: _LaurentPoly, z):
    """Evaluate ``p`` at ``z`` by Horner's rule on ``p / t**valuation``.

    Integer polynomials evaluated at integers stay exact (an ``int``, or a
    ``Fraction`` when negative powers of ``|z| > 1`` are involved); otherwise
    the result is a Python complex.
    """
    if p.is_zero():
        return 0
    lo = p.valuation
    if z == 0:
        if lo < 0:
            raise ZeroBase("evaluation at 0 with negative exponents")
        return p.coeff(0)
    acc = 0
    for c in reversed(p.to_list()):
        acc = acc * z + c
    if isinstance(p, IntLaurentPoly) and isinstance(z, Integral):
        if lo >= 0:
            return acc * z**lo
        from fractions import Fraction

        q = Fraction(acc, z ** (-lo))
        return int(q) if q.denominator == 1 else q
    return complex(acc) * complex(z) ** lo


def _poly_divmod_ordinary(a: list, b: list, exact_int: bool):
    """Long division of ordinary polynomials given low-to-high coefficient lists."""
    a = list(a)
    db = len(b) - 1
    lead = b[-1]
    if len(a) - 1 < db:
        return [], a
    q = [0] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i]
        if exact_int:
            if c % lead:
                raise NotDivisible("leading coefficient not divisible")
            f = c // lead
        else:
            f = c / lead
        q[i - db] = f
        if f:
            for j in range(db + 1):
                a[i - db + j] -= f * b[j]
        a[i] = 0
    return q, a[:db]


def poly_div_exact(a: _LaurentPoly, b: _LaurentPoly, tolerance: float = DIVISION_TOLERANCE):
    """Exact quotient ``a / b`` in the Laurent ring.

    For integer inputs the division must be exact.  For complex inputs the
    quotient is the least squares solution of ``b q = a`` and the remainder
    norm must be at most ``tolerance * norm(a)``; the quotient inherits the
    dividend's pruning tolerance.
    """
    if b.is_zero():
        raise NotDivisible("division by the zero polynomial")
    if a.is_zero():
        return a
    exact = isinstance(a, IntLaurentPoly) and isinstance(b, IntLaurentPoly)
    if exact:
        q, r = _poly_divmod_ordinary(a.to_list(), b.to_list(), True)
        if any(r) or not q:
            raise NotDivisible(f"{b!r} does not divide {a!r}")
        return IntLaurentPoly.from_list(q, a.valuation - b.valuation)
    al = [complex(c) for c in a.to_list()]
    bl = [complex(c) for c in b.to_list()]
    if len(al) < len(bl):
        raise NotDivisible("divisor has larger degree span than dividend")
    # least squares over the convolution matrix: top-down long division
    # accumulates the dividend's rounding error, badly so for (t - 1)**2
    nq = len(al) - len(bl) + 1
    conv = np.zeros((len(al), nq), dtype=complex)
    for j in range(nq):
        conv[j : j + len(bl), j] = bl
    q = np.linalg.lstsq(conv, np.array(al), rcond=None)[0]
    rnorm = float(np.linalg.norm(np.array(al) - conv @ q))
    if rnorm > tolerance * a.norm():
        raise NotDivisible(f"remainder norm {rnorm:.3e} exceeds {tolerance:g} * dividend norm")
    tol = getattr(a, "prune_tolerance", 0.0)
    return CxLaurentPoly.from_list([complex(c) for c in q], a.valuation - b.valuation, prune_tolerance=tol)


@dataclass(frozen=True)
class PolyMatrix:
    """Dense matrix of Laurent polynomials (row-major tuple of tuples)."""

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError("entry grid does not match rows x cols")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[_LaurentPoly]]) -> "PolyMatrix":
        entries = tuple(tuple(r) for r in rows)
        return cls(len(entries), len(entries[0]) if entries else 0, entries)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def delete(self, rows: Iterable[int] = (), cols: Iterable[int] = ()) -> "PolyMatrix":
        rs, cs = set(rows), set(cols)
        return PolyMatrix.from_rows(
            [[e for j, e in enumerate(r) if j not in cs] for i, r in enumerate(self.entries) if i not in rs]
        )


def _next_pow2(n: int) -> int:
    return 1 << max(0, (n - 1).bit_length())


def poly_det(m: PolyMatrix, prune_tolerance: float | None = None) -> CxLaurentPoly:
    """Determinant of a square polynomial matrix by evaluation and interpolation.

    Each row is shifted to start at exponent 0, which bounds the degree of the
    shifted determinant by the sum ``B`` of the row degree spans.  All entries are
    evaluated at ``N`` roots of unity (``N`` the next power of two >= B + 1),
    each numeric determinant is taken by LU with partial pivoting, and the
    coefficients come back through one FFT.

    Coefficients at or below ``prune_tolerance`` are dropped.  The default is
    ``1e-8`` times the largest input coefficient modulus; in either case the
    threshold is never below the FFT rounding floor ``1e-12 * max |coeff|``.
    """
    if m.rows != m.cols:
        raise NotSquare(f"{m.rows}x{m.cols} matrix")
    n = m.rows
    if n == 0:
        return CxLaurentPoly({0: 1.0})
    input_scale = max((e.max_abs() for row in m.entries for e in row), default=0.0)
    if prune_tolerance is None:
        prune_tolerance = 1e-8 * input_scale
    lows, bound = [], 0
    for row in m.entries:
        nz = [e for e in row if not e.is_zero()]
        if not nz:
            return CxLaurentPoly({}, prune_tolerance=prune_tolerance)
        lo = min(e.valuation for e in nz)
        hi = max(e.degree for e in nz)
        lows.append(lo)
        bound += hi - lo
    N = _next_pow2(bound + 1)
    nodes = np.exp(2j * np.pi * np.arange(N) / N)
    vals = np.zeros((N, n, n), dtype=complex)
    for i, row in enumerate(m.entries):
        lo = lows[i]
        for j, e in enumerate(row):
            if e.is_zero():
                continue
            # ordinary polynomial in t after removing t**lo, highest first for polyval
            coeffs = [complex(c) for c in e.to_list()][::-1]
            vals[:, i, j] = np.polyval(coeffs, nodes) * nodes ** (e.valuation - lo)
    dets = np.linalg.det(vals)
    coeffs = np.fft.fft(dets) / N
    floor = 1e-12 * float(np.max(np.abs(coeffs))) if N else 0.0
    tol = max(prune_tolerance, floor)
    shift = sum(lows)
    out = {shift + k: complex(coeffs[k]) for k in range(bound + 1)}
    return CxLaurentPoly(out, prune_tolerance=tol)


@dataclass(frozen=True)
class RootResult:
    """Factorization data ``p(t) = c * t**k * prod(t - r_j)``."""

    roots: np.ndarray
    leading: complex
    low_exponent: int

    def __iter__(self):
        return iter((self.roots, self.leading, self.low_exponent))


def _residual_bound(abs_coeffs_sum: float, r: np.ndarray, deg: int) -> np.ndarray:
    return ROOT_RESIDUAL_TOLERANCE * abs_coeffs_sum * np.maximum(np.abs(r), 1.0) ** deg


def _aberth(coeffs_high: np.ndarray, rotation: float) -> np.ndarray:
    n = len(coeffs_high) - 1
    dcoeffs = np.polyder(coeffs_high)
    radius = abs(coeffs_high[-1] / coeffs_high[0]) ** (1.0 / n)
    z = radius * np.exp(1j * (rotation + _GOLDEN_ANGLE * np.arange(n)))
    for _ in range(ABERTH_MAX_ITER):
        pv = np.polyval(coeffs_high, z)
        dv = np.polyval(dcoeffs, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = pv / dv
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            inv = 1.0 / diff
            np.fill_diagonal(inv, 0.0)
            step = ratio / (1.0 - ratio * inv.sum(axis=1))
        bad = ~np.isfinite(step)
        if bad.any():
            step[bad] = 1e-7 * (1.0 + np.abs(z[bad]))
        z = z - step
        if np.all(np.abs(step) <= 4 * np.finfo(float).eps * np.maximum(np.abs(z), 1.0)):
            break
    return z


def _newton_polish(coeffs_high: np.ndarray, z: np.ndarray, steps: int = 3) -> np.ndarray:
    dcoeffs = np.polyder(coeffs_high)
    for _ in range(steps):
        dv = np.polyval(dcoeffs, z)
        ok = dv != 0
        z = z.copy()
        z[ok] -= np.polyval(coeffs_high, z[ok]) / dv[ok]
    return z


def _refine_clusters(coeffs_high: np.ndarray, z: np.ndarray, rel: float = 1e-4) -> np.ndarray:
    """Collapse tight clusters that are numerically multiple roots.

    Aberth approximations of an m-fold root scatter by about ``eps**(1/m)``,
    which matters when the root sits on the unit circle.  The simple root
    ``c`` of the (m-1)-th derivative near the cluster is well conditioned; if
    the lower derivatives vanish at ``c`` as well, every member is set to ``c``.
    """
    z = z.copy()
    used = np.zeros(len(z), dtype=bool)
    for i in np.argsort(z.real):
        if used[i]:
            continue
        near = np.flatnonzero(~used & (np.abs(z - z[i]) <= rel * max(abs(z[i]), 1.0)))
        used[near] = True
        m = len(near)
        if m < 2:
            continue
        derivs = [coeffs_high]
        for _ in range(m):
            derivs.append(np.polyder(derivs[-1]))
        c = z[near].mean()
        for _ in range(8):
            dv = np.polyval(derivs[m], c)
            if dv == 0:
                break
            c = c - np.polyval(derivs[m - 1], c) / dv
        if abs(c - z[near].mean()) > rel * max(abs(c), 1.0):
            continue
        # lower derivatives must vanish up to the Horner rounding bound
        eps = np.finfo(float).eps
        if all(
            abs(np.polyval(dj, c)) <= 64 * eps * len(dj) * np.polyval(np.abs(dj), abs(c))
            for dj in derivs[: m - 1]
        ):
            z[near] = c
    return z


def poly_roots(p: _LaurentPoly) -> RootResult:
    """Roots with multiplicity of ``p / t**valuation`` by Aberth-Ehrlich iteration.

    Returns ``RootResult(roots, leading, low_exponent)``.  Every root ``r``
    satisfies ``|p(r)| <= 1e-9 * sum|coeff| * max(|r|, 1)**deg``, otherwise
    ``RootFindingError`` is raised after a few restarts.
    """
    if p.is_zero():
        raise ZeroPolynomial("roots of the zero polynomial")
    coeffs_low = [complex(c) for c in p.to_list()]
    leading, k = coeffs_low[-1], p.valuation
    n = len(coeffs_low) - 1
    if n == 0:
        return RootResult(np.zeros(0, dtype=complex), leading, k)
    high = np.array(coeffs_low[::-1], dtype=complex)
    abs_sum = float(np.sum(np.abs(high)))
    if n == 1:
        return RootResult(np.array([-high[1] / high[0]]), leading, k)
    for attempt in range(4):
        z = _aberth(high, rotation=0.25 + 0.7 * attempt)
        ok = np.abs(np.polyval(high, z)) <= _residual_bound(abs_sum, z, n)
        if not ok.all():
            z = _newton_polish(high, z)
            ok = np.abs(np.polyval(high, z)) <= _residual_bound(abs_sum, z, n)
        if ok.all() and np.all(np.isfinite(z)):
            z = _refine_clusters(high, z)
            order = np.lexsort((z.imag, z.real))
            return RootResult(z[order], leading, k)
    raise RootFindingError(f"Aberth iteration failed to certify roots of {p!r}")


# --------------------------------------------------------------------------
# exact integer resultants


def _strip(a: list) -> list:
    while a and a[-1] == 0:
        a.pop()
    return a


def _prem(a: list, b: list) -> list:
    """Pseudo-remainder of low-to-high integer lists: lc(b)**(da-db+1) * a mod b.

    Only a window of ``deg b + 1`` coefficients is ever rescaled; untouched
    lower coefficients pick up the accumulated power of lc(b) as they enter.
    """
    db = len(b) - 1
    lc = b[-1]
    top = len(a) - 1
    if top < db:
        return list(a)
    window = list(a[top - db : top + 1])
    power = 1
    for i in range(top, db - 1, -1):
        c = window[-1]
        window = [lc * w - c * bj for w, bj in zip(window, b)]
        window.pop()
        power *= lc
        nxt = i - db - 1
        window.insert(0, a[nxt] * power if nxt >= 0 else None)
    return _strip(window[1:])


def integer_resultant(a: Sequence[int], b: Sequence[int]) -> int:
    """Resultant of two integer polynomials (coefficients low to high).

    Subresultant pseudo-remainder sequence over the integers; every division
    in the sequence is exact, so no rational arithmetic is needed.
    """
    A, B = _strip(list(a)), _strip(list(b))
    if not A or not B:
        return 0
    da, db = len(A) - 1, len(B) - 1
    if da == 0:
        return A[0] ** db
    if db == 0:
        return B[0] ** da
    ca, cb = math.gcd(*A), math.gcd(*B)
    A = [x // ca for x in A]
    B = [x // cb for x in B]
    g = h = 1
    s = 1
    t = ca**db * cb**da
    if da < db:
        A, B = B, A
        da, db = db, da
        if da % 2 and db % 2:
            s = -s
    while True:
        delta = da - db
        if da % 2 and db % 2:
            s = -s
        R = _prem(A, B)
        if not R:
            return 0
        A = B
        denom = g * h**delta
        B = [x // denom for x in R]
        da, db = len(A) - 1, len(B) - 1
        g = A[-1]
        if delta == 0:
            h = h
        elif delta == 1:
            h = g
        else:
            h = g**delta // h ** (delta - 1)
        if db == 0:
            lb = B[0]
            if da == 1:
                h = lb
            else:
                h = lb**da // h ** (da - 1)
            return s * t * h


def resultant_with_cyclotomic_family(p: IntLaurentPoly, n: int) -> int:
    """``|prod_{j=1}^{n-1} p(exp(2*pi*i*j/n))|`` as an exact integer.

    Computed as ``|Res(p, 1 + t + ... + t**(n-1))|``; the unit ``t**k`` has
    modulus one at roots of unity and is shifted out first.
    """
    if p.is_zero():
        raise ZeroPolynomial("resultant of the zero polynomial")
    if n < 2:
        raise ValueError("n must be >= 2")
    return abs(integer_resultant(p.to_list(), [1] * n))
