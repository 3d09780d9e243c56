"""Mahler measure of one-variable Laurent polynomials.

``m(p) = exp(mean of log|p| over the unit circle)``.  By Jensen's formula this
equals ``|c| * prod(max(|r_j|, 1))`` when ``p = c * t**k * prod(t - r_j)``; the root
product is the canonical method and the circle average is kept as an
independent check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ZeroPolynomial
from .polyring import poly_roots

__all__ = ["MahlerValue", "mahler_roots", "mahler_quadrature", "log_mahler"]


@dataclass(frozen=True)
class MahlerValue:
    measure: float
    log_measure: float
    method: str
    root_margin: float  # distance of the closest root to the unit circle


def mahler_roots(p) -> MahlerValue:
    """Mahler measure from the roots (Jensen's formula).

    >>> from knotvol.polyring import IntLaurentPoly
    >>> mahler_roots(IntLaurentPoly({2: 2, 1: -5, 0: 2})).measure
    4.0
    """
    if p.is_zero():
        raise ZeroPolynomial("Mahler measure of the zero polynomial")
    roots, c, _ = poly_roots(p)
    mods = np.abs(roots)
    log_m = math.log(abs(c)) + math.fsum(np.log(mods[mods > 1.0]).tolist())
    margin = float(np.min(np.abs(mods - 1.0))) if len(mods) else math.inf
    return MahlerValue(math.exp(log_m), log_m, "roots", margin)


def mahler_quadrature(p, nodes: int = 4096) -> MahlerValue:
    """Mahler measure by the rectangle rule on ``nodes`` equally spaced angles.

    For a periodic integrand this is the trapezoidal rule.  Nodes within
    ``1e-12`` of a zero of ``|p|`` are dropped and the mean is taken over the
    remaining ones.  Convergence is geometric in ``nodes`` when all roots stay
    away from the circle and slow when a root lies on it.
    """
    if p.is_zero():
        raise ZeroPolynomial("Mahler measure of the zero polynomial")
    if nodes < 16 or nodes & (nodes - 1):
        raise ValueError("nodes must be a power of two >= 16")
    z = np.exp(2j * np.pi * np.arange(nodes) / nodes)
    coeffs = [complex(c) for c in p.to_list()][::-1]
    vals = np.abs(np.polyval(coeffs, z))  # |t**k| = 1 on the circle
    keep = vals > 1e-12
    log_m = math.fsum(np.log(vals[keep]).tolist()) / int(keep.sum())
    return MahlerValue(math.exp(log_m), log_m, "quadrature", math.nan)


def log_mahler(p) -> float:
    """Logarithmic Mahler measure by the root method."""
    return mahler_roots(p).log_measure
