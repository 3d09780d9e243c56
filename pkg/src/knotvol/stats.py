"""Population statistics of a knot invariant against hyperbolic volume.

Averages and standard deviations use the population (divide by ``N``)
convention.  The correlation coefficient is the usual sample Pearson ``r``,
which lies in [-1, 1] and is exactly +-1 on affinely related data.

All sums go through :func:`math.fsum`, which is correctly rounded and hence
independent of the order of the points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import DegenerateSample, EmptyInput, EmptyPopulation, MissingValue
from .notation import CensusRecord

__all__ = [
    "Sample",
    "CorrelationReport",
    "average",
    "std_dev",
    "pearson_r",
    "report",
    "POPULATIONS",
]

POPULATIONS = ("alternating", "non_alternating", "all")


@dataclass(frozen=True)
class Sample:
    """Points ``(name, phi, volume)``."""

    points: tuple

    def __post_init__(self):
        pts = tuple((str(n), float(phi), float(v)) for n, phi, v in self.points)
        for n, _, v in pts:
            if not v > 0:
                raise ValueError(f"{n}: volume must be positive")
        object.__setattr__(self, "points", pts)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[float, float]]) -> "Sample":
        """Anonymous sample from ``(phi, volume)`` pairs."""
        return cls(tuple((f"k{i}", phi, v) for i, (phi, v) in enumerate(pairs)))

    def __len__(self):
        return len(self.points)

    def values(self, of: str = "phi") -> list[float]:
        if of == "phi":
            return [p[1] for p in self.points]
        if of == "phi_over_vol":
            return [p[1] / p[2] for p in self.points]
        if of == "volume":
            return [p[2] for p in self.points]
        raise ValueError(f"unknown quantity {of!r}")


def _mean(xs: Sequence[float]) -> float:
    if not xs:
        raise EmptyInput("statistics of an empty sample")
    return math.fsum(xs) / len(xs)


def _pop_std(xs: Sequence[float]) -> float:
    m = _mean(xs)
    return math.sqrt(math.fsum((x - m) ** 2 for x in xs) / len(xs))


def average(s: Sample, of: str = "phi") -> float:
    return _mean(s.values(of))


def std_dev(s: Sample, of: str = "phi") -> float:
    """Population standard deviation (divides by the sample size)."""
    return _pop_std(s.values(of))


def pearson_r(s: Sample) -> float:
    """Sample Pearson correlation of ``phi`` with volume."""
    if len(s) == 0:
        raise EmptyInput("correlation of an empty sample")
    if len(s) < 2:
        raise DegenerateSample("correlation needs at least two points")
    x, y = s.values("phi"), s.values("volume")
    mx, my = _mean(x), _mean(y)
    dx = [a - mx for a in x]
    dy = [b - my for b in y]
    sxx = math.fsum(a * a for a in dx)
    syy = math.fsum(b * b for b in dy)
    if sxx == 0 or syy == 0:
        raise DegenerateSample("zero variance")
    r = math.fsum(a * b for a, b in zip(dx, dy)) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


@dataclass(frozen=True)
class CorrelationReport:
    invariant_name: str
    population: str
    n: int
    a_vol: float
    sigma_vol: float
    big_sigma_vol: float
    pearson_r: float | None  # None when the sample is degenerate


def select(census: Iterable[CensusRecord], population: str = "all", max_crossings: int | None = None):
    if population not in POPULATIONS:
        raise ValueError(f"unknown population {population!r}")
    for rec in census:
        if max_crossings is not None and rec.crossings > max_crossings:
            continue
        if population == "alternating" and not rec.alternating:
            continue
        if population == "non_alternating" and rec.alternating:
            continue
        yield rec


def report(
    census: Iterable[CensusRecord],
    values: Mapping[str, float],
    invariant_name: str,
    population: str = "all",
    max_crossings: int | None = None,
) -> CorrelationReport:
    """Statistics row for one invariant over a filtered census."""
    pts = []
    for rec in select(census, population, max_crossings):
        if rec.name not in values:
            raise MissingValue(f"{invariant_name} missing for {rec.name}")
        pts.append((rec.name, values[rec.name], rec.volume))
    if not pts:
        raise EmptyPopulation(f"no knots in population {population!r}")
    s = Sample(tuple(pts))
    a = average(s, "phi_over_vol")
    sd = std_dev(s, "phi_over_vol")
    try:
        r = pearson_r(s)
    except DegenerateSample:
        r = None
    return CorrelationReport(invariant_name, population, len(s), a, sd, sd / a if a else math.nan, r)
