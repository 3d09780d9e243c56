"""Knot invariants (Alexander, Jones, twisted Alexander) and their Mahler
measures, compared against hyperbolic volume over a census of knots."""

from .alexander import alexander_poly, cyclic_cover_order, silver_williams_sequence, wirtinger
from .errors import KnotvolError
from .jones import jones_poly, kauffman_bracket
from .mahler import log_mahler, mahler_quadrature, mahler_roots
from .notation import (
    BraidWord,
    CensusRecord,
    KnotDiagram,
    braid_to_diagram,
    parse_braid,
    parse_census,
    parse_pd,
)
from .polyring import CxLaurentPoly, IntLaurentPoly, PolyMatrix, poly_det, poly_roots
from .stats import Sample, average, pearson_r, report, std_dev
from .twisted import Sl2Rep, load_rep, twisted_alexander

__version__ = "0.1.0"

__all__ = [
    "BraidWord",
    "CensusRecord",
    "CxLaurentPoly",
    "IntLaurentPoly",
    "KnotDiagram",
    "KnotvolError",
    "PolyMatrix",
    "Sample",
    "Sl2Rep",
    "alexander_poly",
    "average",
    "braid_to_diagram",
    "cyclic_cover_order",
    "jones_poly",
    "kauffman_bracket",
    "load_rep",
    "log_mahler",
    "mahler_quadrature",
    "mahler_roots",
    "parse_braid",
    "parse_census",
    "parse_pd",
    "pearson_r",
    "poly_det",
    "poly_roots",
    "report",
    "silver_williams_sequence",
    "std_dev",
    "twisted_alexander",
    "wirtinger",
]
