import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from knotvol.alexander import (
    INFINITE,
    alexander_poly,
    canonicalize,
    cyclic_cover_order,
    fox_derivative_abelian,
    silver_williams_sequence,
    wirtinger,
)
from knotvol.errors import DegenerateDiagram
from knotvol.notation import BraidWord, KnotDiagram, braid_to_diagram
from knotvol.polyring import IntLaurentPoly

TREFOIL_DELTA = IntLaurentPoly({1: 1, 0: -1, -1: 1})
FIGURE_EIGHT_DELTA = IntLaurentPoly({1: -1, 0: 3, -1: -1})
LN_M_FIGURE_EIGHT = math.log((3 + math.sqrt(5)) / 2)


def test_wirtinger_structure(trefoil, figure_eight):
    for d, n in ((trefoil, 3), (figure_eight, 4)):
        w = wirtinger(d)
        assert w.generator_count == 2 * n
        assert len(w.relators) == n
        assert len(set(w.arc_of().values())) == n
        for r in w.relators:
            assert len(r) == 4
            assert sum(e for _, e in r) == 0


def test_wirtinger_relators_abelianize_to_zero(census):
    for rec in census:
        w = wirtinger(rec.pd)
        gens, rels = w.collapsed()
        t_minus_1 = IntLaurentPoly({1: 1, 0: -1})
        for r in rels:
            assert sum(e for _, e in r) == 0
            # fundamental formula: sum of d r / d g * (g - 1) = r - 1, which is 0 after abelianizing
            total = IntLaurentPoly()
            for g in gens:
                total = total + fox_derivative_abelian(r, g) * t_minus_1
            assert total.is_zero()


def test_alexander_examples(trefoil, figure_eight):
    res = alexander_poly(trefoil)
    assert res.delta == TREFOIL_DELTA
    assert res.determinant == 3
    res = alexander_poly(figure_eight)
    assert res.delta == FIGURE_EIGHT_DELTA
    assert res.determinant == 5
    res = alexander_poly(KnotDiagram.unknot())
    assert res.delta == IntLaurentPoly({0: 1}) and res.determinant == 1


def test_alexander_mirror_invariant(census):
    for rec in census[:20]:
        assert alexander_poly(rec.pd.mirror()) == alexander_poly(rec.pd)


def test_canonicalize():
    raw = IntLaurentPoly({3: -1, 4: 1, 5: -1})
    assert canonicalize(raw) == TREFOIL_DELTA
    with pytest.raises(DegenerateDiagram):
        canonicalize(IntLaurentPoly({0: 1, 1: 1}))


def test_cyclic_cover_examples():
    assert cyclic_cover_order(TREFOIL_DELTA, 2) == 3
    assert cyclic_cover_order(TREFOIL_DELTA, 4) == 3
    assert cyclic_cover_order(TREFOIL_DELTA, 6) is INFINITE
    assert cyclic_cover_order(FIGURE_EIGHT_DELTA, 3) == 16


def test_silver_williams_trefoil():
    seq = silver_williams_sequence(TREFOIL_DELTA, 100)
    assert seq.skipped == tuple(range(6, 101, 6))
    for n, v in seq:
        assert 0 <= v <= math.log(4) / n + 1e-15
    assert seq.value_at(97) < 0.02


def test_silver_williams_figure_eight():
    seq = silver_williams_sequence(FIGURE_EIGHT_DELTA, 100)
    assert seq.skipped == ()
    assert abs(seq.value_at(100) - LN_M_FIGURE_EIGHT) < 0.05


def test_silver_williams_trivial_and_bounds():
    seq = silver_williams_sequence(IntLaurentPoly({0: 1}), 20)
    assert all(v == 0 for _, v in seq)
    with pytest.raises(ValueError):
        silver_williams_sequence(TREFOIL_DELTA, 1)


def test_silver_williams_rate():
    # |value(n) - ln m| <= C / n over n in [10, 200] with C < 10
    seq = silver_williams_sequence(FIGURE_EIGHT_DELTA, 200)
    worst = max(n * abs(v - LN_M_FIGURE_EIGHT) for n, v in seq if n >= 10)
    assert worst < 10


def test_census_invariants(census):
    for rec in census:
        res = alexander_poly(rec.pd)
        d = res.delta
        assert d(1) == 1
        assert all(d.coeff(e) == d.coeff(-e) for e in range(-d.degree, d.degree + 1))
        assert res.determinant == abs(d(-1))
        assert res.determinant % 2 == 1
        assert cyclic_cover_order(d, 2) == res.determinant


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(1, 3).flatmap(lambda i: st.sampled_from([i, -i])), min_size=2, max_size=10))
def test_alexander_properties_on_braids(letters):
    b = BraidWord(4, tuple(letters))
    if b.closure_components() != 1:
        return
    res = alexander_poly(braid_to_diagram(b))
    d = res.delta
    assert d(1) == 1
    assert all(d.coeff(e) == d.coeff(-e) for e in range(-d.degree, d.degree + 1))
    assert cyclic_cover_order(d, 2) == res.determinant
