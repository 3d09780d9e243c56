import io

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from knotvol.alexander import alexander_poly
from knotvol.errors import (
    DuplicateName,
    GeneratorOutOfRange,
    InvalidDiagram,
    MalformedSyntax,
    NonPositiveVolume,
    NotAKnot,
)
from knotvol.notation import (
    BraidWord,
    CensusRecord,
    KnotDiagram,
    braid_to_diagram,
    format_pd,
    parse_braid,
    parse_braid_file,
    parse_census,
    parse_pd,
    write_census,
)

from conftest import DATA, FIGURE_EIGHT_PD, TREFOIL_PD


def test_parse_trefoil(trefoil):
    assert len(trefoil) == 3
    assert trefoil.arc_count == 6
    assert trefoil.crossings[0] == (1, 4, 2, 5)


def test_parse_figure_eight(figure_eight):
    assert len(figure_eight) == 4
    assert figure_eight.crossings == ((4, 2, 5, 1), (8, 6, 1, 5), (6, 3, 7, 4), (2, 7, 3, 8))


def test_parse_accepts_wrappers_and_commas():
    a = parse_pd("PD[X[1,4,2,5], X[3,6,4,1], X[5,2,6,3]]")
    assert a == parse_pd(TREFOIL_PD)


@pytest.mark.parametrize("text", ["X(1,1,2,2)", "X(1,2,3,4)", "X(1,4,2,5) X(3,6,4,1)"])
def test_invalid_diagrams(text):
    with pytest.raises(InvalidDiagram):
        parse_pd(text)


@pytest.mark.parametrize("text", ["", "X(1,2,3)", "Y(1,4,2,5)", "X(1,4,2,5) junk"])
def test_malformed_pd(text):
    with pytest.raises(MalformedSyntax):
        parse_pd(text)


def test_two_component_rejected():
    # Hopf link: two closed strands
    with pytest.raises(InvalidDiagram):
        parse_pd("X(4,1,3,2) X(2,3,1,4)")


def test_signs_and_mirror(trefoil, figure_eight):
    assert trefoil.signs() == [-1, -1, -1]
    assert trefoil.mirror().signs() == [1, 1, 1]
    assert sorted(figure_eight.signs()) == [-1, -1, 1, 1]
    assert trefoil.mirror().mirror() == trefoil


def test_parse_braid():
    assert parse_braid("2: 1 1 1") == BraidWord(2, (1, 1, 1))
    assert parse_braid("3: 1 -2 1 -2") == BraidWord(3, (1, -2, 1, -2))
    with pytest.raises(GeneratorOutOfRange):
        parse_braid("2: 5")
    with pytest.raises(MalformedSyntax):
        parse_braid("three: 1")


def test_braid_closures(trefoil):
    d = braid_to_diagram(BraidWord(2, (1, 1, 1)))
    assert len(d) == 3
    assert alexander_poly(d).delta == alexander_poly(trefoil).delta
    assert alexander_poly(braid_to_diagram(BraidWord(3, (1, -2, 1, -2)))).determinant == 5
    with pytest.raises(NotAKnot):
        braid_to_diagram(BraidWord(2, (1, 1)))


def test_braid_unknot_cases():
    assert braid_to_diagram(BraidWord(1, ())).is_unknot_diagram
    assert braid_to_diagram(BraidWord(2, (1,))).is_unknot_diagram


def test_braid_file():
    text = "# comment\n3_1: 2: 1 1 1\n4_1: 3: 1 -2 1 -2\n"
    braids = parse_braid_file(io.StringIO(text))
    assert braids["4_1"] == BraidWord(3, (1, -2, 1, -2))
    with pytest.raises(DuplicateName):
        parse_braid_file(io.StringIO(text + "3_1: 2: 1 1 1\n"))


CENSUS_HEAD = "name,crossings,alternating,volume,pd\n"


def test_parse_census_line():
    recs = parse_census(CENSUS_HEAD + f'4_1,4,1,2.029883212819,"{FIGURE_EIGHT_PD}"\n')
    assert len(recs) == 1
    r = recs[0]
    assert (r.name, r.crossings, r.alternating) == ("4_1", 4, True)
    assert r.volume == pytest.approx(2.0298832, abs=1e-7)
    assert r.pd == parse_pd(FIGURE_EIGHT_PD)


def test_census_edge_cases():
    assert parse_census(CENSUS_HEAD) == []
    assert parse_census("") == []
    with pytest.raises(NonPositiveVolume):
        parse_census(CENSUS_HEAD + "5_2,5,1,-1.0,\n")
    with pytest.raises(DuplicateName):
        parse_census(CENSUS_HEAD + "5_2,5,1,2.8,\n5_2,5,1,2.8,\n")
    with pytest.raises(MalformedSyntax):
        parse_census("name,volume\n")
    with pytest.raises(MalformedSyntax):
        parse_census(CENSUS_HEAD + "5_2,5,yes,2.8,\n")


def test_census_roundtrip(census):
    buf = io.StringIO()
    write_census(census, buf)
    assert parse_census(buf.getvalue()) == census


def test_bundled_census_shape(census):
    assert len(census) >= 50
    assert all(r.pd is not None and 3 <= r.crossings <= 12 for r in census)
    assert all(len(r.pd) >= r.crossings for r in census)


def test_bundled_braids_match_pd(census):
    with open(DATA / "braids.txt", encoding="utf-8") as fh:
        braids = parse_braid_file(fh)
    for rec in census:
        d = braid_to_diagram(braids[rec.name])
        assert alexander_poly(d) == alexander_poly(rec.pd), rec.name


def test_census_record_checks():
    with pytest.raises(MalformedSyntax):
        CensusRecord("", 4, True, 1.0)
    with pytest.raises(NonPositiveVolume):
        CensusRecord("k", 4, True, 0.0)


# -- properties ------------------------------------------------------------------


@st.composite
def braid_knots(draw):
    n = draw(st.integers(2, 4))
    letters = draw(
        st.lists(st.integers(1, n - 1).flatmap(lambda i: st.sampled_from([i, -i])), min_size=2, max_size=12)
    )
    b = BraidWord(n, tuple(letters))
    assume(b.closure_components() == 1)
    return b


@settings(max_examples=60, deadline=None)
@given(braid_knots())
def test_braid_diagram_valid_and_roundtrips(b):
    d = braid_to_diagram(b)
    assert isinstance(d, KnotDiagram)
    assert parse_pd(format_pd(d)) == d
    assert d.arc_count == 2 * len(d)
