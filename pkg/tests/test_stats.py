import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from knotvol.errors import DegenerateSample, EmptyInput, EmptyPopulation, MissingValue
from knotvol.notation import CensusRecord
from knotvol.stats import Sample, average, pearson_r, report, select, std_dev


def test_average_examples():
    s = Sample.from_pairs([(1, 1), (2, 1), (3, 1)])
    assert average(s) == 2
    s = Sample.from_pairs([(0.6, 2.0), (0.9, 3.0)])
    assert average(s, "phi_over_vol") == pytest.approx(0.3, abs=1e-15)
    with pytest.raises(EmptyInput):
        average(Sample(()))


def test_std_dev_examples():
    assert std_dev(Sample.from_pairs([(4, 1)] * 5)) == 0
    assert std_dev(Sample.from_pairs([(1, 1), (3, 1)])) == pytest.approx(1, abs=1e-15)
    assert std_dev(Sample.from_pairs([(1, 1), (2, 1), (3, 1)])) == pytest.approx(math.sqrt(2 / 3), abs=1e-15)
    with pytest.raises(EmptyInput):
        std_dev(Sample(()))


def test_pearson_examples():
    assert pearson_r(Sample.from_pairs([(1, 2), (2, 4), (3, 6)])) == 1
    assert pearson_r(Sample.from_pairs([(1, 3), (2, 2), (3, 1)])) == -1
    assert pearson_r(Sample.from_pairs([(1, 1), (2, 3), (3, 2)])) == pytest.approx(0.5, abs=1e-15)
    with pytest.raises(DegenerateSample):
        pearson_r(Sample.from_pairs([(1, 1)]))
    with pytest.raises(DegenerateSample):
        pearson_r(Sample.from_pairs([(1, 1), (1, 2)]))
    with pytest.raises(EmptyInput):
        pearson_r(Sample(()))


def test_sample_rejects_bad_volume():
    with pytest.raises(ValueError):
        Sample.from_pairs([(1.0, 0.0)])


def _census():
    return [
        CensusRecord("a", 4, True, 2.0),
        CensusRecord("b", 5, True, 3.0),
        CensusRecord("c", 6, False, 4.0),
        CensusRecord("d", 12, True, 9.0),
    ]


def test_report_fields():
    values = {"a": 0.6, "b": 0.8, "c": 1.3, "d": 2.8}
    r = report(_census(), values, "phi", "alternating")
    assert r.n == 3
    ratios = [0.3, 0.8 / 3, 2.8 / 9]
    mean = sum(ratios) / 3
    assert r.a_vol == pytest.approx(mean, rel=1e-15)
    sd = math.sqrt(sum((x - mean) ** 2 for x in ratios) / 3)
    assert r.sigma_vol == pytest.approx(sd, rel=1e-12)
    assert r.big_sigma_vol == r.sigma_vol / r.a_vol
    assert -1 <= r.pearson_r <= 1
    r = report(_census(), values, "phi", "all", max_crossings=6)
    assert r.n == 3
    assert [x.name for x in select(_census(), "non_alternating")] == ["c"]


def test_report_errors():
    with pytest.raises(EmptyPopulation):
        report(_census(), {}, "phi", "non_alternating", max_crossings=5)
    with pytest.raises(MissingValue):
        report(_census(), {"a": 1.0}, "phi", "all")
    single = report(_census(), {"c": 1.0}, "phi", "non_alternating")
    assert single.pearson_r is None


finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)
positive = st.floats(0.1, 100.0)


@settings(max_examples=150, deadline=None)
@given(st.lists(st.tuples(finite, positive), min_size=2, max_size=40))
def test_pearson_bounded(pairs):
    try:
        r = pearson_r(Sample.from_pairs(pairs))
    except DegenerateSample:
        return
    assert -1 <= r <= 1


@settings(max_examples=150, deadline=None)
@given(
    st.lists(st.tuples(st.floats(-100, 100), st.floats(0.5, 50)), min_size=3, max_size=30),
    st.floats(0.01, 100),
    st.floats(-100, 100),
)
def test_pearson_affine_invariance(pairs, a, b):
    s = Sample.from_pairs(pairs)
    t = Sample.from_pairs([(a * p + b, v) for p, v in pairs])
    try:
        r = pearson_r(s)
    except DegenerateSample:
        return
    xs = [p for p, _ in pairs]
    mean = math.fsum(xs) / len(xs)
    spread = math.sqrt(math.fsum((x - mean) ** 2 for x in xs) / len(xs))
    # the affine map costs (|b| + a max|x|) / (a spread) ulps of relative accuracy
    cond = (abs(b) + a * max(abs(x) for x in xs)) / (a * spread) if spread else math.inf
    if cond > 1e3:
        return
    assert pearson_r(t) == pytest.approx(r, abs=1e-12)


@settings(max_examples=150, deadline=None)
@given(st.lists(st.floats(0.5, 50), min_size=2, max_size=30, unique=True), st.floats(0.01, 10), st.floats(-10, 10))
def test_pearson_exact_on_affine_data(vols, a, b):
    assert pearson_r(Sample.from_pairs([(a * v + b, v) for v in vols])) == pytest.approx(1, abs=1e-12)
    assert pearson_r(Sample.from_pairs([(-a * v + b, v) for v in vols])) == pytest.approx(-1, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(finite, positive), min_size=1, max_size=40), st.randoms())
def test_permutation_invariant(pairs, rnd):
    s = Sample.from_pairs(pairs)
    shuffled = list(pairs)
    rnd.shuffle(shuffled)
    t = Sample.from_pairs(shuffled)
    for of in ("phi", "phi_over_vol"):
        assert average(s, of) == average(t, of)
        assert std_dev(s, of) == std_dev(t, of)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.floats(0.01, 10), positive), min_size=2, max_size=40))
def test_big_sigma_reconstructs(pairs):
    recs = [CensusRecord(f"k{i}", 5, True, v) for i, (_, v) in enumerate(pairs)]
    values = {f"k{i}": p for i, (p, _) in enumerate(pairs)}
    r = report(recs, values, "phi")
    assert r.big_sigma_vol == r.sigma_vol / r.a_vol


def test_many_random_samples_bounded():
    rng = random.Random(3)
    for _ in range(1000):
        n = rng.randint(2, 30)
        pairs = [(rng.gauss(0, 5), rng.uniform(0.5, 20)) for _ in range(n)]
        assert -1 <= pearson_r(Sample.from_pairs(pairs)) <= 1
