from fractions import Fraction as F
from itertools import combinations, permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from probmet.bridge import (
    MetricSpace,
    coreflect,
    embed_metric,
    ensure_valid_metric,
    is_metric_nonexpansive,
    path_metric,
    reflect,
    validate_metric,
)
from probmet.constructions import PointMap
from probmet.exceptions import InvalidSpace
from probmet.functors import is_nonexpansive
from probmet.numeric import INF, ONE, ZERO
from probmet.spaces import LevelSpace, validate_level_space
from probmet.stepfn import LevelFunction
from probmet.tnorm import ProductTNorm
from probmet.types import Axiom, AxiomStatus

from .strategies import level_spaces, metrics, point_maps, tnorms, weights

PRODUCT = ProductTNorm()


def test_triangle_witness():
    m = MetricSpace.build(
        ("a", "b", "c"),
        {("a", "b"): ONE, ("b", "c"): ONE, ("a", "c"): F(3)},
    )
    report = validate_metric(m)
    assert report.status(Axiom.TRIANGLE) == AxiomStatus.FAIL
    first = report.witnesses[0]
    assert first.points == ("a", "b", "c")
    assert (first.lhs, first.rhs) == (F(3), F(2))
    with pytest.raises(InvalidSpace):
        ensure_valid_metric(m)


def test_separation_follows_the_flag():
    m = MetricSpace(("a", "b"), {("a", "b"): ZERO})
    assert validate_metric(m).status(Axiom.SEPARATION) == AxiomStatus.FAIL
    pseudo = m.replace(separated=False)
    report = validate_metric(pseudo)
    assert report.passed
    assert report.status(Axiom.SEPARATION) == AxiomStatus.SKIPPED


def test_infinite_distances_are_allowed(metric_space_factory):
    m = metric_space_factory(
        points=("a", "b", "c"),
        dist={("a", "b"): ONE, ("a", "c"): INF, ("b", "c"): INF},
    )
    assert validate_metric(m).passed
    s = embed_metric(m, PRODUCT)
    assert s.distance("a", "c") == LevelFunction.constant(INF)


def test_embedding_is_constant(metric_space):
    s = embed_metric(metric_space, PRODUCT)
    assert s.points == metric_space.points
    assert all(d == LevelFunction.constant(ONE) for d in s.dist.values())
    assert s.separated
    assert validate_level_space(s).passed


def test_metric_nonexpansive_witness(metric_space_factory):
    near = metric_space_factory(points=("x", "y"), dist={("x", "y"): F(1, 2)})
    far = metric_space_factory(points=("x", "y"))
    f = PointMap.identity(("x", "y"))
    assert is_metric_nonexpansive(f, far, near).passed
    report = is_metric_nonexpansive(f, near, far)
    assert not report.passed
    assert (report.witnesses[0].lhs, report.witnesses[0].rhs) == (ONE, F(1, 2))


def test_coreflection_reads_the_first_interval():
    d = LevelFunction.from_pairs([(F(1, 3), F(5)), (ONE, F(2))])
    s = LevelSpace(("a", "b"), {("a", "b"): d}, tnorm=PRODUCT)
    metric, counit = coreflect(s)
    assert metric.distance("a", "b") == F(5)
    assert counit == PointMap.identity(s.points)
    assert is_nonexpansive(counit, embed_metric(metric, PRODUCT), s).passed


def test_reflection_uses_the_top_level():
    d = LevelFunction.from_pairs([(F(1, 3), F(5)), (ONE, F(2))])
    s = LevelSpace(("a", "b"), {("a", "b"): d}, tnorm=PRODUCT)
    metric, unit = reflect(s)
    assert metric.distance("a", "b") == F(2)
    assert unit == PointMap.identity(s.points)


def test_reflection_identifies_points_at_top_distance_zero():
    # a|b vanishes only at level 1
    vanishing = LevelFunction.from_pairs([(F(1, 2), ONE), (ONE, ZERO)])
    s = LevelSpace.build(
        ("a", "b", "c"),
        {
            ("a", "b"): vanishing,
            ("a", "c"): LevelFunction.constant(F(3)),
            ("b", "c"): LevelFunction.constant(F(3)),
        },
        tnorm=PRODUCT,
    )
    metric, unit = reflect(s)
    assert metric.points == ("a", "c")
    assert metric.distance("a", "c") == F(3)
    assert unit("b") == "a"
    assert validate_metric(metric).passed


def test_path_metric_shortens():
    m = MetricSpace.build(
        ("a", "b", "c"),
        {("a", "b"): ONE, ("b", "c"): F(1, 2), ("a", "c"): INF},
        separated=False,
    )
    completed = path_metric(m)
    assert completed.distance("a", "c") == F(3, 2)
    assert completed.separated


def brute_force_paths(m, x, z):
    best = m.distance(x, z)
    inner = [p for p in m.points if p not in (x, z)]
    for k in range(1, len(inner) + 1):
        for middle in permutations(inner, k):
            route = (x,) + middle + (z,)
            length = sum(m.distance(p, q) for p, q in zip(route, route[1:]))
            best = min(best, length)
    return best


@st.composite
def raw_tables(draw):
    points = tuple("abcdef"[: draw(st.integers(0, 6))])
    m = MetricSpace.build(
        points,
        {(x, y): draw(weights) for i, x in enumerate(points) for y in points[i + 1 :]},
        separated=False,
    )
    return m


@settings(max_examples=200)
@given(raw_tables())
def test_path_metric_is_the_shortest_path(m):
    completed = path_metric(m)
    assert validate_metric(completed.replace(separated=False)).passed
    for x, z in m.pairs():
        assert completed.distance(x, z) == brute_force_paths(m, x, z)


@settings(max_examples=200)
@given(metrics(), tnorms)
def test_embedding_round_trips(m, t):
    s = embed_metric(m, t)
    assert validate_level_space(s).passed
    assert coreflect(s)[0] == m
    if m.separated:
        metric, unit = reflect(s)
        assert metric == m
        assert unit == PointMap.identity(m.points)


@settings(max_examples=200)
@given(level_spaces(min_points=1, max_points=4, tnorm=PRODUCT), st.data())
def test_coreflection_is_universal(s, data):
    metric, counit = coreflect(s)
    assert validate_metric(metric).passed
    assert is_nonexpansive(counit, embed_metric(metric, PRODUCT), s).passed
    # a metric mapping into s factors through the coreflection
    m = data.draw(metrics(min_points=1, max_points=4))
    f = data.draw(point_maps(m, s))
    into_s = is_nonexpansive(f, embed_metric(m, PRODUCT), s).passed
    assert into_s == is_metric_nonexpansive(f, m, metric).passed


@settings(max_examples=200)
@given(level_spaces(min_points=1, max_points=4, tnorm=PRODUCT), st.data())
def test_reflection_is_universal(s, data):
    metric, unit = reflect(s)
    assert validate_metric(metric).passed
    assert unit.is_surjective()
    assert is_nonexpansive(unit, s, embed_metric(metric, PRODUCT)).passed
    m = data.draw(metrics(min_points=1, max_points=4))
    f = data.draw(point_maps(s, m))
    if not m.separated or not is_nonexpansive(f, s, embed_metric(m, PRODUCT)).passed:
        return
    g = f.factor_through(unit)
    assert g.compose(unit) == f
    assert is_metric_nonexpansive(g, metric, m).passed


@settings(max_examples=200)
@given(level_spaces())
def test_reflection_and_coreflection_sandwich_the_top_level(s):
    reflected, unit = reflect(s)
    coreflected, _ = coreflect(s)
    for p, q in combinations(reflected.points, 2):
        top = s.distance(p, q).top_value
        assert reflected.distance(p, q) <= top <= coreflected.distance(p, q)
    for x, y in s.pairs():
        assert reflected.distance(unit(x), unit(y)) <= s.distance(x, y).top_value
