from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from probmet.constructions import PointMap
from probmet.exceptions import FormMismatch, NotNonExpansive, TNormMismatch
from probmet.functors import (
    check_level_characterisation,
    convert,
    delta,
    distribution_to_levels,
    ensure_nonexpansive,
    is_nonexpansive,
    levels_to_distribution,
    phi,
)
from probmet.numeric import INF, ONE, ZERO
from probmet.stepfn import DistanceDistribution, LevelFunction
from probmet.tnorm import MinimumTNorm
from probmet.types import Axiom, Form

from .strategies import ddf_spaces, level_spaces, point_maps

levels = st.fractions(min_value=0, max_value=1, max_denominator=24).filter(
    lambda v: v > 0
)
gammas = st.fractions(min_value=0, max_value=8, max_denominator=6)


@pytest.mark.parametrize(
    "distribution, steps",
    [
        (DistanceDistribution.epsilon_zero(), ((ONE, ZERO),)),
        (DistanceDistribution(()), ((ONE, INF),)),
        (
            DistanceDistribution.from_pairs([(ONE, F(1, 2)), (F(3), ONE)]),
            ((F(1, 2), F(3)), (ONE, ONE)),
        ),
        (
            DistanceDistribution.from_pairs([(F(2), F(1, 4))]),
            ((F(3, 4), INF), (ONE, F(2))),
        ),
    ],
)
def test_correspondence(distribution, steps):
    d = distribution_to_levels(distribution)
    assert d.steps == steps
    assert levels_to_distribution(d) == distribution


@settings(max_examples=300)
@given(level_spaces())
def test_round_trip(s):
    assert delta(phi(s)) == s
    ddf = phi(s)
    assert phi(delta(ddf)) == ddf


@given(ddf_spaces(min_points=2, max_points=3), levels, gammas)
def test_level_characterisation(s, level, gamma):
    d = delta(s)
    for x, y in s.pairs():
        assert check_level_characterisation(
            s.distance(x, y), d.distance(x, y), level, gamma
        )


def test_convert_keeps_form(level_space):
    assert convert(level_space, Form.LEVELS) is level_space
    assert convert(level_space, Form.DDF) == phi(level_space)
    assert convert(phi(level_space), Form.LEVELS) == level_space


def test_shrinking_the_discrete_space(level_space_factory):
    big = level_space_factory(points=("a", "b"))
    small = level_space_factory(
        points=("x", "y"),
        dist={("x", "y"): LevelFunction.constant(F(1, 2))},
    )
    f = PointMap.between(big, small, {"a": "x", "b": "y"})
    assert is_nonexpansive(f, big, small).passed
    g = PointMap.between(small, big, {"x": "a", "y": "b"})
    report = is_nonexpansive(g, small, big)
    assert not report.passed
    witness = report.witnesses[0]
    assert witness.kind == Axiom.NONEXPANSIVE
    assert (witness.lhs, witness.rhs) == (ONE, F(1, 2))
    with pytest.raises(NotNonExpansive):
        ensure_nonexpansive(g, small, big)
    assert not is_nonexpansive(g, phi(small), phi(big)).passed


def test_forms_and_tnorms_must_match(level_space, level_space_factory):
    f = PointMap.identity(level_space.points)
    with pytest.raises(FormMismatch):
        is_nonexpansive(f, level_space, phi(level_space))
    other = level_space_factory(tnorm=MinimumTNorm())
    with pytest.raises(TNormMismatch):
        is_nonexpansive(f, level_space, other)


@st.composite
def mapped_pairs(draw):
    t = draw(st.sampled_from([MinimumTNorm()]))
    source = draw(level_spaces(min_points=1, max_points=4, tnorm=t))
    target = draw(level_spaces(min_points=1, max_points=4, tnorm=t))
    return draw(point_maps(source, target)), source, target


@settings(max_examples=300)
@given(mapped_pairs())
def test_criterion_agrees_across_forms(case):
    f, source, target = case
    in_levels = is_nonexpansive(f, source, target).passed
    assert in_levels == is_nonexpansive(f, phi(source), phi(target)).passed
