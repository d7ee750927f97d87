import pytest

from urysohn import (
    FiniteMetricSpace,
    GrowthSchedule,
    ParameterError,
    build_rational_urysohn,
    grow,
    universality_audit,
    validate_metric,
)


def test_schedule_validates_stages():
    with pytest.raises(ParameterError):
        GrowthSchedule(stages=((1, 0, 1),))
    with pytest.raises(ParameterError):
        GrowthSchedule(stages=((2, 2, 2), (1, 2, 2)))  # shrinking n
    with pytest.raises(ParameterError):
        GrowthSchedule(stages=((1, 1, 1),), mode="chaotic")


def test_minimal_build_frozen_sizes():
    result = build_rational_urysohn([(1, 1, 1), (2, 1, 1)])
    assert result.complete
    assert result.space.n == 3

    result = build_rational_urysohn([(1, 1, 2), (2, 1, 2)])
    assert result.complete
    assert result.space.n == 7


def test_build_output_is_a_valid_metric_and_passes_audits():
    result = build_rational_urysohn([(1, 2, 2), (2, 2, 2)])
    assert result.complete
    space = result.space
    assert validate_metric(space.dist).valid
    for n in (1, 2):
        assert universality_audit(space, n, 2, 2, space.n).passed


def test_build_is_deterministic():
    a = build_rational_urysohn([(1, 2, 2), (2, 2, 2)])
    b = build_rational_urysohn([(1, 2, 2), (2, 2, 2)])
    assert a.space == b.space


def test_random_mode_is_seed_reproducible_and_still_audits():
    a = build_rational_urysohn([(1, 2, 2), (2, 2, 2)], mode="random", seed=5)
    b = build_rational_urysohn([(1, 2, 2), (2, 2, 2)], mode="random", seed=5)
    assert a.space == b.space
    assert a.complete
    for n in (1, 2):
        assert universality_audit(a.space, n, 2, 2, a.space.n).passed


def test_budget_stops_growth_with_incomplete_flag():
    result = build_rational_urysohn([(1, 2, 2), (2, 2, 2)], budget=3)
    assert not result.complete
    assert result.space.n == 3
    assert result.realized == 3


def test_grow_preserves_the_given_prefix():
    base = FiniteMetricSpace.from_matrix([[0, 1], [1, 0]])
    result = grow(base, GrowthSchedule(stages=((2, 1, 2),)))
    assert result.complete
    assert base.is_prefix_of(result.space)
    assert universality_audit(result.space, 2, 1, 2, result.space.n).passed
