import random
from fractions import Fraction

import pytest

from helpers import random_space
from urysohn import (
    FiniteMetricSpace,
    ShapeError,
    format_rational,
    rational,
    restrict,
    validate_metric,
)


def test_rational_parses_strings_ints_and_fractions():
    assert rational("3/4") == Fraction(3, 4)
    assert rational("2") == Fraction(2)
    assert rational(5) == Fraction(5)
    assert rational(Fraction(1, 3)) == Fraction(1, 3)


def test_rational_rejects_floats():
    with pytest.raises(TypeError):
        rational(0.5)


def test_format_rational_round_trips():
    for text in ("0", "7", "3/4", "22/7"):
        assert format_rational(rational(text)) == text


def test_validate_metric_accepts_a_metric():
    report = validate_metric([[0, 1, 2], [1, 0, 1], [2, 1, 0]])
    assert report.valid
    assert report.violations == ()


def test_validate_metric_finds_each_violation_kind():
    bad_diag = validate_metric([[1]])
    assert not bad_diag.valid and bad_diag.violations[0].kind == "diagonal"

    bad_sym = validate_metric([[0, 1], [2, 0]])
    assert not bad_sym.valid and bad_sym.violations[0].kind == "symmetry"

    bad_pos = validate_metric([[0, 0], [0, 0]])
    assert not bad_pos.valid and bad_pos.violations[0].kind == "positivity"

    bad_tri = validate_metric([[0, 1, 5], [1, 0, 1], [5, 1, 0]])
    assert not bad_tri.valid
    assert any(v.kind == "triangle" for v in bad_tri.violations)


def test_validate_metric_rejects_non_square():
    with pytest.raises(ShapeError):
        validate_metric([[0, 1]])


def test_from_matrix_default_labels_and_accessors():
    space = FiniteMetricSpace.from_matrix([[0, 1], [1, 0]])
    assert space.points == ("p0", "p1")
    assert space.n == 2
    assert space.d(0, 1) == 1
    assert space.profile(1, [0]) == (Fraction(1),)


def test_restrict_keeps_the_selected_submatrix():
    space = FiniteMetricSpace.from_matrix([[0, 1, 2], [1, 0, 1], [2, 1, 0]])
    sub = restrict(space, [0, 2])
    assert sub.n == 2
    assert sub.d(0, 1) == 2
    assert sub.points == ("p0", "p2")


def test_with_point_extends_and_validates():
    space = FiniteMetricSpace.from_matrix([[0, 1], [1, 0]])
    bigger = space.with_point("q", [Fraction(1), Fraction(1)])
    assert bigger.n == 3
    assert bigger.d(2, 0) == 1
    assert space.is_prefix_of(bigger)


def test_random_spaces_are_valid_metrics():
    rng = random.Random(20260824)
    for _ in range(200):
        space = random_space(rng)
        report = validate_metric(space.dist)
        assert report.valid, report.render()
