import random
from fractions import Fraction

import pytest

from helpers import brute_force_isometries, brute_force_partial_isometries, random_space
from urysohn import (
    FiniteMetricSpace,
    GroupAction,
    ParameterError,
    PartialIsometry,
    compose_partial,
    compose_perms,
    cosets,
    hall_embed,
    hall_stage,
    identity_perm,
    inverse_partial,
    invert_perm,
    isometry_group,
    partial_isometries,
    stabilizer,
)

TWO = FiniteMetricSpace.from_matrix([[0, 1], [1, 0]])
EQUILATERAL = FiniteMetricSpace.from_matrix([[0, 1, 1], [1, 0, 1], [1, 1, 0]])
PATH = FiniteMetricSpace.from_matrix([[0, 1, 2], [1, 0, 1], [2, 1, 0]])


def test_perm_algebra_oracles():
    g = (1, 2, 0)
    h = (0, 2, 1)
    assert compose_perms(g, h) == (1, 0, 2)
    assert invert_perm(g) == (2, 0, 1)
    assert compose_perms(g, invert_perm(g)) == identity_perm(3)


def test_isometry_group_matches_brute_force_on_fixed_spaces():
    for space, order in ((TWO, 2), (EQUILATERAL, 6), (PATH, 2)):
        group = isometry_group(space)
        assert group.order == order
        assert sorted(group.elements) == brute_force_isometries(space)


def test_isometry_group_matches_brute_force_on_random_spaces():
    rng = random.Random(21)
    for _ in range(40):
        space = random_space(rng, max_points=5)
        group = isometry_group(space)
        assert sorted(group.elements) == brute_force_isometries(space)


def test_partial_isometry_counts_frozen():
    assert len(partial_isometries(TWO)) == 7
    assert len(partial_isometries(EQUILATERAL)) == 34


def test_partial_isometries_match_brute_force():
    rng = random.Random(22)
    for _ in range(25):
        space = random_space(rng, max_points=4)
        listed = sorted(p.mapping for p in partial_isometries(space))
        assert listed == brute_force_partial_isometries(space)


def test_partial_isometry_rejects_distance_changing_maps():
    with pytest.raises(Exception):
        PartialIsometry(space=PATH, mapping=((0, 0), (2, 1)))  # 2 -> 1 shrinks


def test_compose_and_invert_partial():
    p = PartialIsometry(space=PATH, mapping=((0, 2), (1, 1), (2, 0)))
    q = inverse_partial(p)
    assert q.mapping == ((0, 2), (1, 1), (2, 0))
    r = compose_partial(p, q)
    assert r.is_identity_on_domain()


def test_stabilizer_and_cosets_on_the_equilateral_triangle():
    group = isometry_group(EQUILATERAL)
    stab = stabilizer(group, (Fraction(1), Fraction(1), Fraction(2)))
    assert stab.order == 2
    reps = cosets(group, stab)
    assert len(reps) == 3


def test_group_action_rejects_non_closed_sets():
    with pytest.raises(Exception):
        GroupAction.from_perms(EQUILATERAL, [(0, 1, 2), (1, 2, 0)])  # missing inverse's partner


def test_hall_stage_three_is_an_injective_homomorphism():
    stage = hall_stage(3)
    assert stage.target_degree == 6
    assert stage.verify_homomorphism()
    assert stage.embed(identity_perm(3)) == identity_perm(6)


def test_hall_stage_rejects_small_n():
    with pytest.raises(ParameterError):
        hall_stage(2)


def test_hall_embed_composes_stages():
    g = (1, 0, 2)
    once = hall_embed(g, stages=1)
    assert len(once) == 6
    twice = hall_embed(g, stages=2)
    assert len(twice) == 720
    with pytest.raises(ParameterError):
        hall_embed(twice, stages=1)
