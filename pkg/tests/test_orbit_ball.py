import pytest

from genericity.core.errors import InvalidInputError
from genericity.models.surface import NormalCoords, SurfaceSpec
from genericity.services.crossval import torus_edge_weight
from genericity.services.exact_torus import enumerate_l1_ball
from genericity.services.normal_coords import edge_weight_F
from genericity.services.orbit_ball import (
    distortion_factor,
    enumerate_orbit_ball,
    iter_orbit_ball,
    with_inverses,
)
from genericity.services.triangulations import default_marking

H = NormalCoords((0, 1, 1))
# long enough for every path the search keeps below L times the distortion
CAP = 64


@pytest.fixture
def torus_gens(library, torus):
    return library.generators(torus)


def torus_oracle(L):
    # classes up to sign, so each is counted by m and -m
    return sum(1 for m in enumerate_l1_ball(L) if torus_edge_weight(m) <= L) // 2


def test_with_inverses(torus_gens):
    names = [name for name, _ in with_inverses(torus_gens)]
    assert names == ["a", "b", "a^-1", "b^-1"]


def test_distortion_factor_is_at_least_one(torus_gens):
    assert distortion_factor(torus_gens) >= 1


def test_ball_at_the_marking_weight(torus, torus_gens):
    ball = enumerate_orbit_ball(torus_gens, default_marking(torus), 4, CAP)
    assert ball.complete
    # I, S and two rotations of order three, plus the twists T and L
    assert len(ball) == 6
    assert () in [m.word for m in ball.members]
    assert all(m.value == 4 for m in ball.members)


@pytest.mark.parametrize("L", [4, 8, 12, 20])
def test_ball_matches_the_matrix_count(torus, torus_gens, L):
    ball = enumerate_orbit_ball(torus_gens, default_marking(torus), L, CAP)
    assert ball.complete
    assert len(ball) == torus_oracle(L)


def test_members_are_distinct_and_ordered(torus, torus_gens):
    ball = enumerate_orbit_ball(torus_gens, default_marking(torus), 16, CAP)
    keys = [key for key, _, _ in iter_orbit_ball(ball)]
    values = [value for _, _, value in iter_orbit_ball(ball)]
    assert len(set(keys)) == len(keys)
    assert values == sorted(values)
    assert ball.count_up_to(8) == torus_oracle(8)


def test_word_cap_marks_the_ball_incomplete(torus, torus_gens):
    ball = enumerate_orbit_ball(torus_gens, default_marking(torus), 20, 0)
    assert not ball.complete
    assert len(ball) == 1


def test_gamma0_must_fill(torus_gens):
    with pytest.raises(InvalidInputError):
        enumerate_orbit_ball(torus_gens, H, 20, CAP)
    with pytest.raises(InvalidInputError):
        enumerate_orbit_ball([], H, 20, CAP)


@pytest.mark.parametrize("spec, L", [(SurfaceSpec(1, 2), 20), (SurfaceSpec(0, 5), 60)], ids=str)
def test_balls_on_surfaces_with_several_triangles(library, spec, L):
    gens = library.generators(spec)
    marking = default_marking(spec)
    smallest = sum(edge_weight_F(c) for c in marking)
    ball = enumerate_orbit_ball(gens, marking, L, 12)
    assert () in [m.word for m in ball.members]
    assert min(m.value for m in ball.members) == smallest
    assert [(m.value, m.key) for m in ball.members] == sorted((m.value, m.key) for m in ball.members)
    assert len({m.key for m in ball.members}) == len(ball)
    assert len(enumerate_orbit_ball(gens, marking, smallest, 12)) <= len(ball)
