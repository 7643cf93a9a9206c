import pytest

from genericity.core.errors import InvalidInputError
from genericity.models.torus import GeneratingSet, IntMatrix2, S, T
from genericity.services.crossval import compare, correspondence, cross_validate_torus, torus_edge_weight, word_matrix
from genericity.services.exact_torus import classify_matrix, enumerate_l1_ball, trace_kind
from genericity.services.maher import maher_proximity_profile, split_isolated_dense, word_sphere_lengths
from genericity.services.nt_classifier import Verdict, VerdictKind
from genericity.services.surveys import length_comparability, word_length_survey


def non_pa_count(radius):
    return sum(1 for m in enumerate_l1_ball(radius) if trace_kind(*m.entries()) != "pa")


# ---------- isolation ----------

def test_word_spheres():
    lengths = word_sphere_lengths(GeneratingSet.named("ST"), 3)
    assert lengths[S] == 1
    assert lengths[T.inverse()] == 1
    assert lengths[T.power(2)] == 2
    assert IntMatrix2.identity() not in lengths
    assert word_sphere_lengths(GeneratingSet.named("ST"), 1) == {}


def test_one_isolation_leaves_everything_isolated():
    profile = split_isolated_dense(1, 20)
    assert profile.dense == []
    assert len(profile.isolated) == non_pa_count(20)


def test_twists_are_two_dense():
    profile = split_isolated_dense(2, 10)
    dense = {m.matrix: m for m in profile.dense}
    assert "1,1,0,1" in dense
    assert "1,2,0,1" in dense
    assert dense["1,1,0,1"].nearest == 1
    assert len(profile.isolated) + len(profile.dense) == non_pa_count(10)


def test_proximity_is_reported_with_phi0():
    profile = split_isolated_dense(2, 8, phi0=[T], window=20)
    by_matrix = {m.matrix: m for m in profile.isolated + profile.dense}
    assert by_matrix["1,1,0,1"].proximity == 0
    assert all(m.proximity is not None for m in by_matrix.values())


def test_isolation_depth_is_capped():
    with pytest.raises(InvalidInputError):
        split_isolated_dense(5, 10)
    with pytest.raises(InvalidInputError):
        split_isolated_dense(0, 10)


def test_proximity_histogram():
    profile = maher_proximity_profile(10, window=50)
    assert sum(r.count for r in profile.rows) == non_pa_count(10)
    assert profile.rows[0].distance == 0
    assert [r.distance for r in profile.rows] == sorted(r.distance for r in profile.rows)


def test_central_phi0_is_refused():
    with pytest.raises(InvalidInputError):
        maher_proximity_profile(10, [-IntMatrix2.identity()])
    with pytest.raises(InvalidInputError):
        maher_proximity_profile(10, [])


# ---------- cross-validation ----------

def test_word_matrix_reads_left_to_right(library):
    table = correspondence(library)
    assert word_matrix(("b^-1", "a"), table) == IntMatrix2(2, 1, 1, 1)
    assert torus_edge_weight(IntMatrix2.identity()) == 4


def test_engines_agree_on_random_torus_words(library):
    result = cross_validate_torus(30, 8, seed=0, library=library)
    assert result.checked == 32
    assert result.passed, result.discrepancies


def test_dilatation_gap_is_absolute():
    m = IntMatrix2(10 ** 8, 1, -1, 0)
    exact = classify_matrix(m).dilatation
    assert compare(("x",), m, Verdict(VerdictKind.PA_CANDIDATE, dilatation=exact)) is None
    # relative error near 1e-10, absolute error 0.01
    problem = compare(("x",), m, Verdict(VerdictKind.PA_CANDIDATE, dilatation=exact + 0.01))
    assert problem and "dilatation" in problem


@pytest.mark.slow
def test_engines_agree_on_the_full_sample(library):
    result = cross_validate_torus(100, 12, seed=0, library=library)
    assert result.passed, result.discrepancies


# ---------- surveys ----------

def test_word_length_survey():
    rows = {(r.name, r.generators): r for r in word_length_survey(cap=8)}
    assert rows[("N", "LR+")].length == 99
    assert rows[("N", "ST")].length is None
    assert rows[("N", "ST")].shown == "exceeded(8)"
    assert rows[("M", "ST")].length is None


def test_length_comparability_is_bounded():
    result = length_comparability(30)
    assert 0 < result.min_ratio <= result.max_ratio
    assert result.constant < 10
