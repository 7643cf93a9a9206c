import pytest

from genericity.core.errors import InvalidInputError
from genericity.models.surface import (
    Flip,
    IdealTriangulation,
    MappingWord,
    NormalCoords,
    Relabel,
    SurfaceSpec,
    parse_move,
)
from genericity.services.normal_coords import (
    apply_word,
    class_key,
    edge_boundary_curve,
    edge_weight_F,
    flip_edge,
    has_peripheral,
    is_filling,
    iter_multicurves,
    marking_family,
    validate_normal_coords,
)
from genericity.services.triangulations import build_triangulation, default_marking, lattice_model
from tests.conftest import SHIPPED_SURFACES

H = NormalCoords((0, 1, 1))
V = NormalCoords((1, 0, 1))


# ---------- triangulations ----------

@pytest.mark.parametrize("spec", SHIPPED_SURFACES, ids=str)
def test_built_triangulation_has_the_right_topology(spec):
    tri = build_triangulation(spec)
    assert tri.n_edges == spec.n_edges
    assert tri.n_triangles == spec.n_triangles
    assert tri.surface() == spec
    assert tri.is_connected()


def test_surface_spec_rejects_small_and_closed_surfaces():
    for genus, punctures in [(0, 3), (0, 2), (2, 0), (-1, 4)]:
        with pytest.raises(InvalidInputError):
            SurfaceSpec(genus, punctures)
    assert SurfaceSpec.parse("1,2") == SurfaceSpec(1, 2)
    with pytest.raises(InvalidInputError):
        SurfaceSpec.parse("one,two")


def test_triangulation_rejects_unpaired_edges():
    with pytest.raises(InvalidInputError):
        IdealTriangulation(((0, 1, 2), (0, 1, 3)))


def test_torus_lattice_labels(torus, torus_tri):
    model = lattice_model(torus)
    assert torus_tri.triangles == ((0, 1, 2), (0, 1, 2))
    assert model.horizontal_curve(0) == H
    assert model.vertical_curve(0) == V
    assert default_marking(torus) == [H, V]


def test_default_marking_without_a_lattice_model_uses_edge_boundaries():
    spec = SurfaceSpec(0, 5)
    assert lattice_model(spec) is None
    assert default_marking(spec) == marking_family(build_triangulation(spec))


# ---------- moves and words ----------

def test_parse_move():
    assert parse_move("f3") == Flip(3)
    assert parse_move("p2,0,1") == Relabel((2, 0, 1))
    with pytest.raises(InvalidInputError):
        parse_move("x1")
    with pytest.raises(InvalidInputError):
        Relabel((0, 0, 1))


def test_mapping_word_must_close_up(torus_tri):
    with pytest.raises(InvalidInputError):
        MappingWord(torus_tri, (Flip(0),))
    assert len(MappingWord.identity(torus_tri)) == 0


def test_word_inverse_and_encoding(library, torus):
    a = library.word(torus, "a")
    assert class_key(a.then(a.inverse())) == class_key(MappingWord.identity(a.base))
    assert MappingWord.decode(a.base, a.encode()) == a


# ---------- validation ----------

def test_validation_examples(torus_tri):
    assert validate_normal_coords(torus_tri, NormalCoords((0, 0, 0)))
    assert validate_normal_coords(torus_tri, NormalCoords((1, 1, 0)))
    assert not validate_normal_coords(torus_tri, NormalCoords((1, 0, 0)))
    check = validate_normal_coords(torus_tri, NormalCoords((1, 1, 1)))
    assert not check.valid
    assert check.arc_system
    assert "odd" in check.diagnosis


def test_validation_rejects_wrong_length(torus_tri):
    with pytest.raises(InvalidInputError):
        validate_normal_coords(torus_tri, NormalCoords((1, 1)))
    with pytest.raises(InvalidInputError):
        NormalCoords((1, -1, 0))


def test_flip_examples(torus_tri):
    assert flip_edge(torus_tri, H, 0)[1] == NormalCoords((2, 1, 1))
    assert flip_edge(torus_tri, H, 1)[1] == H
    assert flip_edge(torus_tri, H, 2)[1] == H


def test_flip_of_a_self_glued_edge_is_refused():
    tri = IdealTriangulation(((0, 0, 1), (1, 2, 2)))
    with pytest.raises(InvalidInputError):
        flip_edge(tri, NormalCoords((0, 0, 0)), 0)


@pytest.mark.parametrize("spec", SHIPPED_SURFACES, ids=str)
def test_flip_is_an_involution(spec, rng):
    tri = build_triangulation(spec)
    bound = 6 if spec.n_edges <= 6 else 4
    sample = list(iter_multicurves(tri, bound))
    rng.shuffle(sample)
    for w in sample[:60]:
        for edge in range(tri.n_edges):
            if len({t for t, _ in tri.slots(edge)}) != 2:
                continue
            once_tri, once = flip_edge(tri, w, edge)
            assert validate_normal_coords(once_tri, once)
            back_tri, back = flip_edge(once_tri, once, edge)
            assert back_tri == tri
            assert back == w


@pytest.mark.slow
@pytest.mark.parametrize("spec", SHIPPED_SURFACES[:4], ids=str)
def test_flip_is_an_involution_on_a_thousand_images(spec, library, rng):
    tri = build_triangulation(spec)
    gens = [w for _, w in library.generators(spec)]
    gens += [w.inverse() for w in gens]
    marking = default_marking(spec)
    edges = [e for e in range(tri.n_edges) if len({t for t, _ in tri.slots(e)}) == 2]
    for _ in range(1000):
        word = MappingWord.identity(tri)
        for _ in range(rng.randint(0, 6)):
            word = word.then(rng.choice(gens))
        w = apply_word(word, rng.choice(marking))
        for edge in edges:
            once_tri, once = flip_edge(tri, w, edge)
            back_tri, back = flip_edge(once_tri, once, edge)
            assert (back_tri, back) == (tri, w)


def test_words_are_homogeneous(library, torus, rng):
    words = [w for _, w in library.generators(torus)]
    for _ in range(50):
        word = rng.choice(words)
        for _ in range(rng.randint(0, 5)):
            word = word.then(rng.choice(words))
        w = NormalCoords((rng.randint(0, 9), rng.randint(0, 9), 0))
        w = NormalCoords((w[0], w[1], w[0] + w[1]))
        assert apply_word(word, w.scale(2)) == apply_word(word, w).scale(2)


# ---------- multicurves ----------

def test_peripheral_detection(torus_tri):
    assert has_peripheral(torus_tri, NormalCoords((2, 2, 2)))
    assert not has_peripheral(torus_tri, H)
    assert not has_peripheral(torus_tri, NormalCoords((1, 1, 2)))


def test_iter_multicurves_on_the_torus(torus_tri):
    found = list(iter_multicurves(torus_tri, 2))
    assert found == [NormalCoords((0, 1, 1)), NormalCoords((1, 0, 1)), NormalCoords((1, 1, 0))]
    assert NormalCoords((2, 2, 2)) not in list(iter_multicurves(torus_tri, 6))


def test_edge_boundary_curves(torus_tri):
    assert edge_boundary_curve(torus_tri, 0) == NormalCoords((0, 2, 2))
    assert edge_weight_F(edge_boundary_curve(torus_tri, 0)) == 4
    assert edge_weight_F(H) == 2


def test_filling(torus_tri):
    assert is_filling(torus_tri, [H, V])
    assert not is_filling(torus_tri, [H])
    assert not is_filling(torus_tri, [])


@pytest.mark.parametrize("spec", SHIPPED_SURFACES[:4], ids=str)
def test_default_markings_fill(spec):
    assert is_filling(build_triangulation(spec), default_marking(spec))


def test_filling_on_a_surface_with_several_triangles():
    spec = SurfaceSpec(1, 2)
    tri = build_triangulation(spec)
    model = lattice_model(spec)
    assert not is_filling(tri, [model.horizontal_curve(0)])
    assert not is_filling(tri, [model.vertical_curve(0), model.vertical_curve(1)])
    assert is_filling(tri, [model.horizontal_curve(0), model.vertical_curve(0), model.vertical_curve(1)])
