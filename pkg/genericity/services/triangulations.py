# genericity/services/triangulations.py
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from genericity.core.errors import InvalidInputError
from genericity.models.surface import IdealTriangulation, NormalCoords, SurfaceSpec
from genericity.services.normal_coords import marking_family

Vec = tuple[int, int]
SegmentKey = tuple[Vec, Vec]

DIRECTIONS: tuple[Vec, Vec, Vec] = ((1, 0), (0, 1), (1, 1))


@dataclass(frozen=True)
class LatticeModel:
    """Flat model of a genus <= 1 surface: R^2 modulo the lattice K = diag(k1, k2), with the
    punctures at the integer points, optionally folded by x -> -x (the pillowcase).

    Edges are unit lattice segments in the directions (1,0), (0,1), (1,1)."""
    spec: SurfaceSpec
    k1: int
    k2: int
    symmetric: bool
    segments: tuple[SegmentKey, ...] = field(default=(), compare=False)
    triangulation: IdealTriangulation | None = field(default=None, compare=False)

    def reduce(self, p: Vec) -> Vec:
        return (p[0] % self.k1, p[1] % self.k2)

    def key(self, p: Vec, d: Vec) -> SegmentKey:
        reps = [(p, d), ((p[0] + d[0], p[1] + d[1]), (-d[0], -d[1]))]
        if self.symmetric:
            reps += [((-q[0], -q[1]), (-v[0], -v[1])) for q, v in reps]
        return min((self.reduce(q), v) for q, v in reps)

    def points(self) -> list[Vec]:
        return [(x, y) for x in range(self.k1) for y in range(self.k2)]

    @property
    def labels(self) -> dict[SegmentKey, int]:
        return {k: i for i, k in enumerate(self.segments)}

    def label(self, p: Vec, d: Vec) -> int:
        return self.labels[self.key(p, d)]

    def normalizes(self, m: tuple[int, int, int, int]) -> bool:
        a, b, c, d = m
        # columns of K must map into K
        return all(
            x % self.k1 == 0 and y % self.k2 == 0
            for x, y in ((a * self.k1, c * self.k1), (b * self.k2, d * self.k2))
        )

    def horizontal_curve(self, row: int) -> NormalCoords:
        weights = [0] * len(self.segments)
        for x in range(self.k1):
            for d in (DIRECTIONS[1], DIRECTIONS[2]):
                weights[self.label((x, row), d)] += 1
        return NormalCoords(tuple(weights))

    def vertical_curve(self, column: int) -> NormalCoords:
        weights = [0] * len(self.segments)
        for y in range(self.k2):
            for d in (DIRECTIONS[0], DIRECTIONS[2]):
                weights[self.label((column, y), d)] += 1
        return NormalCoords(tuple(weights))

    def marking(self) -> list[NormalCoords]:
        """Straight horizontal and vertical curves cutting the surface into once-punctured disks."""
        if self.symmetric:
            return [self.horizontal_curve(0), self.vertical_curve(0)]
        return [self.horizontal_curve(j) for j in range(self.k2)] + [
            self.vertical_curve(i) for i in range(self.k1)
        ]


def _build_lattice(spec: SurfaceSpec, k1: int, k2: int, symmetric: bool) -> LatticeModel:
    model = LatticeModel(spec, k1, k2, symmetric)
    order: list[SegmentKey] = []
    seen = set()
    for d in DIRECTIONS:
        for p in model.points():
            k = model.key(p, d)
            if k not in seen:
                seen.add(k)
                order.append(k)
    labels = {k: i for i, k in enumerate(order)}

    def lab(p: Vec, d: Vec) -> int:
        return labels[model.key(p, d)]

    triangles = []
    for x, y in model.points():
        p = (x, y)
        triangles.append((lab(p, (1, 0)), lab((x + 1, y), (0, 1)), lab(p, (1, 1))))
        if not symmetric:
            triangles.append((lab(p, (1, 1)), lab((x, y + 1), (1, 0)), lab(p, (0, 1))))
    tri = IdealTriangulation(tuple(triangles))
    return LatticeModel(spec, k1, k2, symmetric, tuple(order), tri)


@lru_cache(maxsize=None)
def lattice_model(spec: SurfaceSpec) -> LatticeModel | None:
    if spec.genus == 1:
        return _build_lattice(spec, spec.punctures, 1, False)
    if (spec.genus, spec.punctures) == (0, 4):
        return _build_lattice(spec, 2, 2, True)
    return None


def _polygon_triangulation(genus: int) -> list[tuple[int, int, int]]:
    """Fan triangulation of the 4g-gon a1 b1 a1^-1 b1^-1 ... from its first vertex."""
    n = 4 * genus

    def side(i: int) -> int:
        k, kind = divmod(i, 4)
        return 2 * k + (kind % 2)

    def diagonal(i: int) -> int:
        return 2 * genus + i - 2

    triangles = []
    for i in range(1, n - 1):
        first = side(0) if i == 1 else diagonal(i)
        last = side(n - 1) if i + 1 == n - 1 else diagonal(i + 1)
        triangles.append((first, side(i), last))
    return triangles


def _subdivide(triangles: list[tuple[int, int, int]], n_edges: int) -> list[tuple[int, int, int]]:
    """Add one puncture inside the first triangle."""
    a, b, c = triangles[0]
    x0, x1, x2 = n_edges, n_edges + 1, n_edges + 2
    return [(a, x1, x0), (b, x2, x1), (c, x0, x2)] + triangles[1:]


@lru_cache(maxsize=None)
def build_triangulation(spec: SurfaceSpec) -> IdealTriangulation:
    model = lattice_model(spec)
    if model is not None:
        return model.triangulation
    if spec.genus == 0:
        triangles = [(0, 1, 2), (0, 2, 1)]
        base_punctures = 3
    else:
        triangles = _polygon_triangulation(spec.genus)
        base_punctures = 1
    for _ in range(spec.punctures - base_punctures):
        tri = IdealTriangulation(tuple(triangles))
        triangles = _subdivide(list(tri.triangles), tri.n_edges)
    tri = IdealTriangulation(tuple(triangles))
    if tri.surface() != spec or not tri.is_connected():
        raise InvalidInputError(f"triangulation construction failed for surface ({spec})")
    return tri


def default_marking(spec: SurfaceSpec) -> list[NormalCoords]:
    """Lattice curves where a flat model exists, otherwise the boundaries of all edge neighbourhoods."""
    model = lattice_model(spec)
    if model is None:
        return marking_family(build_triangulation(spec))
    return model.marking()
