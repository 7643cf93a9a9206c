# genericity/models/surface.py
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from genericity.core.errors import InvalidInputError

Triangle = tuple[int, int, int]
Slot = tuple[int, int]


@dataclass(frozen=True, order=True)
class SurfaceSpec:
    genus: int
    punctures: int

    def __post_init__(self):
        if self.genus < 0:
            raise InvalidInputError(f"genus must be non-negative, got {self.genus}")
        if self.punctures < 1:
            raise InvalidInputError("closed surfaces are not supported: ideal triangulations need a puncture")
        if 3 * self.genus - 3 + self.punctures < 1:
            raise InvalidInputError(f"surface ({self.genus},{self.punctures}) is too small")

    @classmethod
    def parse(cls, text: str) -> "SurfaceSpec":
        try:
            g, r = (int(p) for p in text.split(","))
        except ValueError:
            raise InvalidInputError(f"surface must look like 'g,r', got '{text}'")
        return cls(g, r)

    @property
    def dimension(self) -> int:
        return 6 * self.genus - 6 + 2 * self.punctures

    @property
    def n_edges(self) -> int:
        return 6 * self.genus - 6 + 3 * self.punctures

    @property
    def n_triangles(self) -> int:
        return 4 * self.genus - 4 + 2 * self.punctures

    def __str__(self) -> str:
        return f"{self.genus},{self.punctures}"


def _rotate_min(tri: Sequence[int]) -> Triangle:
    a, b, c = tri
    return min((a, b, c), (b, c, a), (c, a, b))


@dataclass(frozen=True)
class IdealTriangulation:
    """Oriented ideal triangulation stored as counter-clockwise triples of edge labels.

    Each label occurs in exactly two triangle slots, glued orientation-reversingly; that
    pairing is all the combinatorics an orientable surface needs. Triangles are kept in a
    canonical order so equality is equality of labelled triangulations."""
    triangles: tuple[Triangle, ...]

    def __post_init__(self):
        canon = tuple(sorted(_rotate_min(t) for t in self.triangles))
        object.__setattr__(self, "triangles", canon)
        counts: dict[int, int] = {}
        for tri in canon:
            for e in tri:
                counts[e] = counts.get(e, 0) + 1
        n = len(counts)
        if sorted(counts) != list(range(n)) or any(c != 2 for c in counts.values()):
            raise InvalidInputError("every edge label 0..E-1 must appear in exactly two triangle sides")

    @property
    def n_edges(self) -> int:
        return 3 * len(self.triangles) // 2

    @property
    def n_triangles(self) -> int:
        return len(self.triangles)

    def slots(self, edge: int) -> list[Slot]:
        return [(t, j) for t, tri in enumerate(self.triangles) for j in range(3) if tri[j] == edge]

    def _slot_table(self) -> dict[int, list[Slot]]:
        table: dict[int, list[Slot]] = {}
        for t, tri in enumerate(self.triangles):
            for j, e in enumerate(tri):
                table.setdefault(e, []).append((t, j))
        return table

    def vertex_classes(self) -> dict[Slot, int]:
        """Corner (t, j) -> puncture id; corner j sits where side j-1 ends and side j starts."""
        parent = {(t, j): (t, j) for t in range(len(self.triangles)) for j in range(3)}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(x, y):
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[max(rx, ry)] = min(rx, ry)

        for (t, j), (u, k) in self._slot_table().values():
            # side j runs corner j -> corner j+1, glued reversed onto side k of u
            union((t, j), (u, (k + 1) % 3))
            union((t, (j + 1) % 3), (u, k))
        roots = sorted({find(c) for c in parent})
        ids = {r: i for i, r in enumerate(roots)}
        return {c: ids[find(c)] for c in parent}

    @property
    def n_vertices(self) -> int:
        return len(set(self.vertex_classes().values()))

    def is_connected(self) -> bool:
        if not self.triangles:
            return False
        seen = {0}
        stack = [0]
        table = self._slot_table()
        while stack:
            t = stack.pop()
            for e in self.triangles[t]:
                for u, _ in table[e]:
                    if u not in seen:
                        seen.add(u)
                        stack.append(u)
        return len(seen) == len(self.triangles)

    def surface(self) -> SurfaceSpec:
        v, e, f = self.n_vertices, self.n_edges, self.n_triangles
        euler = v - e + f
        return SurfaceSpec((2 - euler) // 2, v)

    def relabel(self, perm: Sequence[int]) -> "IdealTriangulation":
        return IdealTriangulation(tuple(tuple(perm[e] for e in tri) for tri in self.triangles))


@dataclass(frozen=True)
class NormalCoords:
    weights: tuple[int, ...]

    def __post_init__(self):
        weights = tuple(int(w) for w in self.weights)
        if any(w < 0 for w in weights):
            raise InvalidInputError(f"normal coordinates must be non-negative: {weights}")
        object.__setattr__(self, "weights", weights)

    @classmethod
    def zero(cls, n_edges: int) -> "NormalCoords":
        return cls((0,) * n_edges)

    def __len__(self) -> int:
        return len(self.weights)

    def __getitem__(self, i: int) -> int:
        return self.weights[i]

    def __add__(self, other: "NormalCoords") -> "NormalCoords":
        if len(other) != len(self):
            raise InvalidInputError("normal coordinate vectors of different lengths")
        return NormalCoords(tuple(a + b for a, b in zip(self.weights, other.weights)))

    def scale(self, t: int) -> "NormalCoords":
        return NormalCoords(tuple(t * w for w in self.weights))

    def is_zero(self) -> bool:
        return not any(self.weights)

    def __str__(self) -> str:
        return ",".join(str(w) for w in self.weights)


@dataclass(frozen=True)
class Flip:
    edge: int

    def __str__(self) -> str:
        return f"f{self.edge}"


@dataclass(frozen=True)
class Relabel:
    """Sends edge label i to perm[i]."""
    perm: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.perm) != list(range(len(self.perm))):
            raise InvalidInputError(f"relabel {self.perm} is not a permutation")

    def inverse(self) -> "Relabel":
        inv = [0] * len(self.perm)
        for i, j in enumerate(self.perm):
            inv[j] = i
        return Relabel(tuple(inv))

    def __str__(self) -> str:
        return "p" + ",".join(str(i) for i in self.perm)


Move = Union[Flip, Relabel]


def parse_move(token: str) -> Move:
    try:
        if token.startswith("f"):
            return Flip(int(token[1:]))
        if token.startswith("p"):
            return Relabel(tuple(int(i) for i in token[1:].split(",")))
    except ValueError:
        pass
    raise InvalidInputError(f"cannot parse move '{token}'")


@dataclass(frozen=True)
class MappingWord:
    """Flips and relabellings leading from `base` back to `base`."""
    base: IdealTriangulation
    moves: tuple[Move, ...] = ()

    def __post_init__(self):
        from genericity.services.normal_coords import run_moves

        final = run_moves(self.base, self.moves)
        if final != self.base:
            raise InvalidInputError("mapping word does not close up on its base triangulation")

    @classmethod
    def identity(cls, base: IdealTriangulation) -> "MappingWord":
        return cls(base, ())

    def then(self, other: "MappingWord") -> "MappingWord":
        if other.base != self.base:
            raise InvalidInputError("cannot compose words over different triangulations")
        return MappingWord(self.base, self.moves + other.moves)

    def inverse(self) -> "MappingWord":
        moves = tuple(m.inverse() if isinstance(m, Relabel) else m for m in reversed(self.moves))
        return MappingWord(self.base, moves)

    def power(self, n: int) -> "MappingWord":
        unit = self if n >= 0 else self.inverse()
        return MappingWord(self.base, unit.moves * abs(n))

    def __len__(self) -> int:
        return len(self.moves)

    def encode(self) -> str:
        return " ".join(str(m) for m in self.moves)

    @classmethod
    def decode(cls, base: IdealTriangulation, text: str) -> "MappingWord":
        return cls(base, tuple(parse_move(tok) for tok in text.split()))


def concatenate(base: IdealTriangulation, words: Iterable[MappingWord]) -> MappingWord:
    moves: tuple[Move, ...] = ()
    for w in words:
        moves += w.moves
    return MappingWord(base, moves)
