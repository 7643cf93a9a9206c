# genericity/services/normal_coords.py
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from genericity.core.errors import InvalidInputError
from genericity.models.surface import (
    Flip,
    IdealTriangulation,
    MappingWord,
    Move,
    NormalCoords,
    Relabel,
)

# ('f', e, a1, a2, b1, b2) or ('p', perm)
Step = tuple


@dataclass(frozen=True)
class CoordCheck:
    valid: bool
    diagnosis: str | None = None
    arc_system: bool = False

    def __bool__(self) -> bool:
        return self.valid


def _square(tri: IdealTriangulation, edge: int) -> tuple[int, int, int, int, int, int]:
    slots = tri.slots(edge)
    if len(slots) != 2:
        raise InvalidInputError(f"edge {edge} is not an edge of this triangulation")
    (t, j), (u, k) = slots
    if t == u:
        raise InvalidInputError(f"edge {edge} is not flippable: both sides lie on triangle {t}")
    ta, tb = tri.triangles[t], tri.triangles[u]
    a1, a2 = ta[(j + 1) % 3], ta[(j + 2) % 3]
    b1, b2 = tb[(k + 1) % 3], tb[(k + 2) % 3]
    return t, u, a1, a2, b1, b2


def flip_triangulation(tri: IdealTriangulation, edge: int) -> tuple[IdealTriangulation, tuple[int, int, int, int]]:
    """Flip `edge`; returns the new triangulation and the square (a1, a2, b1, b2) around it.

    With A = (e, a1, a2) and B = (e, b1, b2) the square reads b1, b2, a1, a2 counter-clockwise,
    so a1/b1 and a2/b2 are opposite sides."""
    t, u, a1, a2, b1, b2 = _square(tri, edge)
    triangles = list(tri.triangles)
    triangles[t] = (edge, a2, b1)
    triangles[u] = (edge, b2, a1)
    return IdealTriangulation(tuple(triangles)), (a1, a2, b1, b2)


def run_moves(tri: IdealTriangulation, moves: Sequence[Move]) -> IdealTriangulation:
    for move in moves:
        if isinstance(move, Flip):
            tri, _ = flip_triangulation(tri, move.edge)
        else:
            if len(move.perm) != tri.n_edges:
                raise InvalidInputError("relabel length does not match the edge count")
            tri = tri.relabel(move.perm)
    return tri


@lru_cache(maxsize=4096)
def compile_word(word: MappingWord) -> tuple[Step, ...]:
    """Flip squares along the word, so applying it is arithmetic only."""
    steps: list[Step] = []
    tri = word.base
    for move in word.moves:
        if isinstance(move, Flip):
            tri, (a1, a2, b1, b2) = flip_triangulation(tri, move.edge)
            steps.append(("f", move.edge, a1, a2, b1, b2))
        else:
            tri = tri.relabel(move.perm)
            steps.append(("p", move.perm))
    return tuple(steps)


def validate_normal_coords(tri: IdealTriangulation, w: NormalCoords) -> CoordCheck:
    if len(w) != tri.n_edges:
        raise InvalidInputError(f"expected {tri.n_edges} coordinates, got {len(w)}")
    parity_failure = None
    for t, (e0, e1, e2) in enumerate(tri.triangles):
        x, y, z = w[e0], w[e1], w[e2]
        if x > y + z or y > x + z or z > x + y:
            return CoordCheck(False, f"triangle {t} {(e0, e1, e2)} breaks the triangle inequality with {(x, y, z)}")
        if (x + y + z) % 2 and parity_failure is None:
            parity_failure = f"triangle {t} {(e0, e1, e2)} has odd weight sum {x + y + z}"
    if parity_failure:
        return CoordCheck(False, parity_failure, arc_system=True)
    return CoordCheck(True)


def _require_valid(tri: IdealTriangulation, w: NormalCoords) -> None:
    check = validate_normal_coords(tri, w)
    if not check.valid:
        raise InvalidInputError(f"invalid normal coordinates: {check.diagnosis}")


def flip_edge(tri: IdealTriangulation, w: NormalCoords, edge: int) -> tuple[IdealTriangulation, NormalCoords]:
    new_tri, (a1, a2, b1, b2) = flip_triangulation(tri, edge)
    weights = list(w.weights)
    weights[edge] = max(w[a1] + w[b1], w[a2] + w[b2]) - w[edge]
    return new_tri, NormalCoords(tuple(weights))


def apply_steps(steps: Sequence[Step], weights: Sequence[int]) -> list[int]:
    out = list(weights)
    for step in steps:
        if step[0] == "f":
            _, e, a1, a2, b1, b2 = step
            out[e] = max(out[a1] + out[b1], out[a2] + out[b2]) - out[e]
        else:
            perm = step[1]
            moved = [0] * len(out)
            for i, target in enumerate(perm):
                moved[target] = out[i]
            out = moved
    return out


def apply_word(word: MappingWord, w: NormalCoords) -> NormalCoords:
    if len(w) != word.base.n_edges:
        raise InvalidInputError(f"expected {word.base.n_edges} coordinates, got {len(w)}")
    return NormalCoords(tuple(apply_steps(compile_word(word), w.weights)))


def apply_word_linear(word: MappingWord, w: Sequence[int]) -> tuple[list[int], tuple[int, ...], list[list[int]]]:
    """Apply the word to w and also return the active cell (branch taken by each flip, 0 for
    a1+b1, 1 for a2+b2) and the integer matrix of the word restricted to that cell."""
    n = len(w)
    out = list(w)
    rows = [[int(i == j) for j in range(n)] for i in range(n)]
    pattern = []
    for step in compile_word(word):
        if step[0] == "f":
            _, e, a1, a2, b1, b2 = step
            first, second = out[a1] + out[b1], out[a2] + out[b2]
            if first >= second:
                pattern.append(0)
                x, y = a1, b1
            else:
                pattern.append(1)
                x, y = a2, b2
            out[e] = out[x] + out[y] - out[e]
            rows[e] = [rx + ry - re for rx, ry, re in zip(rows[x], rows[y], rows[e])]
        else:
            perm = step[1]
            moved_out = [0] * n
            moved_rows: list[list[int]] = [[]] * n
            for i, target in enumerate(perm):
                moved_out[target] = out[i]
                moved_rows[target] = rows[i]
            out, rows = moved_out, moved_rows
    return out, tuple(pattern), rows


def has_peripheral(tri: IdealTriangulation, w: NormalCoords) -> bool:
    """True when some puncture is encircled: every corner at it carries an arc."""
    least: dict[int, int] = {}
    for (t, j), v in tri.vertex_classes().items():
        count = _corner_counts(w.weights, tri.triangles[t])[j]
        least[v] = min(least.get(v, count), count)
    return any(c > 0 for c in least.values())


def iter_multicurves(tri: IdealTriangulation, max_weight: int):
    """Valid essential integral multicurves with weight sum in 1..max_weight, lexicographically."""
    n = tri.n_edges
    weights = [0] * n

    def fill(i: int, budget: int):
        if i == n:
            w = NormalCoords(tuple(weights))
            if not w.is_zero() and validate_normal_coords(tri, w) and not has_peripheral(tri, w):
                yield w
            return
        for x in range(budget + 1):
            weights[i] = x
            yield from fill(i + 1, budget - x)
        weights[i] = 0

    yield from fill(0, max_weight)


def edge_weight_F(w: NormalCoords) -> int:
    return sum(w.weights)


def edge_weight_max(w: NormalCoords) -> int:
    return max(w.weights, default=0)


F_FUNCTIONS = {"sum": edge_weight_F, "max": edge_weight_max}


def edge_boundary_curve(tri: IdealTriangulation, edge: int) -> NormalCoords:
    """Boundary of a regular neighbourhood of `edge` together with its end punctures."""
    corners = tri.vertex_classes()
    (t, j), _ = tri.slots(edge)
    ends = {corners[(t, j)], corners[(t, (j + 1) % 3)]}
    weights = []
    for e in range(tri.n_edges):
        if e == edge:
            weights.append(0)
            continue
        (u, k), _ = tri.slots(e)
        weights.append(int(corners[(u, k)] in ends) + int(corners[(u, (k + 1) % 3)] in ends))
    return NormalCoords(tuple(weights))


def marking_family(tri: IdealTriangulation) -> list[NormalCoords]:
    return [edge_boundary_curve(tri, e) for e in range(tri.n_edges)]


# ---------- filling check ----------

def _corner_counts(w: Sequence[int], tri_edges: tuple[int, int, int]) -> tuple[int, int, int]:
    s = [w[e] for e in tri_edges]
    # corner j lies between side j-1 and side j, opposite side j+1
    return tuple((s[(j - 1) % 3] + s[j] - s[(j + 1) % 3]) // 2 for j in range(3))


def is_filling(tri: IdealTriangulation, family: Sequence[NormalCoords]) -> bool:
    """True when every complementary region of the union of the family is a disk or a
    once-punctured disk.

    All components are drawn as nested corner arcs inside each triangle; where two triangles
    order the crossing points of an edge differently the strands cross in a thin collar along
    that edge. Regions are unions of triangle pieces joined through collar faces."""
    if not family:
        return False
    for c in family:
        _require_valid(tri, c)
    corners = tri.vertex_classes()
    # per triangle, per corner: component id of each arc from the vertex outward
    arcs: list[list[list[int]]] = []
    for tri_edges in tri.triangles:
        per_corner: list[list[int]] = [[], [], []]
        for cid, c in enumerate(family):
            counts = _corner_counts(c.weights, tri_edges)
            for j in range(3):
                per_corner[j].extend([cid] * counts[j])
        arcs.append(per_corner)

    parent: dict[tuple, tuple] = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)

    # centre piece of triangle t is (t, -1, 0); ids stay integer triples
    def piece(t: int, j: int, gap: int) -> tuple:
        n_start = len(arcs[t][j])
        n_end = len(arcs[t][(j + 1) % 3])
        if gap < n_start:
            return (t, j, gap)
        if gap > n_start:
            return (t, (j + 1) % 3, n_start + n_end - gap)
        return (t, -1, 0)

    def side_points(t: int, j: int) -> list[int]:
        return arcs[t][j] + list(reversed(arcs[t][(j + 1) % 3]))

    pieces = set()
    for t in range(tri.n_triangles):
        pieces.add((t, -1, 0))
        for j in range(3):
            for depth in range(len(arcs[t][j])):
                pieces.add((t, j, depth))
    for p in pieces:
        find(p)

    connections: list[tuple] = []
    for e in range(tri.n_edges):
        (t, j), (u, k) = tri.slots(e)
        left = side_points(t, j)
        right = list(reversed(side_points(u, k)))
        n = len(left)
        balance: dict[int, int] = {}
        nonzero = 0
        for gap in range(n + 1):
            if nonzero == 0:
                a, b = piece(t, j, gap), piece(u, k, n - gap)
                union(a, b)
                connections.append(a)
            if gap == n:
                break
            for cid, delta in ((left[gap], 1), (right[gap], -1)):
                before = balance.get(cid, 0)
                after = before + delta
                balance[cid] = after
                nonzero += (after != 0) - (before != 0)

    euler: dict[tuple, int] = {}
    punctures: dict[tuple, set[int]] = {}
    for p in pieces:
        root = find(p)
        euler[root] = euler.get(root, 0) + 1
        touched = punctures.setdefault(root, set())
        t = p[0]
        if p[1] == -1:
            for j in range(3):
                if not arcs[t][j]:
                    touched.add(corners[(t, j)])
        elif p[2] == 0:
            touched.add(corners[(t, p[1])])
    for a in connections:
        root = find(a)
        euler[root] -= 1
    return all(euler[root] + len(punctures[root]) == 1 and len(punctures[root]) <= 1 for root in euler)


def class_key(word: MappingWord) -> tuple[tuple[int, ...], ...]:
    """Images of the marking family; equal keys mean equal mapping classes up to the centre."""
    steps = compile_word(word)
    return tuple(tuple(apply_steps(steps, c.weights)) for c in marking_family(word.base))
