# genericity/services/generators.py
from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Union

from genericity.core.config import LOG_LEVEL
from genericity.core.errors import InvalidInputError, LibraryFormatError
from genericity.models.surface import Flip, MappingWord, Move, Relabel, SurfaceSpec, concatenate
from genericity.models.torus import IntMatrix2
from genericity.services.normal_coords import class_key, flip_triangulation
from genericity.services.triangulations import build_triangulation, lattice_model

logger = logging.getLogger("genericity.generators")
logger.setLevel(LOG_LEVEL)

LIBRARY_HEADER = "genericity-generators"
LIBRARY_VERSION = 1
DEFAULT_LIBRARY = Path(__file__).resolve().parent.parent / "data" / "generators.lib"

Vec = tuple[int, int]


# ---------- affine maps of the flat models ----------

def _canon(v: Vec) -> Vec:
    return max(v, (-v[0], -v[1]))


def _l1(v: Vec) -> int:
    return abs(v[0]) + abs(v[1])


_BASE_PLUS = frozenset({(1, 0), (0, 1), (1, 1)})
_BASE_MINUS = frozenset({(1, 0), (0, 1), _canon((1, -1))})


def _descent(directions: Iterable[Vec]) -> tuple[bool, list[tuple[Vec, Vec]]]:
    """Walk a unimodular direction triple down to the standard one.

    Returns whether the walk ends at {e1, e2, e1-e2} and the forward steps (old, new) that
    lead from the standard triple back up to the given one."""
    triple = frozenset(_canon(v) for v in directions)
    back: list[tuple[Vec, Vec]] = []
    while triple not in (_BASE_PLUS, _BASE_MINUS):
        z = max(triple, key=lambda v: (_l1(v), v))
        x, y = sorted(triple - {z})
        candidates = {_canon((x[0] + y[0], x[1] + y[1])), _canon((x[0] - y[0], x[1] - y[1]))}
        if z not in candidates:
            raise InvalidInputError(f"direction triple {sorted(triple)} is not unimodular")
        (smaller,) = candidates - {z}
        if _l1(smaller) >= _l1(z):
            raise InvalidInputError(f"direction descent stalled at {sorted(triple)}")
        back.append((smaller, z))
        triple = (triple - {z}) | {smaller}
    return triple == _BASE_MINUS, list(reversed(back))


def _signs(x: Vec, y: Vec, d: Vec) -> tuple[int, int]:
    for sx in (1, -1):
        for sy in (1, -1):
            if (sx * x[0] + sy * y[0], sx * x[1] + sy * y[1]) == d:
                return sx, sy
    raise InvalidInputError(f"segment direction {d} is not a signed sum of {x} and {y}")


def _flip_direction(tri, segments: dict, triple: set, old: Vec, moves: list):
    """Flip every edge whose direction is `old`, in label order."""
    x, y = sorted(triple - {old})
    for label in sorted(segments):
        p, d = segments[label]
        if _canon(d) != old:
            continue
        sx, sy = _signs(x, y, d)
        start = (p[0] + sx * x[0], p[1] + sx * x[1])
        new_d = (sy * y[0] - sx * x[0], sy * y[1] - sx * x[1])
        segments[label] = (start, new_d)
        tri, _ = flip_triangulation(tri, label)
        moves.append(Flip(label))
    return tri


def compile_affine(spec: SurfaceSpec, matrix: IntMatrix2, shift: Vec = (0, 0)) -> MappingWord:
    """Flip word of the affine map x -> Mx + b of the flat model of `spec`.

    The word flips the standard triangulation onto the pull-back of itself under the map,
    then relabels each edge by the standard edge it is carried to."""
    model = lattice_model(spec)
    if model is None:
        raise InvalidInputError(f"surface ({spec}) has no flat model; give its generators as flip words")
    m = matrix.entries()
    if not model.normalizes(m):
        raise InvalidInputError(f"matrix {matrix} does not preserve the puncture lattice of ({spec})")
    inv = matrix.inverse()

    def act(n: IntMatrix2, v: Vec) -> Vec:
        return (n.a * v[0] + n.b * v[1], n.c * v[0] + n.d * v[1])

    start_minus, steps = _descent(act(inv, d) for d in ((1, 0), (0, 1), (1, 1)))
    tri = model.triangulation
    segments = {label: key for label, key in enumerate(model.segments)}
    triple = set(_BASE_PLUS)
    moves: list[Move] = []
    if start_minus:
        tri = _flip_direction(tri, segments, triple, (1, 1), moves)
        triple = set(_BASE_MINUS)
    for old, new in steps:
        tri = _flip_direction(tri, segments, triple, old, moves)
        triple = (triple - {old}) | {new}

    labels = model.labels
    perm = []
    for label in range(len(segments)):
        p, d = segments[label]
        image = act(matrix, p)
        image = (image[0] + shift[0], image[1] + shift[1])
        perm.append(labels[model.key(image, act(matrix, d))])
    moves.append(Relabel(tuple(perm)))
    return MappingWord(model.triangulation, tuple(moves))


# ---------- the library file ----------

@dataclass(frozen=True)
class GeneratorRecord:
    surface: SurfaceSpec
    name: str
    matrix: IntMatrix2 | None = None
    shift: Vec = (0, 0)
    word_text: str | None = None

    def line(self) -> str:
        parts = ["gen", str(self.surface), self.name]
        if self.matrix is not None:
            parts += ["affine", str(self.matrix), f"{self.shift[0]},{self.shift[1]}"]
            if self.word_text:
                parts.append(self.word_text)
        else:
            parts += ["word", self.word_text or ""]
        return " ".join(parts).rstrip()


@dataclass(frozen=True)
class RelationRecord:
    surface: SurfaceSpec
    name: str
    lhs: tuple[str, ...]
    rhs: tuple[str, ...]

    def line(self) -> str:
        return " ".join(["rel", str(self.surface), self.name, *self.lhs, "=", *self.rhs]).rstrip()


Entry = Union[GeneratorRecord, RelationRecord, str]


def _parse_pair(text: str) -> Vec:
    try:
        x, y = (int(p) for p in text.split(","))
    except ValueError:
        raise LibraryFormatError(f"expected 'x,y', got '{text}'")
    return (x, y)


def _parse_line(line: str, lineno: int) -> Entry:
    tokens = line.split()
    if not tokens or tokens[0].startswith("#"):
        return line
    try:
        kind, surface, name, *rest = tokens
        spec = SurfaceSpec.parse(surface)
    except (ValueError, InvalidInputError) as exc:
        raise LibraryFormatError(f"line {lineno}: malformed record '{line}' ({exc})")
    if kind == "gen":
        if rest and rest[0] == "affine" and len(rest) >= 3:
            try:
                matrix = IntMatrix2.parse(rest[1])
            except InvalidInputError as exc:
                raise LibraryFormatError(f"line {lineno}: {exc.detail}")
            word_text = " ".join(rest[3:]) or None
            return GeneratorRecord(spec, name, matrix, _parse_pair(rest[2]), word_text)
        if rest and rest[0] == "word":
            return GeneratorRecord(spec, name, word_text=" ".join(rest[1:]))
        raise LibraryFormatError(f"line {lineno}: generator '{name}' needs 'affine' or 'word'")
    if kind == "rel":
        if "=" not in rest:
            raise LibraryFormatError(f"line {lineno}: relation '{name}' has no '='")
        cut = rest.index("=")
        return RelationRecord(spec, name, tuple(rest[:cut]), tuple(rest[cut + 1:]))
    raise LibraryFormatError(f"line {lineno}: unknown record kind '{kind}'")


@dataclass
class GeneratorLibrary:
    """Named mapping-class generators per surface, read from a versioned text file."""
    version: int = LIBRARY_VERSION
    entries: list[Entry] = field(default_factory=list)
    _words: dict = field(default_factory=dict, repr=False, compare=False)

    @classmethod
    def parse(cls, text: str) -> "GeneratorLibrary":
        lines = text.splitlines()
        if not lines:
            raise LibraryFormatError("empty generator library")
        head = lines[0].split()
        if len(head) != 2 or head[0] != LIBRARY_HEADER:
            raise LibraryFormatError(f"missing '{LIBRARY_HEADER} <version>' header")
        try:
            version = int(head[1])
        except ValueError:
            raise LibraryFormatError(f"bad library version '{head[1]}'")
        if version != LIBRARY_VERSION:
            raise LibraryFormatError(f"library version {version} is not supported (expected {LIBRARY_VERSION})")
        entries = [_parse_line(line, i + 2) for i, line in enumerate(lines[1:])]
        lib = cls(version, entries)
        names = set()
        for rec in lib.generator_records():
            if (rec.surface, rec.name) in names:
                raise LibraryFormatError(f"generator '{rec.name}' defined twice for ({rec.surface})")
            names.add((rec.surface, rec.name))
        return lib

    @classmethod
    def load(cls, path: str | Path | None = None) -> "GeneratorLibrary":
        path = Path(path) if path else DEFAULT_LIBRARY
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise InvalidInputError(f"cannot read generator library {path}: {exc}")
        lib = cls.parse(text)
        logger.debug(f"Loaded {len(lib.generator_records())} generators from {path}")
        return lib

    def dump(self) -> str:
        lines = [f"{LIBRARY_HEADER} {self.version}"]
        for e in self.entries:
            lines.append(e if isinstance(e, str) else e.line())
        return "\n".join(lines) + "\n"

    def generator_records(self, spec: SurfaceSpec | None = None) -> list[GeneratorRecord]:
        return [e for e in self.entries if isinstance(e, GeneratorRecord) and spec in (None, e.surface)]

    def relation_records(self, spec: SurfaceSpec | None = None) -> list[RelationRecord]:
        return [e for e in self.entries if isinstance(e, RelationRecord) and spec in (None, e.surface)]

    def surfaces(self) -> list[SurfaceSpec]:
        return sorted({r.surface for r in self.generator_records()})

    def _compile(self, rec: GeneratorRecord) -> MappingWord:
        base = build_triangulation(rec.surface)
        try:
            if rec.word_text is not None:
                word = MappingWord.decode(base, rec.word_text)
                if rec.matrix is not None and class_key(word) != class_key(compile_affine(rec.surface, rec.matrix, rec.shift)):
                    raise LibraryFormatError(f"generator '{rec.name}': stored word disagrees with its affine map")
                return word
            return compile_affine(rec.surface, rec.matrix, rec.shift)
        except LibraryFormatError:
            raise
        except InvalidInputError as exc:
            raise LibraryFormatError(f"generator '{rec.name}' on ({rec.surface}): {exc.detail}")

    def word(self, spec: SurfaceSpec, name: str) -> MappingWord:
        inverse = name.endswith("^-1")
        bare = name[:-3] if inverse else name
        if (spec, bare) not in self._words:
            recs = [r for r in self.generator_records(spec) if r.name == bare]
            if not recs:
                raise InvalidInputError(f"no generator '{bare}' for surface ({spec})")
            self._words[(spec, bare)] = self._compile(recs[0])
        word = self._words[(spec, bare)]
        return word.inverse() if inverse else word

    def generators(self, spec: SurfaceSpec) -> list[tuple[str, MappingWord]]:
        recs = self.generator_records(spec)
        if not recs:
            raise InvalidInputError(f"the generator library has nothing for surface ({spec})")
        return [(r.name, self.word(spec, r.name)) for r in recs]

    def evaluate(self, spec: SurfaceSpec, names: Iterable[str]) -> MappingWord:
        """Product of named generators, applied left to right."""
        return concatenate(build_triangulation(spec), [self.word(spec, n) for n in names])

    def check_relations(self, spec: SurfaceSpec | None = None) -> int:
        checked = 0
        for rel in self.relation_records(spec):
            lhs = self.evaluate(rel.surface, rel.lhs)
            rhs = self.evaluate(rel.surface, rel.rhs)
            if class_key(lhs) != class_key(rhs):
                raise LibraryFormatError(f"relation '{rel.name}' fails on ({rel.surface})")
            checked += 1
        logger.info(f"Checked {checked} generator relations")
        return checked

    def with_compiled_words(self) -> "GeneratorLibrary":
        entries: list[Entry] = []
        for e in self.entries:
            if isinstance(e, GeneratorRecord) and e.word_text is None:
                e = replace(e, word_text=self.word(e.surface, e.name).encode())
            entries.append(e)
        return GeneratorLibrary(self.version, entries)


@lru_cache(maxsize=1)
def default_library() -> GeneratorLibrary:
    lib = GeneratorLibrary.load()
    lib.check_relations()
    return lib
