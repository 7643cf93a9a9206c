# genericity/services/orbit_ball.py
from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Sequence

from genericity.core.config import LOG_LEVEL
from genericity.core.errors import InvalidInputError
from genericity.models.surface import MappingWord, NormalCoords
from genericity.services.normal_coords import (
    F_FUNCTIONS,
    apply_steps,
    compile_word,
    is_filling,
    iter_multicurves,
    marking_family,
)

logger = logging.getLogger("genericity.lamination")
logger.setLevel(LOG_LEVEL)

Key = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class BallMember:
    key: Key
    word: tuple[str, ...]
    value: int


@dataclass
class OrbitBall:
    radius: int
    distortion: Fraction
    members: list[BallMember] = field(default_factory=list)
    complete: bool = True

    def __len__(self) -> int:
        return len(self.members)

    def count_up_to(self, radius: int) -> int:
        return sum(1 for m in self.members if m.value <= radius)


def _family(gamma0: NormalCoords | Sequence[NormalCoords]) -> list[NormalCoords]:
    return [gamma0] if isinstance(gamma0, NormalCoords) else list(gamma0)


def _invert_name(name: str) -> str:
    return name[:-3] if name.endswith("^-1") else f"{name}^-1"


def with_inverses(gens: Sequence[tuple[str, MappingWord]]) -> list[tuple[str, MappingWord]]:
    out = list(gens)
    for name, word in gens:
        out.append((_invert_name(name), word.inverse()))
    return out


def distortion_factor(
    gens: Sequence[tuple[str, MappingWord]],
    F: Callable[[NormalCoords], int] = F_FUNCTIONS["sum"],
    sample_weight: int = 4,
) -> Fraction:
    """Largest growth F(g x) / F(x) over generators and small multicurves x.

    An estimate of the operator bound from below: it is exact only if the worst case is
    attained on the sample."""
    if not gens:
        raise InvalidInputError("empty generator list")
    base = gens[0][1].base
    sample = list(iter_multicurves(base, sample_weight)) + marking_family(base)
    worst = Fraction(1)
    for _, word in gens:
        steps = compile_word(word)
        for x in sample:
            value = F(x)
            if value:
                image = NormalCoords(tuple(apply_steps(steps, x.weights)))
                worst = max(worst, Fraction(F(image), value))
    return worst


def enumerate_orbit_ball(
    gens: Sequence[tuple[str, MappingWord]],
    gamma0: NormalCoords | Sequence[NormalCoords],
    L: int,
    word_cap: int,
    F: Callable[[NormalCoords], int] = F_FUNCTIONS["sum"],
) -> OrbitBall:
    """Mapping classes phi with F(phi(gamma0)) <= L, found by best-first search over words.

    Generators act on the left. A class is identified by the images of the marking family;
    words whose image exceeds L times the distortion factor are not expanded."""
    if not gens:
        raise InvalidInputError("empty generator list")
    base = gens[0][1].base
    family = _family(gamma0)
    if not is_filling(base, family):
        raise InvalidInputError("gamma0 does not fill the surface")
    moves = [(name, compile_word(word)) for name, word in with_inverses(gens)]
    D = distortion_factor(gens, F)
    ball = OrbitBall(L, D)
    limit = L * D

    def total(images: Sequence[tuple[int, ...]]) -> int:
        return sum(F(NormalCoords(c)) for c in images)

    marking = tuple(c.weights for c in marking_family(base))
    start = tuple(c.weights for c in family)
    heap = [(total(start), marking, (), start)]
    seen = {marking}
    while heap:
        value, key, word, images = heapq.heappop(heap)
        if value <= L:
            ball.members.append(BallMember(key, word, value))
        if len(word) >= word_cap:
            ball.complete = False
            continue
        for name, steps in moves:
            new_key = tuple(tuple(apply_steps(steps, c)) for c in key)
            if new_key in seen:
                continue
            new_images = tuple(tuple(apply_steps(steps, c)) for c in images)
            new_value = total(new_images)
            if new_value > limit:
                continue
            seen.add(new_key)
            heapq.heappush(heap, (new_value, new_key, word + (name,), new_images))
    ball.members.sort(key=lambda m: (m.value, m.key))
    logger.info(f"Orbit ball L={L}: {len(ball)} classes, D={D}, complete={ball.complete}")
    return ball


def iter_orbit_ball(ball: OrbitBall) -> Iterator[tuple[Key, tuple[str, ...], int]]:
    for m in ball.members:
        yield m.key, m.word, m.value
