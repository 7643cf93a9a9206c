# genericity/services/nt_classifier.py
from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import gcd

import numpy as np

from genericity.core.config import LOG_LEVEL
from genericity.models.surface import MappingWord, NormalCoords
from genericity.services.normal_coords import (
    apply_steps,
    apply_word,
    apply_word_linear,
    compile_word,
    iter_multicurves,
    marking_family,
    validate_normal_coords,
)

logger = logging.getLogger("genericity.lamination")
logger.setLevel(LOG_LEVEL)

Matrix = tuple[tuple[int, ...], ...]


class VerdictKind(str, Enum):
    PERIODIC = "periodic"
    REDUCIBLE = "reducible"
    PA_CANDIDATE = "pseudo-anosov-candidate"
    UNRESOLVED = "unresolved"


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    order: int | None = None
    multicurve: NormalCoords | None = None
    dilatation: float | None = None
    transition: Matrix | None = None
    reason: str | None = None

    @property
    def is_pseudo_anosov(self) -> bool:
        return self.kind is VerdictKind.PA_CANDIDATE

    @property
    def is_certified(self) -> bool:
        return self.kind in (VerdictKind.PERIODIC, VerdictKind.REDUCIBLE)

    def __str__(self) -> str:
        if self.kind is VerdictKind.PERIODIC:
            return f"periodic({self.order})"
        if self.kind is VerdictKind.REDUCIBLE:
            return f"reducible({self.multicurve})"
        if self.kind is VerdictKind.PA_CANDIDATE:
            return f"pseudo-anosov-candidate({self.dilatation!r})"
        return "unresolved"


@dataclass(frozen=True)
class ClassifyBudget:
    max_order: int = 24
    max_weight: int = 8
    orbit_steps: int = 200
    max_cell_period: int = 12
    power_steps: int = 400


def periodic_order(word: MappingWord, max_order: int) -> int | None:
    steps = compile_word(word)
    family = [c.weights for c in marking_family(word.base)]
    images = family
    for n in range(1, max_order + 1):
        images = [tuple(apply_steps(steps, c)) for c in images]
        if images == family:
            return n
    return None


def find_invariant_multicurve(word: MappingWord, max_weight: int) -> NormalCoords | None:
    """First essential multicurve of weight at most `max_weight` fixed by the word."""
    for w in iter_multicurves(word.base, max_weight):
        if apply_word(word, w) == w:
            return w
    return None


def _matmul(x: Matrix, y: Matrix) -> Matrix:
    cols = list(zip(*y))
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in cols) for row in x)


def _matvec(m: Matrix, v: list[int]) -> list[int]:
    return [sum(a * b for a, b in zip(row, v)) for row in m]


def _projective(v: list[int]) -> list[float]:
    total = sum(v)
    return [x / total for x in v]


def _distance(x: list[float], y: list[float]) -> float:
    return max(abs(a - b) for a, b in zip(x, y))


def _power_iteration(m: Matrix, v: list[int], steps: int) -> tuple[float, list[float]] | None:
    """Dominant eigenvalue and eigenvector along the orbit of v, with exact integer products."""
    previous = None
    for _ in range(steps):
        image = _matvec(m, v)
        if any(x < 0 for x in image) or not sum(image):
            return None
        ratio = float(Fraction(sum(image), sum(v)))
        v = image
        if previous is not None and abs(ratio - previous) < 1e-12 * ratio:
            return ratio, _projective(v)
        previous = ratio
    return None


def _is_primitive(m: Matrix) -> bool:
    """Some power of the support pattern of m has no zero entry; the bound (n-1)^2 + 1 suffices."""
    n = len(m)
    support = np.array([[int(x != 0) for x in row] for row in m], dtype=np.int64)
    power = support
    for _ in range((n - 1) ** 2 + 1):
        if power.all():
            return True
        power = np.minimum(power @ support, 1)
    return False


def _twist_curve(word: MappingWord, budget: ClassifyBudget) -> NormalCoords | None:
    """Curve along which the orbit of a curve grows linearly, if the growth is exactly linear."""
    steps = compile_word(word)
    for start in marking_family(word.base):
        v = list(start.weights)
        last = diff = None
        for _ in range(budget.orbit_steps):
            out = apply_steps(steps, v)
            diff = [b - a for a, b in zip(v, out)]
            v = out
            if diff == last:
                break
            last = diff
        else:
            continue
        if not any(diff) or min(diff) < 0:
            continue
        g = gcd(*diff)
        for scale in (g, g // 2) if g % 2 == 0 else (g,):
            w = NormalCoords(tuple(x // scale for x in diff))
            if validate_normal_coords(word.base, w) and apply_word(word, w) == w:
                return w
    return None


def _orbit_cell_cycle(word: MappingWord, budget: ClassifyBudget) -> tuple[int, Matrix, list[int]] | None:
    """Follow a curve until its cell pattern and projective class repeat.

    Returns the period p, the integer matrix of the word^p on the repeating cell and a point
    of the orbit inside that cell."""
    v = list(marking_family(word.base)[0].weights)
    seen: list[tuple[tuple[int, ...], list[float], Matrix]] = []
    for step in range(budget.orbit_steps):
        out, pattern, rows = apply_word_linear(word, v)
        point = _projective(v)
        for p in range(1, min(budget.max_cell_period, len(seen)) + 1):
            old_pattern, old_point, _ = seen[-p]
            if old_pattern == pattern and _distance(old_point, point) < 1e-12:
                logger.debug(f"Cell cycle of period {p} after {step} steps")
                return p, _reorder(seen, rows, p), v
        seen.append((pattern, point, tuple(tuple(r) for r in rows)))
        v = out
    return None


def _reorder(seen: list, rows: list[list[int]], p: int) -> Matrix:
    # word^p = M_last @ ... @ M_first, with M_first applied to the current point first
    cycle = tuple(tuple(r) for r in rows)
    for _, _, m in seen[len(seen) - p + 1:]:
        cycle = _matmul(m, cycle)
    return cycle


def classify_word(word: MappingWord, budget: ClassifyBudget | None = None) -> Verdict:
    budget = budget or ClassifyBudget()
    order = periodic_order(word, budget.max_order)
    if order is not None:
        return Verdict(VerdictKind.PERIODIC, order=order)
    curve = find_invariant_multicurve(word, budget.max_weight)
    if curve is not None:
        return Verdict(VerdictKind.REDUCIBLE, multicurve=curve)
    curve = _twist_curve(word, budget)
    if curve is not None:
        return Verdict(VerdictKind.REDUCIBLE, multicurve=curve)
    cycle = _orbit_cell_cycle(word, budget)
    if cycle is None:
        return Verdict(VerdictKind.UNRESOLVED, reason="cell sequence did not become periodic")
    period, matrix, v = cycle
    if not _is_primitive(matrix):
        return Verdict(VerdictKind.UNRESOLVED, transition=matrix, reason="cell matrix is not primitive")
    found = _power_iteration(matrix, v, budget.power_steps)
    if found is None:
        return Verdict(VerdictKind.UNRESOLVED, reason="power iteration did not settle")
    eigenvalue, vector = found
    if eigenvalue <= 1 + 1e-9 or min(vector) < 0:
        return Verdict(VerdictKind.UNRESOLVED, reason=f"cell eigenvalue {eigenvalue} is not expanding")
    return Verdict(
        VerdictKind.PA_CANDIDATE,
        dilatation=eigenvalue ** (1.0 / period),
        transition=matrix,
    )
