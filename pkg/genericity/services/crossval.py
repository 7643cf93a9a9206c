# genericity/services/crossval.py
from __future__ import annotations

import logging
import random

from genericity.core.config import LOG_LEVEL, SEED
from genericity.core.errors import InvalidInputError
from genericity.models.surface import SurfaceSpec
from genericity.models.torus import IntMatrix2, NTKind
from genericity.schemas.reports import CrossValidationResult
from genericity.services.exact_torus import classify_matrix, projective_order
from genericity.services.generators import GeneratorLibrary, default_library
from genericity.services.normal_coords import apply_word, edge_weight_F
from genericity.services.nt_classifier import Verdict, VerdictKind, classify_word
from genericity.services.triangulations import default_marking

logger = logging.getLogger("genericity.experiments")
logger.setLevel(LOG_LEVEL)

TORUS = SurfaceSpec(1, 1)
DILATATION_TOLERANCE = 1e-6


def torus_edge_weight(m: IntMatrix2) -> int:
    """Edge-weight sum of the image of the horizontal and vertical curves, read off the matrix."""
    total = 0
    for p, q in ((m.a, m.c), (m.b, m.d)):
        total += abs(q) + abs(p) + abs(p - q)
    return total


def correspondence(library: GeneratorLibrary) -> dict[str, IntMatrix2]:
    """Generator name -> matrix, inverses included."""
    table = {}
    for rec in library.generator_records(TORUS):
        if rec.matrix is None:
            raise InvalidInputError(f"torus generator '{rec.name}' has no matrix")
        table[rec.name] = rec.matrix
        table[f"{rec.name}^-1"] = rec.matrix.inverse()
    return table


def word_matrix(names: tuple[str, ...], table: dict[str, IntMatrix2]) -> IntMatrix2:
    m = IntMatrix2.identity()
    for name in names:
        m = table[name] @ m
    return m


def compare(names: tuple[str, ...], m: IntMatrix2, verdict: Verdict) -> str | None:
    exact = classify_matrix(m)
    label = " ".join(names) or "identity"
    if exact.kind is NTKind.PERIODIC:
        order = projective_order(m)
        if verdict.kind is not VerdictKind.PERIODIC or verdict.order != order:
            return f"{label}: torus periodic({order}) vs engine {verdict}"
    elif exact.kind is NTKind.REDUCIBLE:
        if verdict.kind is not VerdictKind.REDUCIBLE:
            return f"{label}: torus reducible vs engine {verdict}"
    else:
        if verdict.kind is not VerdictKind.PA_CANDIDATE:
            return f"{label}: torus {exact} vs engine {verdict}"
        if abs(verdict.dilatation - exact.dilatation) >= DILATATION_TOLERANCE:
            return f"{label}: dilatation {exact.dilatation!r} vs engine {verdict.dilatation!r}"
    return None


def cross_validate_torus(
    sample_size: int,
    max_length: int,
    seed: int = SEED,
    library: GeneratorLibrary | None = None,
) -> CrossValidationResult:
    """Run random generator words through both engines and list every disagreement."""
    library = library or default_library()
    table = correspondence(library)
    letters = sorted(table)
    marking = default_marking(TORUS)
    rng = random.Random(seed)
    samples = [(), ("b^-1", "a")] if {"a", "b"} <= set(table) else [()]
    for _ in range(sample_size):
        length = rng.randint(0, max_length)
        samples.append(tuple(rng.choice(letters) for _ in range(length)))

    discrepancies = []
    for names in samples:
        m = word_matrix(names, table)
        word = library.evaluate(TORUS, names)
        weight = sum(edge_weight_F(apply_word(word, c)) for c in marking)
        if weight != torus_edge_weight(m):
            discrepancies.append(f"{' '.join(names) or 'identity'}: weight {weight} vs {torus_edge_weight(m)}")
            continue
        problem = compare(names, m, classify_word(word))
        if problem:
            discrepancies.append(problem)
    logger.info(f"Cross-validated {len(samples)} words, {len(discrepancies)} discrepancies")
    return CrossValidationResult(
        sample_size=sample_size,
        max_length=max_length,
        checked=len(samples),
        discrepancies=discrepancies,
    )
