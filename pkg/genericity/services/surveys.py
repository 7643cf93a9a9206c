# genericity/services/surveys.py
from __future__ import annotations

import logging
from typing import Mapping

from genericity.core.config import LOG_LEVEL
from genericity.core.errors import InvalidInputError
from genericity.models.torus import GeneratingSet, IntMatrix2, TorusMulticurve
from genericity.schemas.reports import Comparability, SurveyRow
from genericity.services.exact_torus import (
    apply_matrix,
    enumerate_l1_ball,
    multicurve_intersection,
    multicurve_length,
    positive_monoid_length,
    word_length,
)

logger = logging.getLogger("genericity.experiments")
logger.setLevel(LOG_LEVEL)

INTRO_MATRICES: dict[str, IntMatrix2] = {
    "M": IntMatrix2(
        5904283700961130691,
        4322235651404355330,
        2161117825702177665,
        1582048049556775361,
    ),
    "N": IntMatrix2(1, 99, 0, 1),
}


def word_length_survey(matrices: Mapping[str, IntMatrix2] = INTRO_MATRICES, cap: int = 14) -> list[SurveyRow]:
    rows = []
    for name, m in matrices.items():
        for set_name in ("ST", "TTt"):
            length = word_length(m, GeneratingSet.named(set_name), cap)
            rows.append(SurveyRow(name=name, generators=set_name, length=length, cap=cap))
        rows.append(SurveyRow(name=name, generators="LR+", length=positive_monoid_length(m), cap=cap))
    return rows


def length_comparability(
    radius: int,
    sigma: TorusMulticurve | None = None,
    sigma_prime: TorusMulticurve | None = None,
) -> Comparability:
    """Range of i(sigma, phi(sigma)) / length(phi(sigma')) over the l1 ball."""
    sigma = sigma or TorusMulticurve.standard_pair()
    sigma_prime = sigma_prime or sigma
    lo = hi = None
    for m in enumerate_l1_ball(radius):
        length = multicurve_length(apply_matrix(m, sigma_prime))
        ratio = float(multicurve_intersection(sigma, apply_matrix(m, sigma))) / length
        lo = ratio if lo is None else min(lo, ratio)
        hi = ratio if hi is None else max(hi, ratio)
    if lo is None:
        raise InvalidInputError(f"the l1 ball of radius {radius} is empty")
    logger.info(f"Comparability over R={radius}: [{lo:.4f}, {hi:.4f}]")
    return Comparability(radius=radius, min_ratio=lo, max_ratio=hi)
