# genericity/services/maher.py
from __future__ import annotations

import logging
from collections import Counter
from typing import Sequence

from genericity.core.config import LOG_LEVEL, WINDOW
from genericity.core.errors import InvalidInputError
from genericity.models.torus import GeneratingSet, IntMatrix2, PrimitiveClass, S, T
from genericity.schemas.reports import HistogramRow, IsolationMember, IsolationProfile, ProximityProfile
from genericity.services.exact_torus import (
    centralizer_root,
    iter_l1_ball_entries,
    rel_distance_to_centralizer,
    trace_kind,
)

logger = logging.getLogger("genericity.experiments")
logger.setLevel(LOG_LEVEL)

MAX_ISOLATION_K = 4
ALPHA0 = PrimitiveClass(1, 0)


def word_sphere_lengths(gens: GeneratingSet, radius: int) -> dict[IntMatrix2, int]:
    """Non-identity group elements of word length below `radius`, with their lengths."""
    identity = IntMatrix2.identity()
    lengths = {identity: 0}
    frontier = [identity]
    for depth in range(1, radius):
        nxt = []
        for node in frontier:
            for g in gens.elements:
                child = node @ g
                if child not in lengths:
                    lengths[child] = depth
                    nxt.append(child)
        frontier = nxt
    del lengths[identity]
    return lengths


def _non_pa_members(radius: int) -> list[IntMatrix2]:
    return [IntMatrix2(*e) for e in iter_l1_ball_entries(radius) if trace_kind(*e) != "pa"]


def split_isolated_dense(
    k: int,
    radius: int,
    gens: GeneratingSet | None = None,
    phi0: Sequence[IntMatrix2] = (),
    window: int = WINDOW,
) -> IsolationProfile:
    """Split the non-pseudo-Anosov elements of the l1 ball into k-isolated and k-dense ones.

    An element is k-dense when another non-pseudo-Anosov element of the group lies at word
    distance below k; `nearest` is that distance. With phi0 given, each member also carries
    its relative distance to the nearest of their centralizers."""
    if k < 1:
        raise InvalidInputError("k must be positive")
    if k > MAX_ISOLATION_K:
        raise InvalidInputError(f"k={k} is too large: word neighbourhoods are only searched up to k={MAX_ISOLATION_K}")
    gens = gens or GeneratingSet.named("ST")
    near = sorted(word_sphere_lengths(gens, k).items(), key=lambda item: (item[1], item[0].entries()))
    isolated, dense = [], []
    for psi in _non_pa_members(radius):
        nearest = None
        for w, length in near:
            if trace_kind(*(psi @ w).entries()) != "pa":
                nearest = length
                break
        proximity = None
        if phi0:
            proximity = min(rel_distance_to_centralizer(psi, p, ALPHA0, window) for p in phi0)
        member = IsolationMember(
            matrix=str(psi),
            kind=trace_kind(*psi.entries()),
            nearest=nearest,
            proximity=proximity,
        )
        (isolated if nearest is None else dense).append(member)
    logger.info(f"k={k}, R={radius}: {len(isolated)} isolated, {len(dense)} dense")
    return IsolationProfile(k=k, radius=radius, generators=gens.name, isolated=isolated, dense=dense)


def maher_proximity_profile(
    radius: int,
    phi0: Sequence[IntMatrix2] = (T, S @ T @ S.inverse()),
    window: int = WINDOW,
) -> ProximityProfile:
    """Histogram of the relative distance from each non-pseudo-Anosov ball element to the
    nearest centralizer of the phi0 list."""
    if not phi0:
        raise InvalidInputError("phi0 list is empty")
    for p in phi0:
        # raises on central elements
        centralizer_root(p)
    histogram: Counter = Counter()
    for psi in _non_pa_members(radius):
        histogram[min(rel_distance_to_centralizer(psi, p, ALPHA0, window) for p in phi0)] += 1
    rows = [HistogramRow(distance=d, count=n) for d, n in sorted(histogram.items())]
    return ProximityProfile(radius=radius, window=window, phi0=[str(p) for p in phi0], rows=rows)
