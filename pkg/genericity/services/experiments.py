# genericity/services/experiments.py
from __future__ import annotations

import logging
import math
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from genericity.core.config import LOG_LEVEL, THREADS, TOP_FRACTION
from genericity.core.errors import InvalidInputError
from genericity.models.surface import NormalCoords, SurfaceSpec
from genericity.models.torus import IntMatrix2, TorusMulticurve
from genericity.schemas.reports import Box, CountReport, CountRow, EmpiricalMeasure, ExponentFit
from genericity.services.cache import ResultCache, content_hash
from genericity.services.exact_torus import iter_l1_ball_entries, rho_lower_bound, rho_sigma_eta, trace_kind
from genericity.services.generators import GeneratorLibrary, default_library
from genericity.services.maher import split_isolated_dense
from genericity.services.normal_coords import F_FUNCTIONS, apply_word, iter_multicurves
from genericity.services.nt_classifier import ClassifyBudget, VerdictKind, classify_word
from genericity.services.orbit_ball import OrbitBall, enumerate_orbit_ball
from genericity.services.triangulations import build_triangulation, default_marking

logger = logging.getLogger("genericity.experiments")
logger.setLevel(LOG_LEVEL)

KINDS = ("periodic", "reducible", "pa", "unresolved")
STANDARD_PAIR = TorusMulticurve.standard_pair()

# (F value, kind) -> number of mapping classes; rho values may be fractions
Tally = Mapping[tuple[int, str], int]


# ---------- torus tallies ----------

def _tally_shard(
    radius: int,
    a_values: tuple[int, ...],
    measure: str,
    pair: tuple[str, str] | None = None,
    cap: int | None = None,
) -> Counter:
    """Tally one shard of the l1 ball; the rho measure takes sigma and eta as text and drops
    matrices above cap."""
    counts: Counter = Counter()
    if measure == "rho":
        sigma, eta = (TorusMulticurve.parse(text) for text in pair or (STANDARD_PAIR.dumps(),) * 2)
    for a, b, c, d in iter_l1_ball_entries(radius, a_values):
        if measure == "rho":
            value = rho_sigma_eta(sigma, eta, IntMatrix2(a, b, c, d))
            if cap is not None and value > cap:
                continue
            value = int(value) if value.denominator == 1 else value
        else:
            value = abs(a) + abs(b) + abs(c) + abs(d)
        counts[(value, trace_kind(a, b, c, d))] += 1
    return counts


def shards(radius: int, parts: int) -> list[tuple[int, ...]]:
    """Values of the first entry dealt round-robin, so shards get similar work."""
    values = list(range(-radius, radius + 1))
    return [tuple(values[i::parts]) for i in range(parts) if values[i::parts]]


def torus_tally(
    radius: int,
    measure: str = "l1",
    threads: int = THREADS,
    cache: ResultCache | None = None,
    sigma: TorusMulticurve | None = None,
    eta: TorusMulticurve | None = None,
) -> Counter:
    """(value, kind) counts of the ball of the given radius under l1 or rho_{sigma,eta}.

    The rho ball sits inside the l1 ball of radius radius / c, with c from rho_lower_bound."""
    if measure not in ("l1", "rho"):
        raise InvalidInputError(f"unknown torus measure '{measure}'")
    sigma = STANDARD_PAIR if sigma is None else sigma
    eta = STANDARD_PAIR if eta is None else eta
    walk, pair, cap = radius, None, None
    if measure == "rho":
        walk = math.floor(radius / rho_lower_bound(sigma, eta))
        pair, cap = (sigma.dumps(), eta.dumps()), radius

    def compute() -> list[str]:
        parts = shards(walk, max(1, threads))
        n = len(parts)
        if threads > 1:
            with ProcessPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(_tally_shard, [walk] * n, parts, [measure] * n, [pair] * n, [cap] * n))
        else:
            results = [_tally_shard(walk, part, measure, pair, cap) for part in parts]
        total: Counter = Counter()
        for r in results:
            total.update(r)
        return [f"{v},{k},{n}" for (v, k), n in sorted(total.items())]

    cache = cache or ResultCache(None)
    if measure == "rho":
        key = content_hash(kind="torus-tally", measure=measure, radius=radius, sigma=pair[0], eta=pair[1])
    else:
        key = content_hash(kind="torus-tally", measure=measure, radius=radius)
    lines = cache.lines(key, compute)
    tally: Counter = Counter()
    for line in lines:
        v, k, n = line.split(",")
        value = Fraction(v)
        tally[(int(value) if value.denominator == 1 else value, k)] = int(n)
    logger.debug(f"Torus {measure} tally at radius {radius}: {sum(tally.values())} classes, walked l1 radius {walk}")
    return tally


def report_from_tally(
    model: str,
    F: str,
    surface: str,
    grid: Sequence[int],
    tally: Tally,
    complete: bool = True,
    seconds: float = 0.0,
) -> CountReport:
    rows = []
    for L in grid:
        by_kind = Counter()
        for (value, kind), n in tally.items():
            if value <= L:
                by_kind[kind] += n
        total = sum(by_kind.values())
        nonpa = by_kind["periodic"] + by_kind["reducible"] + by_kind["unresolved"]
        rows.append(
            CountRow(
                L=L,
                total=total,
                nonpa=nonpa,
                periodic=by_kind["periodic"],
                reducible=by_kind["reducible"],
                pa=by_kind["pa"],
                unresolved=by_kind["unresolved"],
                fraction=nonpa / total if total else 0.0,
                fraction_certified=(by_kind["periodic"] + by_kind["reducible"]) / total if total else 0.0,
                curve_orbits=total // 2 if model != "lamination" else None,
                complete=complete,
                seconds=seconds,
            )
        )
    return CountReport(model=model, F=F, surface=surface, grid=list(grid), rows=rows)


# ---------- general surfaces ----------

def _verdict_kind(kind: VerdictKind) -> str:
    return {
        VerdictKind.PERIODIC: "periodic",
        VerdictKind.REDUCIBLE: "reducible",
        VerdictKind.PA_CANDIDATE: "pa",
        VerdictKind.UNRESOLVED: "unresolved",
    }[kind]


def lamination_ball(
    spec: SurfaceSpec,
    L: int,
    word_cap: int,
    F: str = "sum",
    library: GeneratorLibrary | None = None,
    gamma0: Sequence[NormalCoords] | None = None,
) -> OrbitBall:
    if F not in F_FUNCTIONS:
        raise InvalidInputError(f"unknown weight function '{F}', expected one of {sorted(F_FUNCTIONS)}")
    library = library or default_library()
    gens = library.generators(spec)
    gamma0 = list(gamma0) if gamma0 is not None else default_marking(spec)
    return enumerate_orbit_ball(gens, gamma0, L, word_cap, F_FUNCTIONS[F])


def lamination_tally(
    spec: SurfaceSpec,
    ball: OrbitBall,
    library: GeneratorLibrary | None = None,
    budget: ClassifyBudget | None = None,
) -> Counter:
    library = library or default_library()
    tally: Counter = Counter()
    for member in ball.members:
        verdict = classify_word(library.evaluate(spec, member.word), budget)
        tally[(member.value, _verdict_kind(verdict.kind))] += 1
    return tally


def density_experiment(
    model: str,
    grid: Sequence[int],
    F: str = "sum",
    surface: str = "1,2",
    word_cap: int = 14,
    threads: int = THREADS,
    cache: ResultCache | None = None,
    library: GeneratorLibrary | None = None,
    sigma: TorusMulticurve | None = None,
    eta: TorusMulticurve | None = None,
) -> CountReport:
    """Non-pseudo-Anosov counts in the balls of the grid.

    sigma and eta only matter for torus-rho and default to the standard pair."""
    grid = list(grid)
    if not grid or any(b <= a for a, b in zip(grid, grid[1:])):
        raise InvalidInputError("the L grid must be non-empty and increasing")
    started = time.perf_counter()
    if model in ("torus", "torus-rho"):
        measure = "rho" if model == "torus-rho" else "l1"
        tally = torus_tally(max(grid), measure, threads, cache, sigma, eta)
        elapsed = time.perf_counter() - started
        logger.info(f"Torus density over {grid} took {elapsed:.2f}s")
        same = (sigma or STANDARD_PAIR) == (eta or STANDARD_PAIR)
        label = "l1" if measure == "l1" else ("rho_sigma_sigma" if same else "rho_sigma_eta")
        return report_from_tally(model, label, "1,1", grid, tally, seconds=elapsed)
    if model != "lamination":
        raise InvalidInputError(f"unknown model '{model}'")
    spec = SurfaceSpec.parse(surface)
    ball = lamination_ball(spec, max(grid), word_cap, F, library)
    tally = lamination_tally(spec, ball, library)
    elapsed = time.perf_counter() - started
    logger.info(f"Lamination density on ({spec}) over {grid} took {elapsed:.2f}s, complete={ball.complete}")
    return report_from_tally(model, F, str(spec), grid, tally, complete=ball.complete, seconds=elapsed)


# ---------- growth ----------

def growth_exponent(
    grid: Sequence[int] | CountReport,
    counts: Sequence[int] | None = None,
    top_fraction: float = TOP_FRACTION,
) -> ExponentFit:
    """Least-squares slope of log(count) against log(L) over the top of the grid."""
    if isinstance(grid, CountReport):
        if not grid.complete:
            raise InvalidInputError("refusing to fit an exponent to incomplete counts")
        counts = [r.total for r in grid.rows]
        grid = grid.grid
    grid, counts = list(grid), list(counts or [])
    if len(grid) != len(counts):
        raise InvalidInputError("grid and counts differ in length")
    if len(grid) < 4:
        raise InvalidInputError(f"need at least 4 grid points, got {len(grid)}")
    if min(counts) <= 0:
        raise InvalidInputError("counts must be positive to take logarithms")
    n = max(3, math.ceil(len(grid) * top_fraction))
    x = np.log(np.asarray(grid[-n:], dtype=float))
    y = np.log(np.asarray(counts[-n:], dtype=float))
    slope, intercept = np.polyfit(x, y, 1)
    residuals = y - (slope * x + intercept)
    spread = float(np.sum((x - x.mean()) ** 2))
    stderr = math.sqrt(float(np.sum(residuals ** 2)) / (n - 2) / spread) if spread else 0.0
    return ExponentFit(slope=float(slope), stderr=stderr, points=n)


# ---------- integral multicurves ----------

def count_integral_multicurves(surface: str | SurfaceSpec, L: int) -> int:
    """Integral multicurves of weight at most L.

    On the torus disjoint curves are parallel, so a multicurve is k copies of one slope with
    weight k(|p| + |q|) against the standard pair. Elsewhere the weight is the edge sum."""
    if L < 1:
        raise InvalidInputError("L must be positive")
    if surface == "torus":
        count = 0
        for n in range(1, L + 1):
            slopes = 2 if n == 1 else 2 * sum(1 for q in range(1, n) if math.gcd(n, q) == 1)
            count += slopes * (L // n)
        return count
    spec = surface if isinstance(surface, SurfaceSpec) else SurfaceSpec.parse(surface)
    return sum(1 for _ in iter_multicurves(build_triangulation(spec), L))


def multicurve_counts(surface: str, grid: Iterable[int]) -> list[int]:
    return [count_integral_multicurves(surface, L) for L in grid]


# ---------- empirical measures ----------

def _torus_points(radius: int) -> tuple[np.ndarray, np.ndarray, list[str]]:
    rows = list(iter_l1_ball_entries(radius))
    entries = np.asarray(rows, dtype=np.int64).reshape(-1, 4)
    norms = np.abs(entries).sum(axis=1)
    kinds = [trace_kind(*r) for r in rows]
    return entries, norms, kinds


def box_mass_series(
    model: str,
    restriction: str,
    boxes: Sequence[Box],
    grid: Sequence[int],
    k: int = 2,
    surface: str = "1,2",
    word_cap: int = 14,
    library: GeneratorLibrary | None = None,
) -> EmpiricalMeasure:
    """Counts of ball members whose normalized image falls in each box.

    Torus points are the matrix entries over L (the images of the standard pair); surface
    points are the normal coordinates of the image of the marking over L."""
    if restriction not in ("all", "nonPA", "isolated", "dense"):
        raise InvalidInputError(f"unknown restriction '{restriction}'")
    grid = list(grid)
    radius = max(grid)
    if model == "torus":
        points, values, kinds = _torus_points(radius)
        exponent = 2
        keep = np.ones(len(kinds), dtype=bool)
        if restriction != "all":
            keep = np.array([kd != "pa" for kd in kinds], dtype=bool)
        if restriction in ("isolated", "dense"):
            profile = split_isolated_dense(k, radius)
            chosen = {m.matrix for m in (profile.isolated if restriction == "isolated" else profile.dense)}
            keep = np.array([",".join(str(int(x)) for x in p) in chosen for p in points], dtype=bool)
    elif model == "lamination":
        if restriction in ("isolated", "dense"):
            raise InvalidInputError("isolated and dense restrictions need the torus model")
        spec = SurfaceSpec.parse(surface)
        library = library or default_library()
        ball = lamination_ball(spec, radius, word_cap, library=library)
        gamma0 = default_marking(spec)
        exponent = spec.dimension
        tally_kinds = []
        coords = []
        for member in ball.members:
            word = library.evaluate(spec, member.word)
            coords.append([x for c in gamma0 for x in apply_word(word, c).weights])
            if restriction == "nonPA":
                tally_kinds.append(classify_word(word).kind is not VerdictKind.PA_CANDIDATE)
            else:
                tally_kinds.append(True)
        points = np.asarray(coords, dtype=np.int64).reshape(len(coords), len(gamma0) * spec.n_edges)
        values = np.asarray([m.value for m in ball.members], dtype=np.int64)
        keep = np.asarray(tally_kinds, dtype=bool)
    else:
        raise InvalidInputError(f"unknown model '{model}'")

    counts, totals = [], []
    for L in grid:
        inside = keep & (values <= L)
        totals.append(int(inside.sum()))
        row = []
        for box in boxes:
            lo = np.asarray(box.lower, dtype=float) * L
            hi = np.asarray(box.upper, dtype=float) * L
            if len(box.lower) != points.shape[1]:
                raise InvalidInputError(f"box dimension {len(box.lower)} does not match points of dimension {points.shape[1]}")
            in_box = np.all((points >= lo) & (points <= hi), axis=1)
            row.append(int((inside & in_box).sum()))
        counts.append(row)
    return EmpiricalMeasure(
        model=model if model == "lamination" else "torus",
        restriction=restriction,
        exponent=exponent,
        boxes=list(boxes),
        grid=grid,
        counts=counts,
        totals=totals,
    )
