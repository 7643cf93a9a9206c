import math
from collections import Counter
from fractions import Fraction
from itertools import product

import pytest
from pydantic import ValidationError

from genericity.core.errors import InvalidInputError
from genericity.models.torus import IntMatrix2, TorusMulticurve
from genericity.schemas.reports import Box, CountRow
from genericity.services.cache import ResultCache
from genericity.services.exact_torus import rho_sigma_eta
from genericity.services.experiments import (
    box_mass_series,
    count_integral_multicurves,
    density_experiment,
    growth_exponent,
    multicurve_counts,
    report_from_tally,
    shards,
    torus_tally,
)
from genericity.services.plots import emit_plot_data

UNIT_BOX = Box(lower=[-1, -1, -1, -1], upper=[1, 1, 1, 1])


def kind_of(a, b, c, d):
    t = abs(a + d)
    if t < 2 or (b == 0 and c == 0):
        return "periodic"
    return "reducible" if t == 2 else "pa"


def entry_scan_tally(radius):
    tally = Counter()
    for a, b, c, d in product(range(-radius, radius + 1), repeat=4):
        norm = abs(a) + abs(b) + abs(c) + abs(d)
        if a * d - b * c != 1 or norm > radius:
            continue
        tally[(norm, kind_of(a, b, c, d))] += 1
    return tally


def solved_sl2(bound):
    """Every determinant-one matrix of l1 norm at most bound, found from a, b, c alone."""
    for a in range(-bound, bound + 1):
        for b in range(abs(a) - bound, bound - abs(a) + 1):
            room = bound - abs(a) - abs(b)
            for c in range(-room, room + 1):
                left = room - abs(c)
                if a:
                    d, rest = divmod(1 + b * c, a)
                    if rest == 0 and abs(d) <= left:
                        yield a, b, c, d
                elif b * c == -1:
                    for d in range(-left, left + 1):
                        yield a, b, c, d


def solved_scan_tally(radius):
    tally = Counter()
    for a, b, c, d in solved_sl2(radius):
        tally[(abs(a) + abs(b) + abs(c) + abs(d), kind_of(a, b, c, d))] += 1
    return tally


# ---------- torus densities ----------

def test_smallest_balls_are_all_non_pseudo_anosov():
    report = density_experiment("torus", [2, 3])
    first, second = report.rows
    assert (first.total, first.nonpa, first.periodic, first.reducible, first.fraction) == (4, 4, 4, 0, 1.0)
    assert (second.total, second.periodic, second.reducible, second.pa) == (20, 12, 8, 0)
    assert report.columns == ["L", "total", "nonpa", "periodic", "reducible", "fraction"]


def test_tally_matches_an_entry_scan():
    assert torus_tally(7, threads=1) == entry_scan_tally(7)


def test_solved_scan_agrees_with_the_full_scan():
    assert solved_scan_tally(9) == entry_scan_tally(9)


@pytest.mark.slow
def test_tally_matches_a_solved_scan_at_radius_100():
    tally = torus_tally(100, threads=2)
    assert tally == solved_scan_tally(100)
    assert sum(tally.values()) == 24340


def test_rho_ball_for_a_non_standard_pair():
    sigma = TorusMulticurve.parse("1,0:1;1,1:1")
    eta = TorusMulticurve.standard_pair()
    radius = 12
    expected = Counter()
    for a, b, c, d in solved_sl2(4 * radius):
        value = rho_sigma_eta(sigma, eta, IntMatrix2(a, b, c, d))
        if value <= radius:
            expected[(int(value), kind_of(a, b, c, d))] += 1
    tally = torus_tally(radius, "rho", threads=1, sigma=sigma, eta=eta)
    assert tally == expected
    assert tally != torus_tally(radius, "rho", threads=1)
    report = density_experiment("torus-rho", [6, radius], sigma=sigma, eta=eta)
    assert report.F == "rho_sigma_eta"
    assert report.rows[-1].total == sum(expected.values())


def test_rho_pair_is_part_of_the_cache_key(cache_dir):
    cache = ResultCache(cache_dir)
    sigma = TorusMulticurve.parse("1,0:2;0,1:1")
    torus_tally(8, "rho", cache=cache)
    torus_tally(8, "rho", cache=cache, sigma=sigma)
    assert len(list(cache_dir.iterdir())) == 2


def test_l1_and_rho_models_agree():
    grid = [5, 10, 20]
    assert density_experiment("torus", grid).records() == density_experiment("torus-rho", grid).records()


def test_thread_count_does_not_change_the_tally():
    assert torus_tally(30, threads=3) == torus_tally(30, threads=1)


def test_shards_cover_the_first_entries():
    parts = shards(10, 4)
    assert sorted(v for part in parts for v in part) == list(range(-10, 11))


def test_non_pa_fraction_decreases():
    report = density_experiment("torus", [25, 50, 100, 200])
    fractions = [r.fraction for r in report.rows]
    assert fractions[-1] < fractions[0]
    assert all(r.curve_orbits == r.total // 2 for r in report.rows)


@pytest.mark.slow
def test_non_pa_fraction_keeps_falling_on_the_default_grid():
    report = density_experiment("torus", [50, 100, 200, 400, 800, 1600], threads=2)
    fractions = [r.fraction for r in report.rows]
    rises = [(b - a) / a for a, b in zip(fractions, fractions[1:]) if b > a]
    assert len(rises) <= 1
    assert all(rise < 0.05 for rise in rises)
    assert fractions[-1] * 4 < fractions[0]


def test_tallies_are_cached(cache_dir):
    cache = ResultCache(cache_dir)
    first = torus_tally(12, cache=cache)
    assert len(list(cache_dir.iterdir())) == 1
    assert torus_tally(12, cache=cache) == first


def test_report_without_non_pa_members():
    report = report_from_tally("torus", "l1", "1,1", [3, 4], {(3, "pa"): 5})
    assert [r.fraction for r in report.rows] == [0.0, 0.0]
    assert [r.nonpa for r in report.rows] == [0, 0]


def test_rows_are_validated():
    with pytest.raises(ValidationError):
        CountRow(L=1, total=2, nonpa=1, periodic=1, reducible=0, pa=0, fraction=0.5)
    with pytest.raises(ValidationError):
        CountRow(L=1, total=1, nonpa=1, periodic=1, reducible=0, pa=0, fraction=1.5)


def test_bad_grids_and_models_are_refused():
    with pytest.raises(InvalidInputError):
        density_experiment("torus", [10, 5])
    with pytest.raises(InvalidInputError):
        density_experiment("sphere", [5])


# ---------- lamination densities ----------

def test_lamination_density_on_the_torus(library):
    report = density_experiment("lamination", [4, 8, 12], surface="1,1", word_cap=64, library=library)
    assert report.complete
    assert report.columns[-3:] == ["unresolved", "fraction_certified", "complete"]
    assert [r.total for r in report.rows] == sorted(r.total for r in report.rows)
    first = report.rows[0]
    # I, S and two rotations of order three, plus the twists T and L
    assert (first.total, first.periodic, first.reducible) == (6, 4, 2)


@pytest.mark.slow
def test_non_pa_fraction_falls_on_the_twice_punctured_torus(library):
    grid = [10, 20, 40, 80]
    report = density_experiment("lamination", grid, surface="1,2", word_cap=24, library=library)
    certified = [r.fraction_certified for r in report.rows]
    assert certified[-1] < certified[1] <= certified[0]
    assert all(r.unresolved < 0.2 * r.total for r in report.rows)
    again = density_experiment("lamination", grid, surface="1,2", word_cap=24, library=library, threads=3)
    assert again.records() == report.records()


def test_lamination_density_on_the_five_punctured_sphere(library):
    report = density_experiment("lamination", [48, 60], surface="0,5", word_cap=8, library=library)
    first = report.rows[0]
    # the identity and whatever else preserves the marking weight
    assert first.total >= 1
    assert first.periodic >= 1
    assert report.rows[1].total >= first.total


# ---------- growth exponents ----------

def test_growth_exponent_of_synthetic_counts():
    grid = [10, 20, 40, 80, 160, 320]
    fit = growth_exponent(grid, [7 * L ** 2 for L in grid])
    assert fit.slope == pytest.approx(2.0, abs=1e-3)
    assert fit.points == 3
    fit = growth_exponent(grid, [round(5 * L ** 3.1) for L in grid], top_fraction=1.0)
    assert fit.slope == pytest.approx(3.1, abs=1e-3)
    assert fit.points == 6


def test_growth_exponent_needs_enough_complete_points():
    with pytest.raises(InvalidInputError):
        growth_exponent([10, 20, 40], [1, 2, 3])
    with pytest.raises(InvalidInputError):
        growth_exponent([10, 20, 40, 80], [1, 2, 0, 4])
    partial = report_from_tally("lamination", "sum", "1,2", [1, 2, 3, 4], {(1, "pa"): 1}, complete=False)
    with pytest.raises(InvalidInputError):
        growth_exponent(partial)


def test_torus_growth_is_quadratic():
    report = density_experiment("torus", [25, 50, 100, 200])
    assert growth_exponent(report).slope == pytest.approx(2.0, abs=0.1)


# ---------- integral multicurves ----------

def test_torus_multicurve_counts():
    assert count_integral_multicurves("torus", 1) == 2
    assert count_integral_multicurves("torus", 2) == 6
    # every nonzero lattice vector up to sign is a multiple of one slope
    assert multicurve_counts("torus", range(1, 31)) == [L * (L + 1) for L in range(1, 31)]


def test_torus_multicurve_exponent():
    grid = [16, 32, 64, 128, 256, 512]
    assert growth_exponent(grid, multicurve_counts("torus", grid)).slope == pytest.approx(2.0, abs=0.05)


def test_multicurves_on_a_triangulated_surface():
    assert count_integral_multicurves("1,1", 2) == 3
    counts = multicurve_counts("1,2", [2, 4, 6])
    assert counts == sorted(counts)
    with pytest.raises(InvalidInputError):
        count_integral_multicurves("torus", 0)


# ---------- empirical measures ----------

def test_unit_box_holds_the_whole_ball():
    measure = box_mass_series("torus", "all", [UNIT_BOX], [10, 20])
    assert [row[0] for row in measure.counts] == measure.totals
    report = density_experiment("torus", [10, 20])
    assert measure.totals == [r.total for r in report.rows]
    assert measure.mass(1, 0) == measure.total_mass(1)
    assert measure.mass(1, 0) == Fraction(report.rows[1].total, 400)


def test_non_pa_box_mass_matches_the_density():
    measure = box_mass_series("torus", "nonPA", [UNIT_BOX], [10, 20, 40])
    report = density_experiment("torus", [10, 20, 40])
    assert measure.totals == [r.nonpa for r in report.rows]


def test_isolated_and_dense_split_the_non_pa_mass():
    isolated = box_mass_series("torus", "isolated", [UNIT_BOX], [20], k=2)
    dense = box_mass_series("torus", "dense", [UNIT_BOX], [20], k=2)
    non_pa = box_mass_series("torus", "nonPA", [UNIT_BOX], [20])
    assert isolated.totals[0] + dense.totals[0] == non_pa.totals[0]


@pytest.mark.slow
def test_box_mass_settles_and_non_pa_mass_drains():
    grid = [200, 400, 800, 1600]
    every = box_mass_series("torus", "all", [UNIT_BOX], grid)
    last, before = every.total_mass(3), every.total_mass(2)
    assert abs(last - before) / before < Fraction(1, 10)
    non_pa = box_mass_series("torus", "nonPA", [UNIT_BOX], grid)
    assert non_pa.total_mass(3) * 4 < non_pa.total_mass(0)


def test_box_dimension_must_match():
    with pytest.raises(InvalidInputError):
        box_mass_series("torus", "all", [Box(lower=[0, 0], upper=[1, 1])], [5])
    with pytest.raises(InvalidInputError):
        box_mass_series("torus", "some", [UNIT_BOX], [5])


def test_lamination_box_mass(library):
    box = Box(lower=[0] * 6, upper=[1] * 6)
    measure = box_mass_series("lamination", "all", [box], [8], surface="1,1", word_cap=64, library=library)
    assert measure.exponent == 2
    assert measure.counts[0][0] == measure.totals[0] > 0


# ---------- plot data ----------

def test_plot_data_files(tmp_path):
    report = density_experiment("torus", [5, 10, 20])
    fraction_path, loglog_path = emit_plot_data(report, tmp_path / "plots")
    lines = fraction_path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "L,fraction"
    assert len(lines) == 4
    first = loglog_path.read_text(encoding="utf-8").splitlines()[1].split(",")
    assert float(first[0]) == pytest.approx(math.log(5))
