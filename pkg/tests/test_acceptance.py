"""Acceptance gate: one test group per criterion, summarised by conftest.

The 100,000-trial table runs draw end points from their exact law (the
"endpoint" sampler) unless ANGELCAGE_FULL_WALKS=1 is set, in which case every
step of every walk is simulated.  The 10,000-trial planar run always walks.
"""

import math
import os
import time

import pytest

from angelcage.analytic import (
    cage_prob_2d,
    cage_prob_even,
    cage_prob_odd,
    make_plan,
    radial_quadrature_oracle,
    threshold_k_2d,
)
from angelcage.exact_dist import pmf_convolve_oracle, pmf_exact, walk_count
from angelcage.lattice import ball_volume, count_ball_exact, count_disk_hcv
from angelcage.montecarlo import SimulationConfig, avg_distance_curve, run_simulation
from angelcage.tables import reproduce

SEED = 7
FULL = 100_000
FULL_SAMPLER = "walk" if os.environ.get("ANGELCAGE_FULL_WALKS") == "1" else "endpoint"


def crit(number, title):
    return pytest.mark.criterion(number, title)


def table_summary(results):
    return ", ".join(f"k={r.cell.inner_k}:{r.measured:.5f}" for r in results)


@crit(1, "threshold rule reproduces the published planar radii")
def test_criterion_1_thresholds(note):
    expected = {
        (0.5, 1): 13, (0.5, 3): 142, (0.5, 10): 3519,
        (0.1, 1): 40, (0.1, 3): 465, (0.1, 10): 11677,
        (0.01, 1): 79, (0.01, 3): 928, (0.01, 10): 23347,
    }
    t0 = time.perf_counter()
    got = {(eps, c): threshold_k_2d(c, eps) for eps, c in expected}
    elapsed = time.perf_counter() - t0
    note("9/9 exact" if got == expected else f"mismatch {got}")
    assert got == expected
    assert elapsed < 1.0


@crit(2, "planar success rates (table1)")
def test_criterion_2_table1_full(note):
    results = reproduce("table1", FULL, SEED, sampler=FULL_SAMPLER)
    for r in results:
        assert r.tolerance == 0.02
    bad = [r for r in results if not r.passed]
    note(f"{FULL} trials ({FULL_SAMPLER}) {len(results) - len(bad)}/9 within 0.02")
    assert [r.cell.expected for r in results] == [
        0.52833, 0.50243, 0.50173, 0.90739, 0.90102, 0.90102, 0.99059, 0.99019, 0.99032
    ]
    assert not bad, table_summary(bad)


@crit(2, "planar success rates (table1)")
def test_criterion_2_table1_reduced(note):
    t0 = time.perf_counter()
    results = reproduce("table1", 10_000, SEED, sampler="walk")
    elapsed = time.perf_counter() - t0
    for r in results:
        assert r.tolerance == pytest.approx(0.05)
    bad = [r for r in results if not r.passed]
    note(f"10000 walks {len(results) - len(bad)}/9 within 0.05 in {elapsed:.0f}s")
    assert not bad, table_summary(bad)
    assert elapsed < 600


@crit(3, "3-D and 4-D rates (table2) and 3-D bounds")
def test_criterion_3_table2(note):
    results = reproduce("table2", FULL, SEED, sampler=FULL_SAMPLER)
    three = [r for r in results if r.cell.dim == 3]
    four = [r for r in results if r.cell.dim == 4]
    assert [r.cell.inner_k for r in three] == [10, 50, 100]
    assert [r.cell.inner_k for r in four] == [5, 10, 25]
    note(f"{FULL_SAMPLER} 3-D {table_summary(three)}; 4-D max {max(r.measured for r in four):.5f}")
    for r in three:
        assert abs(r.measured - r.cell.expected) <= 0.0015
        assert r.bounds_ok
    for r in four:
        assert r.measured <= 0.0001
    assert all(r.passed for r in results)


@crit(4, "exact PMF equals convolution oracle")
def test_criterion_4_exact_vs_oracle(note):
    t0 = time.perf_counter()
    for c in range(0, 5):
        for l in range(1, 9):
            assert pmf_exact(c, l) == pmf_convolve_oracle(c, l)
            total = sum(walk_count(c, l, k) for k in range(-c * l, c * l + 1))
            assert total == (2 * c + 1) ** l
    elapsed = time.perf_counter() - t0
    note("40 (c, l) pairs exact")
    assert elapsed < 5


@crit(5, "lattice counting")
def test_criterion_5_counting(note):
    t0 = time.perf_counter()
    for r in range(0, 51):
        assert count_disk_hcv(r) == count_ball_exact(2, r)
    ratios = {}
    for n, r in [(2, 50), (3, 20)]:
        ratios[(n, r)] = ball_volume(n, r) / count_ball_exact(n, r)
        assert abs(ratios[(n, r)] - 1) <= 0.05
    elapsed = time.perf_counter() - t0
    note("volume/count " + ", ".join(f"{k}:{v:.4f}" for k, v in ratios.items()))
    assert elapsed < 30


@crit(6, "series agree with radial quadrature")
def test_criterion_6_series_vs_quadrature(note):
    t0 = time.perf_counter()
    worst = 0.0
    for n in range(2, 8):
        for c in (1, 2):
            for k in (5, 10, 20):
                plan = make_plan(n, c, k)
                series = (cage_prob_even if n % 2 == 0 else cage_prob_odd)(n, c, k).value
                oracle = radial_quadrature_oracle(n, plan.sigma_sq, k).value
                worst = max(worst, abs(series - oracle))
    elapsed = time.perf_counter() - t0
    note(f"max |diff| {worst:.1e}")
    assert worst <= 1e-8
    assert elapsed < 5


@crit(7, "analytic vs empirical")
def test_criterion_7_analytic_vs_empirical(note):
    config = SimulationConfig(make_plan(2, 1, 40), FULL, SEED)
    simulated = run_simulation(config).caged_rate
    analytic = cage_prob_2d(1, 40).value
    odd = cage_prob_odd(3, 1, 10).value
    note(f"planar {analytic:.5f} vs {simulated:.5f}; 3-D series {odd:.5f} vs 0.00371")
    assert abs(analytic - simulated) <= 0.02
    assert odd == pytest.approx(0.00379, abs=5e-6)
    assert abs(odd - 0.00371) <= 0.001


@crit(8, "caging probability vanishes in 4 and 5 dimensions")
def test_criterion_8_vanishing(note):
    ks = [5, 10, 25, 50]
    seqs = {
        4: [cage_prob_even(4, 1, k).value for k in ks],
        5: [cage_prob_odd(5, 1, k).value for k in ks],
    }
    note("; ".join(f"n={n} " + ",".join(f"{v:.2e}" for v in s) for n, s in seqs.items()))
    for s in seqs.values():
        assert all(a > b for a, b in zip(s, s[1:]))
        assert s[2] < 1e-4 and s[3] < 1e-4


@crit(9, "simulation is thread-count independent")
def test_criterion_9_determinism(note):
    config = SimulationConfig(make_plan(2, 1, 13), 10_000, SEED)
    reports = [run_simulation(config, threads=t) for t in (1, 2, 8)]
    counts = {(r.caged_count, r.never_left_count) for r in reports}
    note(f"counts {sorted(counts)}")
    assert len(counts) == 1


@crit(10, "mean distance curves")
def test_criterion_10_distance_curves(note):
    t = 10_000
    finals = {n: avg_distance_curve(n, 1, t, 1000, SEED)[t] for n in (2, 3, 4, 5)}
    # 10,000 walks keep the 1-D standard error near 0.6%, well inside 3%
    curve = avg_distance_curve(1, 1, t, 10_000, SEED)
    rel = {s: curve[s] / math.sqrt(4 * s / (3 * math.pi)) - 1 for s in (1000, 10_000)}
    note(
        "n=2..5 " + ",".join(f"{v:.1f}" for v in finals.values())
        + "; 1-D rel err " + ",".join(f"{v:+.2%}" for v in rel.values())
    )
    values = list(finals.values())
    assert all(a < b for a, b in zip(values, values[1:]))
    assert all(abs(v) <= 0.03 for v in rel.values())
