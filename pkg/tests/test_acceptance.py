"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Seeds are pinned; the statistical thresholds are contracts on these seeds.
"""
import csv
import itertools
import json
import math
import time
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from cadec.ca import LazyRule, Period, brute_force_longest_period, evolve_ring, temporal_period
from cadec.dec import build_dec, longest_period
from cadec.harness import ExperimentSpec, run_experiment
from cadec.necklace import build_vertex_set, class_of
from cadec.numtheory import count_aperiodic
from cadec.stochastic import pmf_cyclic_points

from conftest import TILE_ROWS, naive_min_period, word


@pytest.fixture
def report(capsys):
    def emit(num, name, ok, detail, elapsed, budget):
        ok = bool(ok) and elapsed <= budget
        with capsys.disabled():
            print(f"\ncriterion {num:2d} {'PASS' if ok else 'FAIL'}  {name}: {detail} "
                  f"[{elapsed:.1f}s / " + (f"{budget:g}s]" if budget < math.inf else "no limit]"))
        return ok
    return emit


def test_c01_necklace_counts(report):
    t = time.perf_counter()
    bad = []
    for sigma in range(1, 6):
        for n in range(1, 9):
            brute = sum(1 for s in itertools.product(range(n), repeat=sigma)
                        if naive_min_period(s) == sigma)
            if brute != count_aperiodic(sigma, n):
                bad.append((sigma, n))
    el = time.perf_counter() - t
    assert report(1, "exact necklace counts", not bad, f"mismatches={bad}", el, 1.0)


def test_c02_paper_tile(report, tile_rule):
    t = time.perf_counter()
    tau = temporal_period(tile_rule, word("012", 3))
    rows, w = [], word("012", 3)
    for _ in range(6):
        rows.append(str(w))
        w = evolve_ring(tile_rule, w)
    ok = tau == Period(6) and rows == TILE_ROWS and str(w) == "012"
    el = time.perf_counter() - t
    assert report(2, "paper tile", ok, f"period={tau} rows={rows}", el, 1.0)


def test_c03_oracle_equivalence(report):
    t = time.perf_counter()
    bad, checked = 0, 0
    for sigma, n_max, seeds in ((2, 5, 200), (3, 4, 100)):
        for n in range(1, n_max + 1):
            for seed in range(seeds):
                rule = LazyRule(n, sigma, 31_000 + seed)
                checked += 1
                bad += longest_period(build_dec(rule, sigma)) != brute_force_longest_period(rule, sigma)
    el = time.perf_counter() - t
    assert report(3, "oracle equivalence of X", bad == 0,
                  f"{checked} rules, mismatches={bad}", el, 30.0)


def test_c04_edge_law(report):
    t = time.perf_counter()
    vs = build_vertex_set(5, 2)
    u = class_of(word("01", 5), vs)
    m = 100_000
    targets = np.empty(m, dtype=np.int64)
    for s in range(m):
        targets[s] = vs.vertex_of[evolve_ring(LazyRule(5, 2, 4_000_000 + s), word("01", 5)).code]
    assert targets[0] == build_dec(LazyRule(5, 2, 4_000_000), 2, vs).successor[u]
    freq = np.bincount(targets, minlength=vs.n_total) / m
    worst = 0.0
    for v in range(vs.n_total):
        p = 1 / 25 if v == vs.v0_id else 2 / 25
        worst = max(worst, abs(freq[v] - p) / math.sqrt(p * (1 - p) / m))
    el = time.perf_counter() - t
    assert report(4, "edge law", worst <= 4, f"max |z| = {worst:.2f} over {vs.n_total} targets",
                  el, 120.0)


def test_c05_expanding_law(report):
    t = time.perf_counter()
    st = run_experiment(ExperimentSpec("expanding_law", [8], 4, 4, 4000, seed=20240611))
    chi = st.tests["chi_square"]
    ok = chi["count"] >= 10_000 and chi["pvalue"] > 0.01
    el = time.perf_counter() - t
    assert report(5, "expanding-number law", ok,
                  f"cycles={chi['count']} p={chi['pvalue']:.3f}", el, 300.0)


def test_c06_figure3(report, tmp_path):
    t = time.perf_counter()
    st = run_experiment(ExperimentSpec("cemetery_histogram", [100], 2, 2, 10_000, seed=3,
                                       output_dir=str(tmp_path)))
    el = time.perf_counter() - t
    assert report(6, "C/N histogram vs limit CDF", st.ks_statistic <= 0.06,
                  f"KS={st.ks_statistic:.4f}", el, 600.0)


def test_c07_algorithm1(report):
    t = time.perf_counter()
    st = run_experiment(ExperimentSpec("algo1_vs_dec", [30], 2, 2, 2000, seed=7))
    el = time.perf_counter() - t
    assert report(7, "Algorithm 1 fidelity", st.ks_pvalue > 0.01,
                  f"two-sample KS={st.ks_statistic:.4f} p={st.ks_pvalue:.3f}", el, 300.0)


def test_c08_sde(report):
    t = time.perf_counter()
    st = run_experiment(ExperimentSpec("eta_vs_density", [1], 2, 2, 10_000, seed=8, dt=1e-4))
    el = time.perf_counter() - t
    assert report(8, "SDE vs closed form", st.ks_statistic <= 0.05,
                  f"KS={st.ks_statistic:.4f}", el, 300.0)


def test_c09_odd_sigma(report):
    t = time.perf_counter()
    st = run_experiment(ExperimentSpec("cemetery_histogram", [30], 3, 3, 500, seed=9))
    mean = st.points[0]["mean"]
    el = time.perf_counter() - t
    assert report(9, "odd-sigma degeneracy", mean >= 0.95, f"mean C/N={mean:.4f}", el, 600.0)


def test_c10_scaling(report):
    t = time.perf_counter()
    ns = list(range(5, 101, 5))
    slopes = {}
    for sigma in (1, 2):
        st = run_experiment(ExperimentSpec("longest_period_scaling", ns, sigma, 2, 1000,
                                           seed=10 + sigma))
        slopes[sigma] = st.slope
    ok = 0.4 <= slopes[1] <= 0.6 and 0.9 <= slopes[2] <= 1.1
    el = time.perf_counter() - t
    assert report(10, "longest-period scaling", ok,
                  f"slope(sigma=1)={slopes[1]:.3f} slope(sigma=2)={slopes[2]:.3f}", el, 1800.0)


def test_c11_mapping_law(report):
    t = time.perf_counter()
    st = run_experiment(ExperimentSpec("mapping_stats", [100], 1, 1, 100_000, seed=11))
    p = st.tests["chi_square"]["pvalue"]
    sums = {N: math.fsum(pmf_cyclic_points(N, s) for s in range(1, N + 1)) for N in (10, 100, 1000)}
    ok = p > 0.01 and all(abs(v - 1) <= 1e-12 for v in sums.values())
    el = time.perf_counter() - t
    detail = f"p={p:.3f} pmf sums " + " ".join(f"N={N}:{v - 1:+.1e}" for N, v in sums.items())
    assert report(11, "cyclic-point law", ok, detail, el, 120.0)


def _structural(out, samples):
    with open(out / "raw_samples.csv", newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    summary = json.loads((out / "summary.json").read_text(encoding="utf-8"))
    root = ET.parse(out / "plot.svg").getroot()
    h = summary["histogram"]
    widths = np.diff(h["edges"])
    return (len(rows) == samples
            and all(0.0 <= float(r["value"]) <= 1.0 for r in rows)
            and b"\r" not in (out / "raw_samples.csv").read_bytes()
            and root.tag.endswith("svg") and root.get("version") == "1.1"
            and abs(math.fsum(h["masses"]) - 1) <= 1e-12
            and abs(math.fsum(d * w for d, w in zip(h["densities"], widths)) - 1) <= 1e-12
            and any("sigma > r" in note for note in summary["notes"]))


def test_c12_conjecture_artifacts(report, tmp_path):
    t = time.perf_counter()
    ok, means = True, {}
    for sigma in (3, 4):
        out = tmp_path / f"sigma{sigma}"
        st = run_experiment(ExperimentSpec("cemetery_histogram", [50], sigma, 2, 1000,
                                           seed=12, output_dir=str(out)))
        ok &= _structural(out, 1000)
        means[sigma] = st.points[0]["mean"]
    el = time.perf_counter() - t
    detail = "files well-formed, masses normalized; " + " ".join(
        f"mean C/N(sigma={s})={m:.3f}" for s, m in means.items())
    assert report(12, "conjecture-mode artifacts", ok, detail, el, math.inf)
