"""Exit criteria for the simulator.

Each test carries an ``acceptance`` marker; the conftest prints one
PASS/FAIL line per criterion at the end of the run, with the measured
values attached.  Monte Carlo checks use R = 500 replications and fixed
master seeds.
"""

import time
from fractions import Fraction

import numpy as np
import pytest

from grmsim.cli import main
from grmsim.config import config_from_dict
from grmsim.dependency import named_profile, sigma_for
from grmsim.engine import ConditionCell, PredictorSpec, expand_grid, run_grid
from grmsim.grm import Item, category_prob, category_probs, icc_above, make_thresholds, sample_response_matrix
from grmsim.report import SUMMARY_FILE, read_summaries, summarize_curves
from grmsim.stats import ols_simple, spearman

MASTER_SEED = 20240601
R = 500
PROFILES = ("small", "medium", "large")


@pytest.fixture(scope="module")
def dependency_runs(tmp_path_factory):
    """Full dependency grid (3 profiles x K 2..20 x J {1,3} x N {100,500,1000}) run twice via the CLI."""
    base = tmp_path_factory.mktemp("dependency")
    cfg = base / "dependency.yaml"
    cfg.write_text(f"mode: dependency\nprofile: [small, medium, large]\nreplications: {R}\nmaster_seed: {MASTER_SEED}\n")
    dirs = {}
    for workers in (1, 2):
        out = base / f"workers{workers}"
        start = time.perf_counter()
        code = main(["run", "--config", str(cfg), "--out", str(out), "--workers", str(workers), "--no-charts"])
        assert code == 0
        dirs[workers] = (out, time.perf_counter() - start)
    return dirs


@pytest.fixture(scope="module")
def dependency_summaries(dependency_runs):
    return read_summaries(dependency_runs[1][0] / SUMMARY_FILE)


def _by_profile(summaries, items, n):
    out = {}
    for name in PROFILES:
        p = named_profile(name)
        out[name] = {
            s.cell.num_categories: s
            for s in summaries
            if s.cell.num_items == items and s.cell.sample_size == n and s.cell.sigma == sigma_for(p, s.cell.num_categories)
        }
    return out


@pytest.mark.acceptance("C1 sampler vs analytic category probabilities (20 triples, 1e6 draws, max|diff| < 0.005, < 30 s)")
def test_c1_sampler_matches_analytic(record_property):
    pick = np.random.default_rng(101)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(20):
        theta = float(pick.uniform(-3, 3))
        k = int(pick.integers(2, 101))
        sigma = float(pick.uniform(0.05, 2.0))
        item = Item.with_categories(k, sigma)
        draws = sample_response_matrix(np.full(1_000_000, theta), [item], pick).responses[:, 0]
        freq = np.bincount(draws, minlength=k + 1)[1:] / draws.size
        worst = max(worst, float(np.max(np.abs(freq - category_probs(theta, item)))))
    elapsed = time.perf_counter() - start
    record_property("max_abs_diff", f"{worst:.5f}")
    record_property("seconds", f"{elapsed:.1f}")
    assert worst < 0.005
    assert elapsed < 30


@pytest.mark.acceptance("C2 normalization, consistency, monotone ICC, threshold symmetry (exhaustive grid, 1e-12)")
def test_c2_grm_invariants(record_property):
    thetas = np.round(np.arange(-40, 41) * 0.1, 10)
    worst_norm = worst_cons = 0.0
    for k in (2, 3, 5, 7, 10, 20, 50, 100):
        values = np.array(make_thresholds(k))
        assert np.array_equal(values, -values[::-1])
        for sigma in (0.05, 0.1, 0.5, 1.0, 2.0):
            item = Item.with_categories(k, sigma)
            probs = np.array([category_prob(thetas, c, item) for c in range(1, k + 1)])
            iccs = np.array([icc_above(thetas, c, item) for c in range(0, k + 1)])
            worst_norm = max(worst_norm, float(np.max(np.abs(probs.sum(axis=0) - 1))))
            worst_cons = max(worst_cons, float(np.max(np.abs(probs - (iccs[:-1] - iccs[1:])))))
            assert np.all(np.diff(iccs, axis=1) >= 0)
            assert np.all(np.diff(iccs, axis=0) <= 0)
            live = (iccs[:, :-1] > 0) & (iccs[:, 1:] < 1)
            assert np.all(np.diff(iccs, axis=1)[live] > 0)
    record_property("max_norm_err", f"{worst_norm:.1e}")
    record_property("max_consistency_err", f"{worst_cons:.1e}")
    assert worst_norm <= 1e-12
    assert worst_cons <= 1e-12


@pytest.mark.acceptance("C3 plateau: sigma=0.3, J=1, N=1000 -> rho(100)-rho(10) < 0.01, rho(10)-rho(2) > 0.03, < 2 min")
def test_c3_plateau(record_property):
    cells = [ConditionCell(k, 0.3, 1, 1000, R) for k in (2, 10, 100)]
    start = time.perf_counter()
    out = {s.cell.num_categories: s.mean_spearman for s in run_grid(cells, PredictorSpec(), MASTER_SEED)}
    elapsed = time.perf_counter() - start
    record_property("rho", {k: round(v, 4) for k, v in out.items()})
    record_property("seconds", f"{elapsed:.1f}")
    assert out[100] - out[10] < 0.01
    assert out[10] - out[2] > 0.03
    assert elapsed < 120


@pytest.fixture(scope="module")
def optimum_run():
    cfg = config_from_dict(
        {"mode": "dependency", "items_values": [1], "sample_sizes": [1000], "replications": R, "master_seed": MASTER_SEED}
    )
    start = time.perf_counter()
    summaries = run_grid(expand_grid(cfg), cfg.predictor, cfg.master_seed)
    return cfg, summaries, time.perf_counter() - start


@pytest.mark.acceptance("C4 dependency optima: argmax K large 4+-1, medium 5+-1, small 7+-2; large drop > 0.05; < 5 min")
def test_c4_optima(optimum_run, record_property):
    cfg, summaries, elapsed = optimum_run
    report = summarize_curves(summaries, "spearman", line_by="profile", profiles=cfg.profiles)
    best = report.optima.set_index("profile")["best_k"].to_dict()
    curve = report.curves[report.curves["profile"] == "large"].set_index("k")["spearman"]
    drop = float(curve[best["large"]] - curve[20])
    record_property("argmax", best)
    record_property("large_drop", f"{drop:.3f}")
    record_property("seconds", f"{elapsed:.1f}")
    assert abs(best["large"] - 4) <= 1
    assert abs(best["medium"] - 5) <= 1
    assert abs(best["small"] - 7) <= 2
    assert drop > 0.05
    assert elapsed < 300


@pytest.mark.acceptance("C5 ordering small > medium > large at every K in 4..20 (J=1, N=1000)")
def test_c5_profile_ordering(optimum_run, record_property):
    _, summaries, _ = optimum_run
    curves = _by_profile(summaries, 1, 1000)
    gaps = []
    for k in range(4, 21):
        s, m, lg = (curves[p][k].mean_spearman for p in PROFILES)
        gaps.append(min(s - m, m - lg))
        assert s > m > lg, k
    record_property("min_gap", f"{min(gaps):.4f}")


@pytest.mark.acceptance("C6 SE falls with N in every cell; large profile N=100 J=1: SE(K=20) > SE(K=5)")
def test_c6_standard_error(dependency_summaries, record_property):
    by_key = {s.cell.key: s.mean_slope_se for s in dependency_summaries}
    checked = 0
    for (k, sigma, items, n), se in by_key.items():
        if n != 100:
            continue
        se500, se1000 = by_key[(k, sigma, items, 500)], by_key[(k, sigma, items, 1000)]
        assert se1000 < se500 < se, (k, sigma, items)
        checked += 1
    large = _by_profile(dependency_summaries, 1, 100)["large"]
    se = {k: large[k].mean_slope_se for k in large}
    interior_min = min(se, key=se.get)
    record_property("cells_checked", checked)
    record_property("large_se_k5", f"{se[5]:.4f}")
    record_property("large_se_k20", f"{se[20]:.4f}")
    record_property("large_se_argmin", interior_min)
    assert checked == 3 * 19 * 2
    assert se[20] > se[5]
    assert 2 < interior_min < 20


@pytest.mark.acceptance("C7 item count: rho(J=3) - rho(J=1) > 0.02 at sigma=1.0, K=5, N=1000")
def test_c7_item_count(record_property):
    cells = [ConditionCell(5, 1.0, j, 1000, R) for j in (1, 3)]
    out = {s.cell.num_items: s.mean_spearman for s in run_grid(cells, PredictorSpec(), MASTER_SEED)}
    record_property("gain", f"{out[3] - out[1]:.4f}")
    assert out[3] - out[1] > 0.02


@pytest.mark.acceptance("C8 determinism: dependency grid, same seed, 1 vs 2 workers -> byte-identical cell_summaries.csv")
def test_c8_determinism(dependency_runs, record_property):
    (one, t1), (two, t2) = dependency_runs[1], dependency_runs[2]
    a = (one / SUMMARY_FILE).read_bytes()
    b = (two / SUMMARY_FILE).read_bytes()
    record_property("rows", a.count(b"\n") - 1)
    record_property("seconds", f"{t1:.0f}/{t2:.0f}")
    assert a == b
    assert a.count(b"\n") - 1 == 3 * 19 * 2 * 3


@pytest.mark.acceptance("C9 stats oracles: spearman and ols_simple hand-computed values to 1e-9")
def test_c9_stats_oracles():
    # ranks [1,2,3,4] vs [1.5,1.5,3.5,3.5]: cov 4, variances 5 and 4
    assert spearman([1, 2, 3, 4], [1, 1, 2, 2]) == pytest.approx(4 / 20**0.5, abs=1e-9)
    # Sxx = 5, Sxy = 3, RSS = 1/5 -> se^2 = (1/5) / 2 / 5
    fit = ols_simple([1, 2, 2, 3], [1, 2, 3, 4])
    assert fit.slope == pytest.approx(float(Fraction(3, 5)), abs=1e-9)
    assert fit.slope_se == pytest.approx(float(Fraction(1, 50)) ** 0.5, abs=1e-9)
