"""Release gate.

One test per shipping criterion; each prints a PASS/FAIL line so the run
log reads as a checklist.  Tolerances are part of the contract and are
not to be loosened: exact identities get 1e-10 or tighter, statistical
recovery gets a budget of roughly three standard errors at the pinned
seeds, and grid-vs-closed-form agreement gets the documented 2/m.
"""

import csv
import filecmp
import math
import time
from pathlib import Path

import numpy as np
import pytest

from taildep.cli import main
from taildep.envelope import linf_range_given_tdc, measure_range, random_feasible
from taildep.estimator import EstimatorConfig, empirical_tdf, ranks
from taildep.measures import (
    average_tail_dependence,
    ev_copula,
    extremal_dependence,
    lp_norm,
    max_tail_dependence,
    point_eval,
    spearman_ev,
    tdc,
)
from taildep.rng import SplitMix64, normal_inverse_cdf
from taildep.simulate import CopulaSpec, analytic_tdf, sample
from taildep.tdf import (
    comonotone,
    from_grid,
    independence,
    least_concave_majorant,
    parabola,
    tent,
)

from conftest import make_random_tdf, make_symmetric_tdf


@pytest.fixture
def announce(capsys):
    def _announce(label: str, ok: bool, detail: str = "") -> None:
        with capsys.disabled():
            print(f"[{'PASS' if ok else 'FAIL'}] {label}" +
                  (f" ({detail})" if detail else ""))
    return _announce


# ---------------------------------------------------------------------------
# 1. Exact measure values on reference functions
# ---------------------------------------------------------------------------

def test_exact_measure_values(announce):
    passed, detail = False, ""
    try:
        t0 = time.perf_counter()
        top, bottom = comonotone(), independence()

        assert abs(float(tdc(top)) - 1.0) <= 1e-6
        assert abs(float(tdc(bottom))) <= 1e-6
        assert abs(float(average_tail_dependence(top)) - 0.25) <= 1e-6
        assert abs(float(average_tail_dependence(bottom))) <= 1e-6
        assert abs(float(spearman_ev(top)) - 1.0) <= 1e-6
        assert abs(float(spearman_ev(bottom))) <= 1e-6

        l2 = float(lp_norm(parabola(grid_size=1000), 2.0))
        assert abs(l2 - (1.0 / 30.0) ** 0.5) <= 1e-6

        half = from_grid(0.5 * comonotone().values)
        assert abs(float(extremal_dependence(half)) - 1.0 / 3.0) <= 1e-6

        elapsed = time.perf_counter() - t0
        assert elapsed < 1.0
        passed, detail = True, f"all within 1e-6 in {elapsed:.2f}s"
    finally:
        announce("criterion 1, exact values on reference functions", passed, detail)


# ---------------------------------------------------------------------------
# 2. Monotonicity of every measure plus an incomparable counterexample
# ---------------------------------------------------------------------------

def test_measures_monotone_in_pointwise_order(announce):
    passed, detail = False, ""
    try:
        rng = np.random.default_rng(20240801)
        fns = (
            tdc,
            lambda f: point_eval(f, 0.3),
            max_tail_dependence,
            average_tail_dependence,
            lambda f: lp_norm(f, 2.0),
            spearman_ev,
            extremal_dependence,
        )
        n_pairs = 1000
        for _ in range(n_pairs):
            f = make_random_tdf(rng, grid_size=60)
            g = from_grid(f.values * rng.uniform(0.05, 0.999))
            for fn in fns:
                lo, hi = float(fn(g)), float(fn(f))
                assert lo <= hi + 1e-10

        # equal coefficient, yet neither dominates: order genuinely partial
        a, b = tent(0.5, 1.0), parabola(1.0)
        assert float(tdc(a)) == pytest.approx(0.5, abs=1e-12)
        assert float(tdc(b)) == pytest.approx(0.5, abs=1e-12)
        assert a.eval(2.0 / 3.0) > b.eval(2.0 / 3.0) + 0.05
        assert b.eval(0.1) > a.eval(0.1) + 0.03

        passed = True
        detail = f"{n_pairs} ordered pairs x {len(fns)} measures, tol 1e-10"
    finally:
        announce("criterion 2, measures respect the pointwise order", passed, detail)


# ---------------------------------------------------------------------------
# 3. Symmetric functions peak at the midpoint
# ---------------------------------------------------------------------------

def test_symmetric_max_equals_tdc(announce):
    passed, detail = False, ""
    try:
        rng = np.random.default_rng(77)
        n = 200
        worst = 0.0
        for _ in range(n):
            f = make_symmetric_tdf(rng, grid_size=80)
            gap = abs(float(tdc(f)) - 2.0 * float(max_tail_dependence(f)))
            worst = max(worst, gap)
        assert worst <= 1e-10
        passed, detail = True, f"{n} symmetric draws, worst gap {worst:.2e}"
    finally:
        announce("criterion 3, symmetric max identity", passed, detail)


# ---------------------------------------------------------------------------
# 4. Estimator recovers known copulas
# ---------------------------------------------------------------------------

def test_estimator_consistency(announce):
    passed, detail = False, ""
    try:
        t0 = time.perf_counter()
        k = 141

        for theta in (1.0, 2.0):
            spec = CopulaSpec("clayton", n=20000, seed=2, theta=theta)
            u = sample(spec)
            proj = least_concave_majorant(
                empirical_tdf(ranks(u[:, 0], u[:, 1]), EstimatorConfig(k=k)))
            assert abs(float(tdc(proj)) - 2.0 ** (-1.0 / theta)) <= 0.08
            sup = float(np.max(np.abs(proj.values - analytic_tdf(spec).values)))
            assert sup <= 0.05

        u = sample(CopulaSpec("gaussian", n=20000, seed=2, rho=0.5))
        proj = least_concave_majorant(
            empirical_tdf(ranks(u[:, 0], u[:, 1]), EstimatorConfig(k=k)))
        assert float(tdc(proj)) <= 0.15

        elapsed = time.perf_counter() - t0
        assert elapsed < 30.0
        passed = True
        detail = f"clayton theta in {{1,2}} and gaussian rho=0.5, {elapsed:.1f}s"
    finally:
        announce("criterion 4, estimator consistency at n=20000, k=141", passed, detail)


# ---------------------------------------------------------------------------
# 5. Envelope: grid optimization agrees with the closed form
# ---------------------------------------------------------------------------

def test_envelope_band_agreement(announce):
    passed, detail = False, ""
    try:
        worst = 0.0
        for m in (100, 200, 400):
            for lam in (0.1, 0.25, 0.5, 0.75, 0.9):
                res = measure_range([(0.5, lam / 2.0)], "max_td", grid_size=m)
                lo, hi = linf_range_given_tdc(lam)
                gap = max(abs(res.min_value - lo), abs(res.max_value - hi))
                worst = max(worst, gap * m / 2.0)  # in units of the 2/m budget
                assert abs(res.min_value - lo) <= 2.0 / m
                assert abs(res.max_value - hi) <= 2.0 / m

        # random members never leave their own band
        band = measure_range([(0.5, 0.15)], "max_td", grid_size=100)
        for seed in range(1000):
            f = random_feasible([(0.5, 0.15)], grid_size=100, seed=seed)
            v = float(max_tail_dependence(f))
            assert band.min_value - 1e-8 <= v <= band.max_value + 1e-8

        # degenerate pins collapse the band to a point
        for pin, value in (((0.5, 0.0), 0.0), ((0.5, 0.5), 0.5)):
            res = measure_range([pin], "max_td", grid_size=100)
            assert abs(res.min_value - value) <= 1e-9
            assert abs(res.max_value - value) <= 1e-9

        passed = True
        detail = f"15 band checks + 1000 draws, worst gap {worst:.3f} of 2/m"
    finally:
        announce("criterion 5, optimization matches closed-form bands", passed, detail)


# ---------------------------------------------------------------------------
# 6. Two-argument extension is positively homogeneous
# ---------------------------------------------------------------------------

def test_extension_homogeneity(announce):
    passed, detail = False, ""
    try:
        rng = np.random.default_rng(31)
        f = make_random_tdf(rng, grid_size=100, scale=0.8)
        g = SplitMix64(31)
        n = 10_000
        worst = 0.0
        for _ in range(n):
            x = 0.01 + 9.99 * g.uniform()
            y = 0.01 + 9.99 * g.uniform()
            t = 0.01 + 7.99 * g.uniform()
            direct = f.extend_2d(t * x, t * y)
            scaled = t * f.extend_2d(x, y)
            rel = abs(direct - scaled) / max(abs(scaled), 1e-300)
            worst = max(worst, rel)
        assert worst <= 1e-12
        passed, detail = True, f"{n} tuples, worst relative error {worst:.2e}"
    finally:
        announce("criterion 6, homogeneous extension", passed, detail)


# ---------------------------------------------------------------------------
# 7. Extreme value copula bounds
# ---------------------------------------------------------------------------

def test_ev_copula_bounds(announce):
    passed, detail = False, ""
    try:
        grid = np.linspace(0.01, 0.99, 50)
        U, V = np.meshgrid(grid, grid)

        rng = np.random.default_rng(8)
        for _ in range(100):
            f = make_random_tdf(rng, grid_size=60)
            c = ev_copula(f, U, V)
            assert np.min(c - U * V) >= -1e-10
            assert np.min(np.minimum(U, V) - c) >= -1e-10

        assert np.max(np.abs(ev_copula(independence(), U, V) - U * V)) <= 1e-12
        assert np.max(np.abs(ev_copula(comonotone(), U, V)
                             - np.minimum(U, V))) <= 1e-12

        passed, detail = True, "100 random functions on a 50x50 grid"
    finally:
        announce("criterion 7, copula between its bounds", passed, detail)


# ---------------------------------------------------------------------------
# 8. End-to-end run: window counts, containment, determinism
# ---------------------------------------------------------------------------

def synth_prices(path: Path) -> None:
    """Base index plus three tickers with known tail coupling to it."""
    n = 2500
    pair = sample(CopulaSpec("clayton", n=n, seed=5, theta=2.0))
    u_base, u_clay = pair[:, 0], pair[:, 1]
    g = SplitMix64(99)
    u_ind = np.array([g.uniform() for _ in range(n)])

    def prices(u: np.ndarray) -> np.ndarray:
        r = np.array([normal_inverse_cdf(x) for x in u]) * 0.01
        return 100.0 * np.exp(np.cumsum(r))

    cols = {
        "BASE": prices(u_base),
        "CLAY": prices(u_clay),
        "INDP": prices(u_ind),
        "COMO": prices(u_base) * 2.0,  # same returns as the base
    }
    import datetime
    d0 = datetime.date(2015, 1, 1)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["date"] + list(cols))
        for i in range(n + 1):
            row = [(d0 + datetime.timedelta(days=i)).isoformat()]
            row += ["100.0" if i == 0 else f"{c[i - 1]:.10f}"
                    for c in cols.values()]
            w.writerow(row)


def test_end_to_end_run(announce, tmp_path):
    passed, detail = False, ""
    try:
        t0 = time.perf_counter()
        prices = tmp_path / "prices.csv"
        synth_prices(prices)
        assert sum(1 for _ in prices.open()) == 2502  # header + 2501 rows

        args = ["report", "--prices", str(prices), "--base", "BASE",
                "--tickers", "CLAY,INDP,COMO", "--window", "500", "--step", "1"]
        assert main(args + ["--out-dir", str(tmp_path / "run1")]) == 0
        assert main(args + ["--out-dir", str(tmp_path / "run2")]) == 0

        # identical bytes on a rerun
        files1 = sorted(p.relative_to(tmp_path / "run1")
                        for p in (tmp_path / "run1").rglob("*") if p.is_file())
        files2 = sorted(p.relative_to(tmp_path / "run2")
                        for p in (tmp_path / "run2").rglob("*") if p.is_file())
        assert files1 == files2 and len(files1) >= 8
        for rel in files1:
            assert filecmp.cmp(tmp_path / "run1" / rel,
                               tmp_path / "run2" / rel, shallow=False), rel

        # 2500 returns, window 500, step 1: 2001 windows per pair,
        # and the sup norm sits inside its coefficient band in every one
        for other in ("CLAY", "INDP", "COMO"):
            rows = list(csv.DictReader(
                (tmp_path / "run1" / "pairs" / f"BASE_{other}.csv").open()))
            assert len(rows) == 2001, other
            for row in rows:
                lo, hi = float(row["linf_lo"]), float(row["linf_hi"])
                assert lo - 1e-12 <= float(row["linf"]) <= hi + 1e-12, other

        elapsed = time.perf_counter() - t0
        assert elapsed < 120.0
        passed = True
        detail = f"3 pairs x 2001 windows, byte-identical rerun, {elapsed:.0f}s"
    finally:
        announce("criterion 8, end-to-end run on a synthetic panel", passed, detail)
