"""Acceptance gate: one PASS/FAIL line per criterion, at the stated tolerances.

Each test records its line through the ``criterion`` fixture; the lines are
repeated in the terminal summary so they survive output capture.
"""

import math
import time

import numpy as np
import pytest
from click.testing import CliRunner

from azukawa_psh.azukawa import (
    BallAzukawa,
    azukawa_balanced,
    azukawa_ball,
    azukawa_limit,
)
from azukawa_psh.catalogue import BALANCED, get_family
from azukawa_psh.checks import CheckSettings, check_case2, check_thm13, check_thm14, check_thm15
from azukawa_psh.cli import main
from azukawa_psh.domains import CPoint, Ellipsoid, GeoMean, MaxAbs, SumAbs
from azukawa_psh.extension import minimal_extension_norm, sublevel_mass_limit, theorem53_check
from azukawa_psh.green import BalancedGreen, BallGreen
from azukawa_psh.indicatrix import (
    epsilon_identity_check,
    indicatrix_volume_mc,
    indicatrix_volume_spherical,
    required_halfwidth,
)
from azukawa_psh.montecarlo import MCConfig
from azukawa_psh.sphere import SphericalGrid

import oracles
from helpers import random_ball_points, random_vectors

SETTINGS = CheckSettings()
GRID64 = SphericalGrid.cube(64)
SIGMA2 = math.pi**2 / 2
BROKEN = "superharmonic-counterexample"


def test_criterion_1_limit_matches_closed_forms(criterion):
    rng = np.random.default_rng(20240611)
    gauges = [MaxAbs(2), SumAbs(2), Ellipsoid((1.0, 2.0)), GeoMean(Ellipsoid((1, 1)), MaxAbs(2), 0.3)]
    worst = oracle_worst = 0.0
    start = time.perf_counter()
    for k in range(200):
        X = random_vectors(rng, 1)[0]
        if k % 2 == 0:
            R = rng.uniform(0.5, 3)
            w = random_ball_points(rng, 1, radius=0.9 * R)[0]
            ref = azukawa_ball(R, w, X)
            oracle_worst = max(oracle_worst, abs(ref - oracles.azukawa_ball(R, w, X)))
            est = azukawa_limit(BallGreen(R, CPoint(w)), w, X)
        else:
            h = gauges[k % len(gauges)]
            ref = azukawa_balanced(h, X)
            est = azukawa_limit(BalancedGreen(h), [0, 0], X)
        worst = max(worst, abs(est.estimate - ref))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-6 and oracle_worst <= 1e-12 and elapsed < 10
    criterion(1, ok, f"200 instances, max |limit - closed form| = {worst:.2e} (<= 1e-6), runtime {elapsed:.2f} s (< 10 s)")


def test_criterion_2_centered_ball_volume(criterion):
    A = BallAzukawa(1.0, CPoint([0, 0]))
    sph = indicatrix_volume_spherical(A, GRID64)
    mc = indicatrix_volume_mc(A, required_halfwidth(A), 1_000_000)
    rel = abs(sph.value - SIGMA2) / SIGMA2
    z = abs(mc.value - SIGMA2) / mc.error
    ok = rel <= 1e-3 and z <= 3
    criterion(2, ok, f"spherical {sph.value:.10f} vs pi^2/2 rel {rel:.1e} (<= 1e-3); MC {mc.value:.5f} +- {mc.error:.5f}, {z:.2f} sigma (<= 3)")


def test_criterion_3_off_center_volume(criterion):
    A = BallAzukawa(1.0, CPoint([0.5, 0]))
    exact = 27 * math.pi**2 / 128
    sph = indicatrix_volume_spherical(A, GRID64)
    mc = indicatrix_volume_mc(A, required_halfwidth(A), 1_000_000)
    norm = minimal_extension_norm(1.0, [0.5, 0], MCConfig(samples=1_000_000))
    rel_s = abs(sph.value - exact) / exact
    rel_m = abs(mc.value - exact) / exact
    rel_n = abs(norm.value - sph.value) / sph.value
    ok = rel_s <= 5e-3 and rel_m <= 5e-3 and rel_n <= 1e-2
    criterion(
        3,
        ok,
        f"27pi^2/128 = {exact:.7f}: spherical rel {rel_s:.1e}, MC rel {rel_m:.1e} (<= 0.5%); "
        f"minimal extension norm {norm.value:.5f} vs V(I) rel {rel_n:.1e} (<= 1%)",
    )


def test_criterion_4_epsilon_identity(criterion):
    cases = {
        "centered ball": (BallAzukawa(1.0, CPoint([0, 0])), lambda eps: 2 * math.pi**2 / eps),
        "ball with pole (0.5, 0)": (BallAzukawa(1.0, CPoint([0.5, 0])), lambda eps: oracles.EPS_RHS_R05[eps]),
    }
    details = []
    ok = True
    for name, (A, reference) in cases.items():
        for eps in (1.0, 0.5, 0.25):
            res = epsilon_identity_check(A, eps, GRID64, MCConfig(samples=400_000))
            quad_gap = abs(res.rhs - reference(eps)) / reference(eps)
            sigma = abs(res.lhs - res.rhs) / max(math.hypot(res.lhs_error, res.rhs_error), 1e-300)
            good = quad_gap < 1e-3 and res.within(3.0)
            ok = ok and good
            details.append(f"{name} eps={eps}: quad gap {quad_gap:.1e}, MC {min(sigma, 99):.2f} sigma")
    criterion(4, ok, "; ".join(details))


def test_criterion_5_balanced_log_gauge_psh(criterion):
    details = []
    ok = True
    for name in BALANCED:
        res = check_thm14(get_family(name), SETTINGS, name=name)
        ok = ok and res.passed and res.summary["tests_run"] == 64 * 10 * 2
        details.append(f"{name} min-slack {res.summary['min_slack']:.1e}")
    broken = check_thm14(get_family(BROKEN), SETTINGS, name=BROKEN)
    ok = ok and not broken.passed
    details.append(f"broken family min-slack {broken.summary['min_slack']:.2e} (fails as required)")
    criterion(5, ok, "64 lines x 10 bases: " + "; ".join(details))


def test_criterion_6_hartogs_psh(criterion):
    start = time.perf_counter()
    res = check_thm15(get_family("hartogs"), SETTINGS, name="hartogs")
    elapsed = time.perf_counter() - start
    ok = res.passed and res.summary["tolerance"] == 1e-7 and elapsed < 60
    criterion(6, ok, f"phi = |t|^2 - 1: min-slack {res.summary['min_slack']:.1e} (>= -1e-7), runtime {elapsed:.2f} s (< 60 s)")


def test_criterion_7_hartogs_volume(criterion):
    fam = get_family("hartogs")
    res = check_thm13(fam, SETTINGS, name="hartogs")
    table = res.rows
    assert len(table) == 21 * 21
    # the closed form is the e^{-4 phi} law; the e^{-6 phi} law is off by e^{-2 phi}
    worst = 0.0
    for row in table:
        t = complex(row[0], row[1])
        phi = abs(t) ** 2 - 1
        worst = max(worst, abs(row[2] - oracles.hartogs_indicatrix_volume(phi)) / oracles.hartogs_indicatrix_volume(phi))
    ok = res.passed and worst < 5e-3 and res.summary["closed_form_max_rel_error"] < 5e-3
    criterion(
        7,
        ok,
        f"-log V(t) grid test {res.summary['verdict']} (min-slack {res.summary['min_slack']:.2e}); "
        f"21x21 grid max rel error vs sigma_2 e^(-4 phi)(1 - e^(2 phi))^3 = {worst:.1e} (< 0.5%)",
    )


def test_criterion_8_directional_distance(criterion):
    details = []
    ok = True
    for name in list(BALANCED) + ["hartogs", "fixed-ball"]:
        res = check_case2(get_family(name), SETTINGS, name=name)
        ok = ok and res.passed
        details.append(f"{name} {'pass' if res.passed else 'FAIL'}")
    broken = check_case2(get_family(BROKEN), SETTINGS, name=BROKEN)
    ok = ok and not broken.passed
    details.append("broken family fails as required")
    criterion(8, ok, "-log distance grid test at 1e-7: " + "; ".join(details))


def test_criterion_9_robin_bound(criterion):
    ratios = {}
    ok = True
    for r in (0.0, 0.25, 0.5, 0.8):
        res = theorem53_check(1.0, [r, 0], GRID64)
        ratios[r] = res.volume_ratio
        ok = ok and res.indicatrix_volume <= res.robin_bound * (1 + 1e-9)
        if r > 0:
            ok = ok and res.volume_ratio < 1
    ok = ok and abs(ratios[0.0] - 1) <= 5e-3 and ratios[0.5] < 0.9
    shown = ", ".join(f"r={r}: {v:.4f}" for r, v in ratios.items())
    criterion(9, ok, f"V(I) / (sigma_2 e^(2B)) = {shown}; equality at r=0, gap > 10% at r=0.5")


def test_criterion_10_sublevel_mass(criterion):
    t_list = (-4.0, -6.0, -8.0, -10.0)
    V = oracles.ball_indicatrix_volume(0.5)
    radial = sublevel_mass_limit(1.0, [0.5, 0], t_list, method="radial", grid=SphericalGrid.cube(32))
    gaps = [abs(p.scaled_mass - V) for p in radial]
    monotone = all(b < a for a, b in zip(gaps, gaps[1:]))
    within = gaps[-1] / V < 0.05
    mc = sublevel_mass_limit(1.0, [0.5, 0], t_list, MCConfig(samples=1_000_000))
    agree = all(abs(m.scaled_mass - q.scaled_mass) <= 3 * m.error for m, q in zip(mc, radial))
    centered = sublevel_mass_limit(1.0, [0, 0], t_list, MCConfig(samples=1_000_000))
    base = centered[0].scaled_mass
    constant = all(abs(p.scaled_mass - base) <= 1e-12 * base for p in centered)
    exact_c = abs(base - SIGMA2) <= 3 * centered[0].error
    ok = monotone and within and agree and constant and exact_c
    criterion(
        10,
        ok,
        f"pole (0.5, 0): |e^(-2t) Vol - V(I)| / V(I) = "
        + ", ".join(f"{g / V:.1e}" for g in gaps)
        + f" over t = -4..-10 (monotone {monotone}, < 5% at t=-10 {within}); MC agrees within 3 sigma {agree}; "
        f"r=0 constant {constant} and equal to pi^2/2 within MC error {exact_c}",
    )


@pytest.mark.slow
def test_criterion_11_report_determinism(criterion, tmp_path):
    runner = CliRunner()
    first = runner.invoke(main, ["report", "all", "--out", str(tmp_path / "a")])
    second = runner.invoke(main, ["report", "all", "--out", str(tmp_path / "b")])
    names = sorted(p.name for p in (tmp_path / "a").iterdir())
    other = sorted(p.name for p in (tmp_path / "b").iterdir())
    same = names == other and all(
        (tmp_path / "a" / n).read_bytes() == (tmp_path / "b" / n).read_bytes() for n in names
    )
    ok = first.exit_code == 0 and second.exit_code == 0 and same and len(names) == 53
    criterion(11, ok, f"two `report all` runs, {len(names)} artifacts each, byte-identical {same}")
