"""Acceptance criteria, each run at its stated tolerance.

Every test prints one ``PASS``/``FAIL`` line (visible even under capture)
before asserting, so ``pytest -v`` output doubles as a scorecard.
"""

import math
import time

import numpy as np
import pytest

from cnoidal_lab import dynamics, identities, linops, smallamp
from cnoidal_lab.elliptic import jacobi
from cnoidal_lab.wave import family_from_ee, profile_derivatives, rescaled_profile

M = 256
SEED = 20240611


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {number}: {detail}")
        assert ok, detail

    return emit


def test_criterion_01_exact_interval(report):
    lo, hi = linops.c_interval_exact(0.8)
    start = time.perf_counter()
    rows = linops.c_interval_sweep([j / 50 for j in range(1, 51)])
    elapsed = time.perf_counter() - start
    ok = (lo, hi) == (1.4, 2.6) and len(rows) == 50 and elapsed < 1.0
    report(1, ok, f"c_interval_exact(0.8)=({lo!r}, {hi!r}), 50-point sweep {elapsed:.3f}s")


def test_criterion_02_curvature_triangle(report):
    start = time.perf_counter()
    worst_app = worst_num = 0.0
    g = linops.z_grid(M)
    for ee in (0.2, 0.5, 0.8):
        lo, hi = linops.c_interval_exact(ee)
        for c in (1.5, 2.0, 2.5):
            assert lo < c < hi
            ex = linops.mu_curvature_explicit(ee, c)
            worst_app = max(worst_app, abs(ex - identities.mu_from_appendix(ee, c)) / abs(ex))
            worst_num = max(worst_num, abs(linops.mu_curvature_numeric(ee, c, g) - ex) / abs(ex))
    elapsed = time.perf_counter() - start
    ok = worst_app <= 1e-11 and worst_num <= 1e-6 and elapsed < 30.0
    report(2, ok, f"appendix rel {worst_app:.2e}, numeric rel {worst_num:.2e}, {elapsed:.1f}s")


def test_criterion_03_kernels_and_positivity(report):
    kappas = np.linspace(-0.5, 0.5, 33)
    g = linops.z_grid(M)
    small_max, rest_min, band_min = 0.0, math.inf, math.inf
    counts_ok = True
    for ee in (0.1, 0.3, 0.5, 0.7, 0.9):
        w = family_from_ee(ee)
        pg = linops.grid_for(w, M)
        for kind in ("Kplus", "Kminus"):
            ev = np.sort(np.abs(linops.assemble(kind, w, 2.0, 0.0, pg).eigvalsh()))
            counts_ok &= int(np.sum(ev < 1e-7)) == 1
            small_max = max(small_max, ev[0])
            rest_min = min(rest_min, ev[1])
        for kind in ("Pplus", "Pminus"):
            band_min = min(band_min, float(linops.bands(kind, w, 2.0, kappas, 4, g).lowest().min()))
    ok = counts_ok and small_max < 1e-7 and rest_min > 1e-4 and band_min >= -1e-7
    report(3, ok, f"kernel |eig| {small_max:.2e}, next {rest_min:.2e}, band minimum {band_min:.2e}")


def test_criterion_04_negative_direction(report):
    assert linops.c_interval_exact(0.8)[1] < 2.9
    b = linops.bands("Pminus", 0.8, 2.9, np.linspace(-0.5, 0.5, 33), 4, linops.z_grid(M))
    low = float(b.lowest().min())
    report(4, low < -1e-6, f"lowest P- band minimum {low:.4e} at ee=0.8, c=2.9")


def test_criterion_05_identity_suite(report):
    worst = 0.0
    for k in (0.2, 0.5, 0.8):
        for tag in identities.IDENTITIES:
            worst = max(worst, identities.verify_identity(tag, k, M))
    assert len(identities.IDENTITIES) == 6
    # norms against a fine trapezoid rule (exponentially accurate for periodic integrands)
    norm_err = 0.0
    for k in (0.2, 0.5, 0.8):
        nodes, _, period = identities.xi_grid(k, 2048)
        sn, cn, dn = jacobi(nodes, k)
        h = period / nodes.size
        quad = (h * np.sum(sn ** 2), h * np.sum((cn * dn) ** 2), h * np.sum(cn * dn * identities.eval_V(nodes, k)))
        norm_err = max(norm_err, float(np.max(np.abs(np.array(identities.norms(k)) / quad - 1.0))))
    ok = worst < 1e-6 and norm_err <= 1e-9
    report(5, ok, f"max identity residual {worst:.2e}, norm rel error {norm_err:.2e}")


def test_criterion_06_small_amplitude(report):
    worst_model = 0.0
    worst_flip = 0.0
    for a in (0.05, 0.1, 0.2):
        tol = 5.0 * a ** 4 + 1e-8
        for kappa in np.linspace(-0.4, 0.4, 17):
            lo, hi = smallamp.full_pair(a, kappa)
            mhi, mlo = smallamp.band_expansion("minus", smallamp.SmallAmpParams(a, 0.0, float(kappa)))
            worst_model = max(worst_model, max(abs(lo - mlo), abs(hi - mhi)) / tol)
        c_lo, c_hi = smallamp.curvature_flip(a)
        r = math.sqrt(2.0) * a
        worst_flip = max(worst_flip, abs((c_hi - 2.0) / r - 1.0), abs((2.0 - c_lo) / r - 1.0))
    ok = worst_model <= 1.0 and worst_flip <= 0.1
    report(6, ok, f"model error {worst_model:.3f} x (5a^4+1e-8), flip rel error {worst_flip:.2e}")


def test_criterion_07_sum_of_squares(report):
    rng = np.random.default_rng(SEED)
    ee = 0.5
    w = family_from_ee(ee)
    g = linops.grid_for(w, M)
    op = linops.assemble("Kminus", w, 2.0, g=g)
    worst_sos = 0.0
    for _ in range(50):
        v = dynamics.random_direction(rng, g.m, g.period, 24, decay=0.0).real
        v /= math.sqrt(g.norm2(v))
        s = linops.sos_k_minus(w, v, g)
        worst_sos = max(worst_sos, abs(s - linops.quadratic_form(op, v)) / max(1.0, abs(s)))
    _, du0, _ = profile_derivatives(w, g.nodes)
    kp = linops.assemble("Kplus", w, 2.0, g=g)
    worst_kp = 0.0
    for _ in range(20):
        u = du0 * dynamics.random_direction(rng, g.m, g.period, 12, decay=0.0).real
        ref = linops.quadratic_form(kp, u)
        worst_kp = max(worst_kp, abs(linops.k_plus_partial(w, u, 2.0, g) - ref) / abs(ref))
    ok = worst_sos <= 1e-8 and worst_kp <= 1e-6
    report(7, ok, f"K- sum of squares {worst_sos:.2e}, K+ partial rel {worst_kp:.2e}")


def test_criterion_08_intertwining(report):
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for ee in (0.3, 0.7):
        w = family_from_ee(ee)
        g = linops.grid_for(w, M)
        for c in (1.3, 2.0, 2.7):
            for _ in range(3):
                f = dynamics.random_direction(rng, g.m, g.period, g.m // 8, decay=0.0).real
                worst = max(worst, linops.intertwine_residual(w, c, f, g))
    report(8, worst < 1e-6, f"max relative intertwining residual {worst:.2e}")


def test_criterion_09_spectral_stability(report):
    worst = 0.0
    for ee in (0.3, 0.7):
        w = family_from_ee(ee)
        worst = max(worst, linops.spectral_stability_check(w, linops.grid_for(w, M), np.linspace(-0.5, 0.5, 17)))
    report(9, worst < 1e-7, f"max |Re lambda| {worst:.2e}")


def test_criterion_10_orbital_experiment(report):
    delta = 1e-3
    start = time.perf_counter()
    rep = dynamics.stability_experiment(0.5, 1, delta, 20.0, 1e-3, M)
    elapsed = time.perf_counter() - start
    s = rep.summary
    ok = (
        s["max_dist"] <= 10 * delta
        and s["lambda_drift"] < 1e-8
        and s["charge_drift"] < 1e-11
        and s["sandwich_min"] > 0.0
        and math.isfinite(s["sandwich_max"])
        and s["max_rate"] <= 0.1
        and elapsed < 120.0
    )
    detail = (
        f"dist {s['max_dist']:.2e}, Lambda drift {s['lambda_drift']:.1e}, Q drift {s['charge_drift']:.1e}, "
        f"ratios [{s['sandwich_min']:.3f}, {s['sandwich_max']:.3f}], rate {s['max_rate']:.1e}, {elapsed:.0f}s"
    )
    report(10, ok, detail)


def test_criterion_11_wave_expansion(report):
    ee = 1.0 - 1e-4
    w = family_from_ee(ee)
    a = w.amp
    z = np.linspace(0.0, 2.0 * math.pi, 4097)
    u, _ = rescaled_profile(w, z)
    shape = float(np.max(np.abs(u - a * np.sin(z))))
    freq = abs(w.ell ** 2 - (1.0 - 0.75 * a * a))
    ok = shape <= 10 * a ** 3 and freq <= 10 * a ** 4
    report(11, ok, f"|U - a sin| {shape:.2e} (bound {10 * a ** 3:.1e}), ell^2 error {freq:.2e} (bound {10 * a ** 4:.1e})")
