import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import special
from scipy.integrate import quad, solve_ivp

from cnoidal_lab.elliptic import (
    EllipticModulus,
    agm_sequence,
    complete_E,
    complete_K,
    incomplete_E,
    jacobi,
    nome,
    sn2_harmonics,
)
from cnoidal_lab.errors import DomainError

# Frozen oracle values; each was produced by an independent method (see the
# helper that regenerates it next to the test using it).
K_HALF = 1.6857503548125963  # Maclaurin series of K at k = 0.5
E_HALF = 1.4674622093394272  # adaptive quadrature of sqrt(1 - k^2 sin^2)
SN_07_08 = (0.6187556489525441, 0.7855835072666165, 0.8688903993077399)  # DOP853 on the sn/cn/dn system
E_13_06 = 1.1226525507214642  # adaptive quadrature of dn^2

moduli = st.floats(min_value=0.0, max_value=0.999)
args = st.floats(min_value=-200.0, max_value=200.0, allow_nan=False)


def maclaurin_K(k):
    total, coef, n = 0.0, 1.0, 0
    while True:
        term = coef * coef * k ** (2 * n)
        total += term
        if term < 1e-18:
            return 0.5 * math.pi * total
        n += 1
        coef *= (2 * n - 1) / (2 * n)


def test_modulus_validation():
    assert EllipticModulus(0.25).kp == pytest.approx(math.sqrt(1 - 0.0625), abs=1e-16)
    for bad in (-0.1, 1.0001, float("nan")):
        with pytest.raises(DomainError):
            EllipticModulus(bad)


def test_complete_K_examples():
    assert complete_K(0.0) == pytest.approx(math.pi / 2, abs=1e-15)
    assert complete_K(0.5) == pytest.approx(K_HALF, rel=1e-14)
    assert complete_K(0.5) == pytest.approx(maclaurin_K(0.5), rel=1e-14)
    assert complete_K(1 - 1e-9) > 10.0
    with pytest.raises(DomainError):
        complete_K(1.0)
    with pytest.raises(DomainError):
        complete_K(1.5)


def test_complete_E_examples():
    assert complete_E(0.0) == pytest.approx(math.pi / 2, abs=1e-15)
    assert complete_E(1.0) == 1.0
    assert complete_E(0.5) == pytest.approx(E_HALF, rel=1e-14)
    with pytest.raises(DomainError):
        complete_E(-0.2)


@given(moduli)
def test_complete_integrals_match_scipy(k):
    assert complete_K(k) == pytest.approx(special.ellipk(k * k), rel=1e-13)
    assert complete_E(k) == pytest.approx(special.ellipe(k * k), rel=1e-13)


def test_monotone_and_ordered():
    ks = np.linspace(0.01, 0.99, 60)
    big_k = np.array([complete_K(k) for k in ks])
    big_e = np.array([complete_E(k) for k in ks])
    assert np.all(np.diff(big_k) > 0)
    assert np.all(np.diff(big_e) < 0)
    assert np.all(big_k > big_e)


def test_agm_converges_fast():
    a, c = agm_sequence(0.9)
    assert len(a) < 8
    assert abs(c[-1]) <= 1e-15 * a[-1]


def test_jacobi_examples():
    assert tuple(jacobi(0.0, 0.6)) == (0.0, 1.0, 1.0)
    k = 0.7
    big_k = complete_K(k)
    sn, cn, dn = jacobi(big_k, k)
    assert sn == pytest.approx(1.0, abs=1e-14)
    assert cn == pytest.approx(0.0, abs=1e-14)
    assert dn == pytest.approx(math.sqrt(1 - k * k), abs=1e-14)
    got = jacobi(0.7, 0.8)
    np.testing.assert_allclose(got, SN_07_08, atol=1e-13)


def test_jacobi_against_ode_integration():
    k = 0.8

    def rhs(_, y):
        return [y[1] * y[2], -y[0] * y[2], -k * k * y[0] * y[1]]

    xs = np.linspace(0.0, 6.0, 13)
    sol = solve_ivp(rhs, (0.0, 6.0), [0.0, 1.0, 1.0], t_eval=xs, method="DOP853", rtol=1e-13, atol=1e-15)
    got = np.array(jacobi(xs, k))
    np.testing.assert_allclose(got, sol.y, atol=1e-11)


def test_jacobi_limits():
    x = np.linspace(-3, 3, 11)
    np.testing.assert_array_equal(jacobi(x, 0.0).sn, np.sin(x))
    np.testing.assert_array_equal(jacobi(x, 1.0).sn, np.tanh(x))
    np.testing.assert_array_equal(jacobi(x, 1.0).dn, 1 / np.cosh(x))


@pytest.mark.parametrize("k", [0.1, 0.5, 0.9])
def test_triple_invariants(k):
    x = np.linspace(-50.0, 50.0, 1000)
    sn, cn, dn = jacobi(x, k)
    assert np.max(np.abs(sn ** 2 + cn ** 2 - 1)) < 1e-12
    assert np.max(np.abs(dn ** 2 + k * k * sn ** 2 - 1)) < 1e-12
    assert np.min(dn) >= math.sqrt(1 - k * k) - 1e-12


@given(args, moduli)
def test_jacobi_matches_scipy(x, k):
    ref = special.ellipj(x, k * k)[:3]
    np.testing.assert_allclose(jacobi(x, k), ref, atol=5e-12)


@given(args, st.floats(min_value=0.05, max_value=0.95))
def test_symmetry_and_periods(x, k):
    big_k = complete_K(k)
    sn, cn, dn = jacobi(x, k)
    msn, mcn, mdn = jacobi(-x, k)
    assert msn == -sn and mcn == cn and mdn == dn
    np.testing.assert_allclose(jacobi(x + 4 * big_k, k), (sn, cn, dn), atol=1e-11)
    assert jacobi(x + 2 * big_k, k).dn == pytest.approx(dn, abs=1e-11)


@pytest.mark.parametrize("k", [0.3, 0.8])
def test_derivative_identities(k):
    x = np.linspace(-4, 4, 41)
    h = 1e-5
    p, m = np.array(jacobi(x + h, k)), np.array(jacobi(x - h, k))
    sn, cn, dn = jacobi(x, k)
    d = (p - m) / (2 * h)
    np.testing.assert_allclose(d[0], cn * dn, atol=1e-8)
    np.testing.assert_allclose(d[1], -sn * dn, atol=1e-8)
    np.testing.assert_allclose(d[2], -k * k * sn * cn, atol=1e-8)
    h = 1e-4
    second = (jacobi(x + h, k).sn - 2 * sn + jacobi(x - h, k).sn) / h ** 2
    assert np.max(np.abs(second + (1 + k * k) * sn - 2 * k * k * sn ** 3)) < 1e-6


def test_incomplete_E_examples():
    k = 0.6
    assert incomplete_E(0.0, k) == 0.0
    assert incomplete_E(2 * complete_K(k), k) == pytest.approx(2 * complete_E(k), abs=1e-14)
    assert incomplete_E(1.3, k) == pytest.approx(E_13_06, abs=1e-13)
    ref = quad(lambda y: special.ellipj(y, k * k)[2] ** 2, 0.0, 1.3, epsabs=1e-14)[0]
    assert incomplete_E(1.3, k) == pytest.approx(ref, abs=1e-12)


def test_incomplete_E_limits():
    x = np.linspace(-2, 2, 9)
    np.testing.assert_array_equal(incomplete_E(x, 0.0), x)
    np.testing.assert_allclose(incomplete_E(x, 1.0), np.tanh(x), atol=1e-15)


def test_incomplete_E_quasi_periodicity(rng):
    for _ in range(20):
        x, k = rng.uniform(-30, 30), rng.uniform(0.05, 0.95)
        big_k = complete_K(k)
        lhs = incomplete_E(x + 2 * big_k, k)
        assert lhs - incomplete_E(x, k) == pytest.approx(2 * complete_E(k), abs=1e-12)


@given(args, moduli)
def test_incomplete_E_odd_and_matches_scipy(x, k):
    assert incomplete_E(-x, k) == -incomplete_E(x, k)
    phi = special.ellipj(x, k * k)[3]
    assert incomplete_E(x, k) == pytest.approx(special.ellipeinc(phi, k * k), abs=1e-11 * max(1, abs(x)))


def test_nome_and_sn2_harmonics_against_fft():
    k = 0.7
    assert nome(k) == pytest.approx(math.exp(-math.pi * special.ellipk(1 - k * k) / special.ellipk(k * k)), rel=1e-14)
    m = 128
    period = 4 * complete_K(k)
    x = np.arange(m) * period / m
    coef = np.fft.fft(jacobi(x, k).sn ** 2).real / m
    b = sn2_harmonics(k, 20)
    # harmonic j of sn^2 has period 2K, so it sits at FFT index 2j
    np.testing.assert_allclose(b, coef[0:42:2], atol=1e-15)
    assert np.all(np.abs(b[1:]) > 0)


def test_sn2_harmonics_limits():
    np.testing.assert_array_equal(sn2_harmonics(0.0, 3), [0.5, -0.25, 0.0, 0.0])
    with pytest.raises(DomainError):
        sn2_harmonics(1.0, 3)
    with pytest.raises(DomainError):
        nome(0.0)
