import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dsrlab.coverage import (NetworkParams, Variant, coverage_kernel, pcov, pcov_alpha4_closed,
                             pcov_simultaneous, pcov_simultaneous_alpha4, pcov_small_noise, rho1,
                             rho2, small_noise_error_bound)
from dsrlab.errors import DomainError
from dsrlab.fading import Nakagami, Rayleigh, beta


def _pcov_mpmath(T, lam, alpha, mu, sigma2, b):
    # definition over v = r^2: int pi lam exp(-pi lam beta v - mu T sigma2 v^(alpha/2)) dv
    with mpmath.workdps(30):
        f = lambda v: math.pi * lam * mpmath.exp(-math.pi * lam * b * v - mu * T * sigma2 * v ** (alpha / 2))
        return float(mpmath.quad(f, [0, 1 / (math.pi * lam * b), mpmath.inf]))


def test_network_params_validation():
    with pytest.raises(DomainError):
        NetworkParams(lam=0)
    with pytest.raises(DomainError):
        NetworkParams(gamma1=1.0, a=1.0)
    with pytest.raises(DomainError):
        NetworkParams(alpha=2.0)
    p = NetworkParams.from_snr(10.0, mu=2.0)
    assert p.sigma2 == pytest.approx(0.05)
    assert p.snr == pytest.approx(10.0)
    assert p.gamma2 == pytest.approx(0.6) and p.lambda_t == pytest.approx(0.4)
    assert p.replace(T=3.0).T == 3.0


@pytest.mark.parametrize("T, lam, alpha, mu, sigma2", [
    (1.0, 0.4, 4.0, 1.0, 1.0), (2.0, 0.3, 3.0, 1.0, 0.5), (0.5, 1.5, 5.0, 2.0, 0.1),
    (10.0, 0.05, 3.5, 0.5, 1e-3)])
def test_pcov_against_definition(T, lam, alpha, mu, sigma2):
    b = beta(T, alpha, mu=mu).value
    assert pcov(T, lam, alpha, mu, sigma2).p == pytest.approx(
        _pcov_mpmath(T, lam, alpha, mu, sigma2, b), rel=1e-9)


def test_pcov_frozen_values():
    assert pcov(1.0, 0.4, 4.0, 1.0, 1.0).p == pytest.approx(0.4415255080796453, rel=1e-11)
    assert pcov(2.0, 0.3, 3.0, 1.0, 0.5).p == pytest.approx(0.21507060774753126, rel=1e-10)


def test_pcov_edge_cases():
    r = pcov(1.0, 0.5, 4.0, 1.0, 0.0)
    assert r.variant is Variant.NoNoise
    assert r.p == pytest.approx(1 / (1 + math.pi / 4))
    assert pcov(1.0, 0.0, 4.0, 1.0, 1.0).p == 0.0
    with pytest.raises(DomainError):
        pcov(1.0, -1.0, 4.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        pcov(1.0, 1.0, 4.0, 1.0, -1.0)


def test_kernel_integration_by_parts_identity():
    # K0 + 2 c K1 = 1 at alpha = 4
    for c in (1e-6, 0.01, 1.0, 50.0, 1e8):
        k0, _ = coverage_kernel(c, 4.0, 0)
        k1, _ = coverage_kernel(c, 4.0, 1)
        assert k0 + 2 * c * k1 == pytest.approx(1.0, rel=1e-9)


def test_kernel_zero_noise():
    assert coverage_kernel(0.0, 3.0, 0)[0] == 1.0
    assert coverage_kernel(0.0, 3.0, 2)[0] == 2.0


def test_closed_form_matches_quadrature_random():
    rng = np.random.default_rng(11)
    for _ in range(40):
        T = 10 ** rng.uniform(-1, 1.5)
        lam = 10 ** rng.uniform(-3, 1)
        mu = 10 ** rng.uniform(-0.5, 0.5)
        s2 = 10 ** rng.uniform(-4, 4)
        q = pcov(T, lam, 4.0, mu, s2).p
        c = pcov_alpha4_closed(T, lam, mu, s2).p
        assert abs(q - c) <= 1e-8 * max(1.0, abs(c))
        if c > 1e-300:
            assert q == pytest.approx(c, rel=1e-9)


def test_closed_form_domain():
    with pytest.raises(DomainError):
        pcov_alpha4_closed(1.0, 1.0, 1.0, 0.0)
    with pytest.raises(DomainError):
        pcov_alpha4_closed(1.0, 1.0, 1.0, 1.0, Nakagami(2.0, 1.0))
    with pytest.raises(DomainError):
        pcov_alpha4_closed(1.0, 1.0, 1.0, 1.0, Rayleigh(2.0))


@settings(max_examples=40, deadline=None)
@given(st.floats(0.1, 10), st.floats(0.01, 2), st.floats(2.5, 6), st.floats(1e-4, 10))
def test_pcov_bounded_by_noiseless(T, lam, alpha, sigma2):
    p = pcov(T, lam, alpha, 1.0, sigma2).p
    assert 0.0 <= p <= 1.0 / beta(T, alpha).value + 1e-12


@settings(max_examples=30, deadline=None)
@given(st.floats(0.1, 10), st.floats(0.01, 2), st.floats(1e-3, 10))
def test_pcov_monotone(T, lam, sigma2):
    base = pcov(T, lam, 4.0, 1.0, sigma2).p
    assert pcov(T, lam * 1.5, 4.0, 1.0, sigma2).p >= base - 1e-13
    assert pcov(T, lam, 4.0, 1.0, sigma2 * 1.5).p <= base + 1e-13
    assert pcov(T * 1.5, lam, 4.0, 1.0, sigma2).p <= base + 1e-13


def test_small_noise_expansion_and_bound():
    args = (1.0, 0.04, 4.0, 1.0, 1e-4)
    err = abs(pcov(*args).p - pcov_small_noise(*args).p)
    bound = small_noise_error_bound(*args)
    assert err == pytest.approx(2.601286566428218e-05, rel=1e-6)
    assert err <= bound
    assert bound == pytest.approx(2.65256705592681e-05, rel=1e-9)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.2, 5), st.floats(0.05, 2), st.floats(2.5, 6), st.floats(1e-5, 1e-2))
def test_small_noise_bound_holds(T, lam, alpha, sigma2):
    args = (T, lam, alpha, 1.0, sigma2)
    err = abs(pcov(*args).p - pcov_small_noise(*args).p)
    assert err <= small_noise_error_bound(*args) * (1 + 1e-6) + 1e-12


def test_rho_split_sums_to_full_integral():
    for T, alpha in [(1.0, 4.0), (0.3, 3.0), (7.0, 5.5)]:
        n = alpha / 2
        full = T ** (2 / alpha) * (math.pi / n) / math.sin(math.pi / n)
        assert rho1(T, alpha) + rho2(T, alpha) == pytest.approx(full, rel=1e-10)
    assert rho1(1.0, 4.0) == pytest.approx(math.pi / 4, rel=1e-12)
    assert rho1(2.0, 3.0) == pytest.approx(beta(2.0, 3.0).value - 1, rel=1e-10)


def test_simultaneous_reduces_to_single_when_all_hold():
    for T, lam, alpha, s2 in [(1.0, 0.4, 4.0, 1.0), (2.0, 0.2, 3.0, 0.1)]:
        assert pcov_simultaneous(T, lam, lam, alpha, s2).p == pytest.approx(
            pcov(T, lam, alpha, 1.0, s2).p, rel=1e-9)


def test_simultaneous_closed_form_random():
    rng = np.random.default_rng(5)
    for _ in range(20):
        T = 10 ** rng.uniform(-1, 1)
        lt = 10 ** rng.uniform(-2, 0.5)
        pj = rng.uniform(0.01, 1)
        s2 = 10 ** rng.uniform(-3, 2)
        q = pcov_simultaneous(T, pj * lt, lt, 4.0, s2).p
        c = pcov_simultaneous_alpha4(T, lt, pj, s2).p
        assert abs(q - c) <= 1e-8


def test_simultaneous_monotone_in_share():
    ps = [pcov_simultaneous(1.0, f * 0.5, 0.5, 4.0, 0.1).p for f in (0.1, 0.4, 0.8, 1.0)]
    assert ps == sorted(ps)


def test_simultaneous_domain():
    with pytest.raises(DomainError):
        pcov_simultaneous(1.0, 2.0, 1.0, 4.0, 1.0)
    with pytest.raises(DomainError):
        pcov_simultaneous_alpha4(1.0, 1.0, 0.5, 0.0)
    assert pcov_simultaneous(1.0, 0.0, 1.0, 4.0, 1.0).p == 0.0
