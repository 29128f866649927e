import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate, stats

from dsrlab.errors import DomainError
from dsrlab.fading import (Nakagami, Rayleigh, Ricean, beta, beta_rayleigh_alpha4, sample_power,
                           separability_fit)


@pytest.mark.parametrize("f", [Rayleigh(0.7), Ricean(1.5, 0.8), Nakagami(2.5, 1.3)])
def test_pdf_normalized_and_mean(f):
    z = integrate.quad(f.pdf, 0, np.inf)[0]
    m = integrate.quad(lambda g: g * f.pdf(g), 0, np.inf)[0]
    assert z == pytest.approx(1.0, abs=1e-8)
    assert m == pytest.approx(f.mean_power, rel=1e-7)


@pytest.mark.parametrize("f", [Rayleigh(0.7), Ricean(1.5, 0.8), Nakagami(2.5, 1.3)])
def test_laplace_and_moment_against_pdf(f):
    for t in (0.3, 2.0):
        ref = integrate.quad(lambda g: math.exp(-t * g) * f.pdf(g), 0, np.inf)[0]
        assert f.laplace(t) == pytest.approx(ref, rel=1e-8)
    ref = integrate.quad(lambda g: g ** 0.5 * f.pdf(g), 0, np.inf)[0]
    assert f.moment(0.5) == pytest.approx(ref, rel=1e-7)


def test_nakagami_one_is_rayleigh():
    g = np.linspace(0.01, 5, 30)
    np.testing.assert_allclose(Nakagami(1.0, 1.0).pdf(g), Rayleigh(1.0).pdf(g), rtol=1e-13)
    assert beta(2.0, 3.5, Nakagami(1.0, 1.0)).value == pytest.approx(
        beta(2.0, 3.5, Rayleigh(1.0)).value, rel=1e-12)


def test_ricean_zero_los_is_rayleigh():
    r = Ricean(0.0, 1 / math.sqrt(2))
    assert r.mean_power == pytest.approx(1.0)
    assert r.k_factor == 0.0
    assert beta(1.0, 4.0, r).value == pytest.approx(beta_rayleigh_alpha4(1.0), rel=1e-8)


@pytest.mark.parametrize("f, law", [
    (Rayleigh(2.0), stats.expon(scale=0.5)),
    (Ricean(1.0, 0.9), stats.ncx2(df=2, nc=(1.0 / 0.9) ** 2, scale=0.9 ** 2)),
    (Nakagami(0.6, 1.5), stats.gamma(0.6, scale=1.5 / 0.6)),
])
def test_sampling_matches_law(f, law):
    x = sample_power(f, np.random.default_rng(3), 20000)
    assert stats.kstest(x, law.cdf).pvalue > 1e-3
    assert f.mean_power == pytest.approx(law.mean(), rel=1e-12)


def test_invalid_parameters():
    with pytest.raises(DomainError):
        Rayleigh(0.0)
    with pytest.raises(DomainError):
        Ricean(-1.0, 1.0)
    with pytest.raises(DomainError):
        Nakagami(0.4, 1.0)
    with pytest.raises(DomainError):
        beta(0.0, 4.0)
    with pytest.raises(DomainError):
        beta(1.0, 2.0)


@pytest.mark.parametrize("T", [0.1, 1.0, 10.0])
@pytest.mark.parametrize("mu", [0.5, 1.0, 2.0])
def test_beta_rayleigh_closed_form(T, mu):
    assert beta(T, 4.0, mu=mu).value == pytest.approx(beta_rayleigh_alpha4(T), abs=1e-10)


def test_beta_rayleigh_general_alpha_oracle():
    # Rayleigh interference: beta = 1 + delta T^delta int_{1/T}^inf u^(delta-1)/(1+u) du,
    # with the tail written as pi/sin(pi delta) minus the finite head
    for alpha in (3.0, 5.0):
        d = mpmath.mpf(2) / alpha
        T = mpmath.mpf(2)
        with mpmath.workdps(30):
            tail = mpmath.pi / mpmath.sin(mpmath.pi * d) - mpmath.quad(
                lambda u: u ** (d - 1) / (1 + u), [0, 1 / T])
            ref = 1 + d * T ** d * tail
        assert beta(2.0, alpha).value == pytest.approx(float(ref), rel=1e-12)


def test_beta_is_increasing_in_T():
    vals = [beta(t, 3.7, Nakagami(2.0, 1.0)).value for t in (0.2, 1.0, 5.0)]
    assert vals[0] < vals[1] < vals[2]


@settings(max_examples=25, deadline=None)
@given(st.floats(0.05, 20.0), st.floats(2.5, 6.0))
def test_beta_at_least_one(T, alpha):
    # the integrand is nonnegative and its T -> 0 limit is 1
    assert beta(T, alpha).value >= 1.0 - 1e-12


def test_separability_rayleigh_frozen():
    T = np.geomspace(1, 50, 20)
    slope, intercept, resid = separability_fit(Rayleigh(1.0), 4.0, T)
    assert slope == pytest.approx(2.4567, abs=5e-4)
    assert intercept == pytest.approx(0.5346, abs=5e-4)
    assert resid == pytest.approx(0.061613, abs=1e-5)


def test_separability_nakagami_half_is_exact():
    T = np.geomspace(1, 50, 20)
    slope, intercept, resid = separability_fit(Nakagami(0.5, 1.0), 4.0, T)
    assert slope == pytest.approx(2.0, rel=1e-8)
    assert intercept == pytest.approx(1.0, rel=1e-6)
    assert resid < 1e-8


@pytest.mark.parametrize("f", [Ricean(1.0, 1 / math.sqrt(2)), Ricean(2.0, 1 / math.sqrt(2)),
                               Nakagami(2.0, 1.0)])
def test_separability_signs(f):
    slope, intercept, _ = separability_fit(f, 4.0, np.geomspace(1, 50, 20))
    assert slope > 0 and intercept >= 0


def test_separability_domain():
    with pytest.raises(DomainError):
        separability_fit(Rayleigh(), 4.0, [1.0, 2.0])
    with pytest.raises(DomainError):
        separability_fit(Rayleigh(), 4.0, [0.0, 1.0, 2.0])


@pytest.mark.parametrize("alpha", [3.0, 4.0, 5.0])
@pytest.mark.parametrize("T", [0.1, 1.0, 10.0])
def test_beta_rayleigh_equals_one_plus_rho1(T, alpha):
    from dsrlab.coverage import rho1
    assert beta(T, alpha).value == pytest.approx(1 + rho1(T, alpha), abs=1e-10)
