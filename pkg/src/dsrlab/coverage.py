"""Analytic SINR coverage probabilities.

Every quadrature route is written in the rescaled form

    pcov = (1/beta) * K(c, alpha),   K(c, alpha) = int_0^inf exp(-w - c w^(alpha/2)) dw,

with ``c = mu T sigma2 (pi lambda beta)^(-alpha/2)``.  Here ``w`` is the squared
distance scaled by the void exponent, so the integrand has unit decay rate
whatever the density and the noise level.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

from .errors import DomainError
from .fading import FadingModel, Rayleigh, beta, beta_rayleigh_alpha4
from .numerics import (DEFAULT_QUAD, QuadratureSpec, integrate_interval,
                       integrate_semi_infinite, scaled_gaussian_q)

__all__ = [
    "NetworkParams",
    "Variant",
    "CoverageResult",
    "coverage_kernel",
    "pcov",
    "pcov_alpha4_closed",
    "pcov_small_noise",
    "small_noise_correction",
    "small_noise_error_bound",
    "rho1",
    "rho2",
    "pcov_simultaneous",
    "pcov_simultaneous_alpha4",
    "simultaneous_h",
]


@dataclass(frozen=True)
class NetworkParams:
    """Deployment and link parameters.

    Attributes
    ----------
    lam : float
        Node density per unit area.
    T : float
        SINR threshold (linear).
    alpha : float
        Path-loss exponent.
    mu : float
        Inverse transmit power.
    sigma2 : float
        Noise power.
    a : float
        Fraction of nodes that are active.
    gamma1 : float
        Fraction of nodes that transmit; receivers are the remaining ``a - gamma1``.
    """

    lam: float = 1.0
    T: float = 1.0
    alpha: float = 4.0
    mu: float = 1.0
    sigma2: float = 1.0
    a: float = 1.0
    gamma1: float = 0.4

    def __post_init__(self):
        if not self.lam > 0:
            raise DomainError("density must be positive")
        if not self.T > 0:
            raise DomainError("threshold must be positive")
        if not self.alpha > 2:
            raise DomainError("path-loss exponent must exceed 2")
        if not self.mu > 0:
            raise DomainError("mu must be positive")
        if not self.sigma2 >= 0:
            raise DomainError("noise power must be nonnegative")
        if not 0 < self.a <= 1:
            raise DomainError("active fraction must lie in (0, 1]")
        if not 0 < self.gamma1 < self.a:
            raise DomainError("transmitter fraction must lie in (0, a)")

    @classmethod
    def from_snr(cls, snr: float, **kw) -> "NetworkParams":
        """Build parameters with ``sigma2 = 1 / (mu * snr)``."""
        mu = kw.get("mu", 1.0)
        return cls(sigma2=1.0 / (mu * snr), **kw)

    @property
    def gamma2(self) -> float:
        return self.a - self.gamma1

    @property
    def lambda_t(self) -> float:
        return self.lam * self.gamma1

    @property
    def snr(self) -> float:
        return math.inf if self.sigma2 == 0 else 1.0 / (self.mu * self.sigma2)

    def replace(self, **kw) -> "NetworkParams":
        return replace(self, **kw)


class Variant(enum.Enum):
    GeneralQuadrature = "GeneralQuadrature"
    ClosedFormAlpha4 = "ClosedFormAlpha4"
    SmallNoise = "SmallNoise"
    NoNoise = "NoNoise"
    SimultaneousTheorem2 = "SimultaneousTheorem2"
    SimultaneousAlpha4 = "SimultaneousAlpha4"


@dataclass(frozen=True)
class CoverageResult:
    p: float
    variant: Variant
    err_estimate: float = 0.0
    clamped: bool = field(default=False)

    def __float__(self):
        return self.p


def coverage_kernel(c: float, alpha: float, moment: int = 0,
                    spec: QuadratureSpec = DEFAULT_QUAD) -> tuple[float, float]:
    """``int_0^inf w^moment exp(-w - c w^(alpha/2)) dw`` and its error estimate."""
    if c == 0.0:
        return float(math.factorial(moment)), 0.0
    h = alpha / 2.0
    # w = s*u with s the decay length of whichever term dominates
    s = min(1.0, c ** (-1.0 / h))
    cs = c * s ** h
    if moment == 0:
        f = lambda u: math.exp(-s * u - cs * u ** h)
    else:
        f = lambda u: u ** moment * math.exp(-s * u - cs * u ** h)
    v, err = integrate_semi_infinite(f, spec)
    scale = s ** (moment + 1)
    return v * scale, err * scale


def _beta(T, alpha, fading, mu):
    return beta(T, alpha, fading, mu).value


def pcov(T: float, lambda_tx: float, alpha: float, mu: float, sigma2: float,
         fading: FadingModel | None = None,
         spec: QuadratureSpec = DEFAULT_QUAD) -> CoverageResult:
    """Coverage of the typical receiver served by its nearest transmitter.

    ``lambda_tx`` is the density of transmitters that can serve the receiver
    (all of them interfere).  A zero density gives zero coverage.
    """
    if lambda_tx < 0:
        raise DomainError("transmitter density must be nonnegative")
    if sigma2 < 0:
        raise DomainError("noise power must be nonnegative")
    b = _beta(T, alpha, fading, mu)
    if sigma2 == 0:
        return CoverageResult(1.0 / b, Variant.NoNoise)
    if lambda_tx == 0:
        return CoverageResult(0.0, Variant.GeneralQuadrature)
    c = mu * T * sigma2 * (math.pi * lambda_tx * b) ** (-alpha / 2.0)
    k, err = coverage_kernel(c, alpha, 0, spec)
    return CoverageResult(k / b, Variant.GeneralQuadrature, err / b)


def pcov_alpha4_closed(T: float, lambda_tx: float, mu: float, sigma2: float,
                       fading: FadingModel | None = None) -> CoverageResult:
    """``alpha = 4`` Rayleigh coverage through the Gaussian tail function."""
    if fading is not None and not (isinstance(fading, Rayleigh) and fading.mu == mu):
        raise DomainError("the closed form needs Rayleigh interference with the signal rate")
    if not sigma2 > 0:
        raise DomainError("the closed form is singular at zero noise")
    if lambda_tx == 0:
        return CoverageResult(0.0, Variant.ClosedFormAlpha4)
    b = beta_rayleigh_alpha4(T)
    s = mu * T * sigma2
    x = lambda_tx * math.pi * b
    p = math.pi ** 1.5 * lambda_tx / math.sqrt(s) * scaled_gaussian_q(x / math.sqrt(2.0 * s))
    return CoverageResult(float(p), Variant.ClosedFormAlpha4)


def small_noise_correction(T, lambda_tx, alpha, mu, sigma2, b):
    """Second term of the small-noise expansion (subtracted from ``1/beta``)."""
    return (mu * T * sigma2 * (lambda_tx * math.pi) ** (-alpha / 2.0)
            * math.gamma(1.0 + alpha / 2.0) / b ** (alpha / 2.0 + 1.0))


def pcov_small_noise(T: float, lambda_tx: float, alpha: float, mu: float, sigma2: float,
                     fading: FadingModel | None = None) -> CoverageResult:
    """Two-term small-noise expansion of ``pcov``, clamped to ``[0, 1]``."""
    b = _beta(T, alpha, fading, mu)
    if sigma2 == 0:
        return CoverageResult(1.0 / b, Variant.SmallNoise)
    if not lambda_tx > 0:
        raise DomainError("transmitter density must be positive")
    p = 1.0 / b - small_noise_correction(T, lambda_tx, alpha, mu, sigma2, b)
    clamped = not 0.0 <= p <= 1.0
    return CoverageResult(min(max(p, 0.0), 1.0), Variant.SmallNoise, clamped=clamped)


def small_noise_error_bound(T, lambda_tx, alpha, mu, sigma2, fading=None):
    """Bound on the remainder of the two-term expansion.

    From ``|e^{-x} - 1 + x| <= x^2 / 2`` applied to the noise factor of the
    integrand: ``(mu T sigma2)^2 Gamma(alpha+1) / (2 beta (pi lambda beta)^alpha)``.
    """
    b = _beta(T, alpha, fading, mu)
    s = mu * T * sigma2
    return s * s * math.gamma(alpha + 1.0) / (2.0 * b * (math.pi * lambda_tx * b) ** alpha)


def rho1(T: float, alpha: float, spec: QuadratureSpec = DEFAULT_QUAD) -> float:
    """``T^(2/alpha) int_{T^(-2/alpha)}^inf du / (1 + u^(alpha/2))``."""
    if not (T > 0 and alpha > 2):
        raise DomainError("rho1 needs T > 0 and alpha > 2")
    lo = T ** (-2.0 / alpha)
    h = alpha / 2.0
    v, _ = integrate_semi_infinite(lambda w: 1.0 / (1.0 + (lo + w) ** h), spec)
    return T ** (2.0 / alpha) * v


def rho2(T: float, alpha: float, spec: QuadratureSpec = DEFAULT_QUAD) -> float:
    """``T^(2/alpha) int_0^{T^(-2/alpha)} du / (1 + u^(alpha/2))``."""
    if not (T > 0 and alpha > 2):
        raise DomainError("rho2 needs T > 0 and alpha > 2")
    hi = T ** (-2.0 / alpha)
    h = alpha / 2.0
    v, _ = integrate_interval(lambda u: 1.0 / (1.0 + u ** h), 0.0, hi, spec)
    return T ** (2.0 / alpha) * v


def pcov_simultaneous(T: float, lambda_j: float, lambda_t: float, alpha: float,
                      sigma2: float, spec: QuadratureSpec = DEFAULT_QUAD) -> CoverageResult:
    """Coverage when every transmitter is active and ``lambda_j`` of the total
    density ``lambda_t`` hold a file the receiver wants (Rayleigh, ``mu = 1``)."""
    if not 0 <= lambda_j <= lambda_t:
        raise DomainError("candidate density must lie in [0, lambda_t]")
    if not lambda_t > 0:
        raise DomainError("total transmitter density must be positive")
    if sigma2 < 0:
        raise DomainError("noise power must be nonnegative")
    if lambda_j == 0:
        return CoverageResult(0.0, Variant.SimultaneousTheorem2)
    r1, r2 = rho1(T, alpha, spec), rho2(T, alpha, spec)
    A = math.pi * lambda_j * (1.0 - r2) + math.pi * lambda_t * (r1 + r2)
    c = T * sigma2 * A ** (-alpha / 2.0)
    k, err = coverage_kernel(c, alpha, 0, spec)
    scale = math.pi * lambda_j / A
    return CoverageResult(scale * k, Variant.SimultaneousTheorem2, scale * err)


def simultaneous_h(T: float, lambda_t: float, p_j: float, sigma2: float) -> float:
    """Argument of the Gaussian tail in the ``alpha = 4`` simultaneous closed form."""
    rt = math.sqrt(T)
    return (p_j / rt - p_j * math.atan(1.0 / rt) + math.pi / 2.0) * math.pi * lambda_t \
        / math.sqrt(2.0 * sigma2)


def pcov_simultaneous_alpha4(T: float, lambda_t: float, p_j: float,
                             sigma2: float) -> CoverageResult:
    """Closed form of the simultaneous coverage at ``alpha = 4``, ``mu = 1``."""
    if not sigma2 > 0:
        raise DomainError("the closed form is singular at zero noise")
    if not 0 <= p_j <= 1:
        raise DomainError("p_j must be a probability")
    if p_j == 0:
        return CoverageResult(0.0, Variant.SimultaneousAlpha4)
    H = simultaneous_h(T, lambda_t, p_j, sigma2)
    p = math.pi * lambda_t * p_j * math.sqrt(math.pi / (T * sigma2)) * scaled_gaussian_q(H)
    return CoverageResult(float(p), Variant.SimultaneousAlpha4)
