"""Interference power distributions and the interference functional beta.

``beta(T, alpha)`` multiplies the nearest-neighbour void exponent of the
coverage integral.  With unit-mean Exponential signal power (rate ``mu``) and
interference power ``g`` it is

    beta = (2 (mu T)^d / alpha) * E[g^d * (-gamma(-d, mu T g))],  d = 2/alpha,

where ``gamma`` is the lower incomplete gamma function.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy import special

from .errors import DomainError
from .numerics import (DEFAULT_QUAD, QuadratureSpec, integrate_interval,
                       integrate_semi_infinite, lower_incomplete_gamma_neg)

__all__ = [
    "Rayleigh",
    "Ricean",
    "Nakagami",
    "FadingModel",
    "BetaValue",
    "beta",
    "beta_rayleigh_alpha4",
    "separability_fit",
    "sample_power",
]


@dataclass(frozen=True)
class Rayleigh:
    """Exponential power with rate ``mu`` (mean ``1/mu``)."""

    mu: float = 1.0

    def __post_init__(self):
        if not self.mu > 0:
            raise DomainError("Rayleigh rate must be positive")

    @property
    def mean_power(self) -> float:
        return 1.0 / self.mu

    def pdf(self, g):
        return self.mu * np.exp(-self.mu * np.asarray(g, dtype=float))

    def laplace(self, t):
        """``E[exp(-t g)]``."""
        return self.mu / (self.mu + np.asarray(t, dtype=float))

    def moment(self, p: float) -> float:
        """``E[g^p]`` for ``p > -1``."""
        return math.gamma(1.0 + p) * self.mu ** (-p)

    def sample(self, rng: np.random.Generator, size=None):
        return rng.standard_exponential(size) / self.mu


@dataclass(frozen=True)
class Ricean:
    """Power of a complex Gaussian with line-of-sight amplitude ``v`` and
    per-component standard deviation ``sigma_f``.

    The default ``sigma_f = 1/sqrt(2)`` gives unit mean scattered power.
    """

    v: float = 1.0
    sigma_f: float = 1.0 / math.sqrt(2.0)

    def __post_init__(self):
        if not self.v >= 0:
            raise DomainError("Ricean line-of-sight amplitude must be nonnegative")
        if not self.sigma_f > 0:
            raise DomainError("Ricean spread must be positive")

    @property
    def k_factor(self) -> float:
        return self.v ** 2 / (2.0 * self.sigma_f ** 2)

    @property
    def mean_power(self) -> float:
        return self.v ** 2 + 2.0 * self.sigma_f ** 2

    def pdf(self, g):
        g = np.asarray(g, dtype=float)
        s2 = self.sigma_f ** 2
        root = np.sqrt(g)
        # exp(-(g+v^2)/2s2) I0(v sqrt(g)/s2), with the Bessel factor scaled
        return np.exp(-(root - self.v) ** 2 / (2 * s2)) * special.i0e(self.v * root / s2) / (2 * s2)

    def laplace(self, t):
        t = np.asarray(t, dtype=float)
        w = 1.0 + 2.0 * self.sigma_f ** 2 * t
        return np.exp(-self.v ** 2 * t / w) / w

    def moment(self, p: float) -> float:
        val, _ = _expect(self, lambda g: g ** p, DEFAULT_QUAD)
        return val

    def sample(self, rng: np.random.Generator, size=None):
        re = self.v + self.sigma_f * rng.standard_normal(size)
        im = self.sigma_f * rng.standard_normal(size)
        return re * re + im * im


@dataclass(frozen=True)
class Nakagami:
    """Gamma power with shape ``m`` and mean ``omega``."""

    m: float = 1.0
    omega: float = 1.0

    def __post_init__(self):
        if not self.m >= 0.5:
            raise DomainError("Nakagami shape must be at least 0.5")
        if not self.omega > 0:
            raise DomainError("Nakagami spread must be positive")

    @property
    def mean_power(self) -> float:
        return self.omega

    def pdf(self, g):
        g = np.asarray(g, dtype=float)
        theta = self.omega / self.m
        with np.errstate(divide="ignore"):
            logp = ((self.m - 1) * np.log(g) - g / theta
                    - special.gammaln(self.m) - self.m * math.log(theta))
        return np.exp(logp)

    def laplace(self, t):
        return (1.0 + np.asarray(t, dtype=float) * self.omega / self.m) ** (-self.m)

    def moment(self, p: float) -> float:
        theta = self.omega / self.m
        return math.exp(special.gammaln(self.m + p) - special.gammaln(self.m)) * theta ** p

    def sample(self, rng: np.random.Generator, size=None):
        return rng.gamma(self.m, self.omega / self.m, size)


FadingModel = Union[Rayleigh, Ricean, Nakagami]


def sample_power(fading: FadingModel, rng: np.random.Generator, size=None):
    """Draw i.i.d. power samples from ``fading`` using the caller's generator."""
    return fading.sample(rng, size)


def _expect(fading: FadingModel, h, spec: QuadratureSpec) -> tuple[float, float]:
    """``E[h(g)]`` by quadrature against the power density, split at the mean."""
    split = fading.mean_power

    def integrand(g):
        return float(h(g) * fading.pdf(g)) if g > 0 else 0.0

    head, e1 = integrate_interval(integrand, 0.0, split, spec)
    tail, e2 = integrate_semi_infinite(lambda u: integrand(split + u), spec)
    return head + tail, e1 + e2


@dataclass(frozen=True)
class BetaValue:
    """Value of the interference functional with its provenance."""

    value: float
    T: float
    alpha: float
    fading: FadingModel
    mu: float
    err_estimate: float

    def __float__(self):
        return self.value


def _resolve_mu(fading, mu):
    if mu is not None:
        return float(mu)
    return fading.mu if isinstance(fading, Rayleigh) else 1.0


@functools.lru_cache(maxsize=4096)
def _beta_cached(T, alpha, fading, mu, spec):
    d = 2.0 / alpha
    mt = mu * T

    def h(g):
        x = mt * g
        if x == 0.0:
            return mt ** (-d) / d
        return g ** d * -lower_incomplete_gamma_neg(-d, x)

    e, err = _expect(fading, h, spec)
    pref = 2.0 * mt ** d / alpha
    return BetaValue(pref * e, T, alpha, fading, mu, pref * err)


def beta(T: float, alpha: float, fading: FadingModel | None = None,
         mu: float | None = None, spec: QuadratureSpec = DEFAULT_QUAD) -> BetaValue:
    """Interference functional ``beta(T, alpha)`` as an expectation over ``g``.

    Parameters
    ----------
    T : float
        SINR threshold (linear).
    alpha : float
        Path-loss exponent, ``> 2``.
    fading : FadingModel, optional
        Interference power law; Rayleigh with the signal rate by default.
    mu : float, optional
        Rate of the Exponential signal power.  Defaults to the Rayleigh rate
        when ``fading`` is Rayleigh and to 1 otherwise.
    """
    if not T > 0:
        raise DomainError("threshold must be positive")
    if not alpha > 2:
        raise DomainError("path-loss exponent must exceed 2")
    if fading is None:
        fading = Rayleigh(1.0 if mu is None else float(mu))
    return _beta_cached(float(T), float(alpha), fading, _resolve_mu(fading, mu), spec)


def beta_rayleigh_alpha4(T):
    """Closed form ``1 + sqrt(T) atan(sqrt(T))`` (Rayleigh, ``alpha = 4``)."""
    r = np.sqrt(T)
    return 1.0 + r * np.arctan(r)


def separability_fit(fading: FadingModel, alpha: float, T_grid) -> tuple[float, float, float]:
    """Least-squares line through ``beta(T)^(alpha/2)`` against ``T``.

    Returns
    -------
    slope, intercept, max_rel_residual : float
    """
    T = np.asarray(T_grid, dtype=float)
    if T.ndim != 1 or T.size < 3:
        raise DomainError("separability fit needs at least 3 thresholds")
    if np.any(T <= 0):
        raise DomainError("thresholds must be positive")
    y = np.array([beta(t, alpha, fading).value for t in T]) ** (alpha / 2.0)
    slope, intercept = np.polyfit(T, y, 1)
    fit = slope * T + intercept
    return float(slope), float(intercept), float(np.max(np.abs(fit - y) / y))
