"""Numerical kernels: semi-infinite quadrature, bracketed roots, Gaussian tails,
and the lower incomplete gamma function for negative order.

The quadrature and root finders are thin contracts around QUADPACK and Brent's
method from scipy; the incomplete gamma evaluation is implemented here because
scipy only provides it for positive order.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate, optimize, special

from .errors import DomainError, NonConvergence, NoSignChange

__all__ = [
    "QuadratureSpec",
    "RootSpec",
    "DEFAULT_QUAD",
    "integrate_semi_infinite",
    "integrate_interval",
    "gaussian_q",
    "scaled_gaussian_q",
    "gaussian_q_tight_approx",
    "lower_incomplete_gamma_neg",
    "find_root",
    "golden_section_max",
]

_SQRT2 = math.sqrt(2.0)
_SQRT2PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances for adaptive quadrature.

    Attributes
    ----------
    abs_tol, rel_tol : float
        The requested accuracy is ``max(abs_tol, rel_tol * |value|)``.
    max_subdivisions : int
        Upper bound on the number of adaptive panels.
    """

    abs_tol: float = 1e-10
    rel_tol: float = 1e-9
    max_subdivisions: int = 200

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise DomainError("quadrature tolerances must be positive")
        if self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be at least 1")


@dataclass(frozen=True)
class RootSpec:
    """Bracket and stopping rule for a scalar root search."""

    bracket_lo: float
    bracket_hi: float
    tol: float = 1e-12
    max_iter: int = 200

    def __post_init__(self):
        if not self.bracket_lo < self.bracket_hi:
            raise DomainError("bracket_lo must be below bracket_hi")
        if not self.tol > 0:
            raise DomainError("root tolerance must be positive")


DEFAULT_QUAD = QuadratureSpec()


def _quad(f, lo, hi, spec: QuadratureSpec) -> tuple[float, float]:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        value, err, info, *msg = integrate.quad(
            f, lo, hi, epsabs=spec.abs_tol, epsrel=spec.rel_tol,
            limit=spec.max_subdivisions, full_output=1)
    ier = 0 if not msg else 1
    if ier and not (err <= max(spec.abs_tol, spec.rel_tol * abs(value))):
        raise NonConvergence(
            f"quadrature on [{lo}, {hi}] stopped with error estimate {err:.3g}: {msg[0]}")
    if not math.isfinite(value):
        raise NonConvergence(f"quadrature on [{lo}, {hi}] produced {value}")
    return float(value), float(err)


def integrate_semi_infinite(f: Callable[[float], float],
                            spec: QuadratureSpec = DEFAULT_QUAD) -> tuple[float, float]:
    """Integrate ``f`` over ``[0, inf)``.

    QUADPACK's ``qagi`` maps the half line onto ``(0, 1]`` and applies
    adaptive 15-point Gauss-Kronrod panels, so exponential and Gaussian tails
    are handled without a hand-picked truncation point.

    Returns
    -------
    value, err_estimate : float

    Raises
    ------
    NonConvergence
        If the subdivision budget is exhausted before the tolerance is met.
    """
    return _quad(f, 0.0, np.inf, spec)


def integrate_interval(f: Callable[[float], float], lo: float, hi: float,
                       spec: QuadratureSpec = DEFAULT_QUAD) -> tuple[float, float]:
    """Integrate ``f`` over a finite interval ``[lo, hi]`` (integrable endpoint
    singularities are allowed)."""
    if hi == lo:
        return 0.0, 0.0
    return _quad(f, lo, hi, spec)


def gaussian_q(x):
    """Standard normal upper tail ``P[N(0,1) > x]``."""
    return 0.5 * special.erfc(np.asarray(x, dtype=float) / _SQRT2) if np.ndim(x) \
        else float(0.5 * special.erfc(x / _SQRT2))


def scaled_gaussian_q(x):
    """``exp(x**2 / 2) * Q(x)`` without overflow, via the scaled erfc."""
    if np.ndim(x):
        return 0.5 * special.erfcx(np.asarray(x, dtype=float) / _SQRT2)
    return float(0.5 * special.erfcx(x / _SQRT2))


def gaussian_q_tight_approx(x: float) -> float:
    """Karagiannidis-Lioumpas approximation of ``Q(x)`` for ``x > 0``."""
    if not x > 0:
        raise DomainError("the tight Q approximation needs x > 0")
    return -math.expm1(-1.4 * x) * math.exp(-0.5 * x * x) / (1.135 * _SQRT2PI * x)


def _lower_gamma_series(s: float, x: float) -> float:
    # x^s e^{-x} sum_k x^k / (s (s+1) ... (s+k))
    term = 1.0 / s
    total = term
    k = 0
    while True:
        k += 1
        term *= x / (s + k)
        total += term
        if abs(term) <= 1e-17 * abs(total):
            break
        if k > 500:
            raise NonConvergence("incomplete gamma series did not converge")
    return math.exp(s * math.log(x) - x) * total


def _upper_gamma_cf(s: float, x: float) -> float:
    # modified Lentz evaluation of the continued fraction for Gamma(s, x)
    tiny = 1e-300
    b = x + 1.0 - s
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 500):
        an = -i * (i - s)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) <= 1e-16:
            return math.exp(s * math.log(x) - x) * h
    raise NonConvergence("incomplete gamma continued fraction did not converge")


def lower_incomplete_gamma_neg(s: float, x: float) -> float:
    """Lower incomplete gamma ``gamma(s, x) = Gamma(s) - Gamma(s, x)`` for
    ``-1 < s < 0``.

    The value is negative on this range. It is computed by the Kummer series
    for ``x <= 1.5`` and as ``Gamma(s)`` minus a continued fraction for the
    upper function beyond.
    """
    if not -1.0 < s < 0.0:
        raise DomainError("order must lie in (-1, 0)")
    if not x > 0:
        raise DomainError("argument must be positive")
    if x <= 1.5:
        return _lower_gamma_series(s, x)
    return math.gamma(s) - _upper_gamma_cf(s, x)


def find_root(g: Callable[[float], float], spec: RootSpec) -> float:
    """Bracketed root of a continuous scalar function (Brent's method).

    Raises
    ------
    NoSignChange
        If ``g`` has the same sign at both bracket ends.
    NonConvergence
        If ``spec.max_iter`` iterations do not reach ``spec.tol``.
    """
    lo, hi = spec.bracket_lo, spec.bracket_hi
    glo, ghi = g(lo), g(hi)
    if glo == 0.0:
        return lo
    if ghi == 0.0:
        return hi
    if not (math.isfinite(glo) and math.isfinite(ghi)) or glo * ghi > 0:
        raise NoSignChange(f"no sign change on [{lo}, {hi}]: g={glo:.4g}, {ghi:.4g}")
    try:
        root, res = optimize.brentq(g, lo, hi, xtol=spec.tol, maxiter=spec.max_iter,
                                    full_output=True, disp=False)
    except RuntimeError as exc:  # pragma: no cover - brentq raises only with disp
        raise NonConvergence(str(exc)) from exc
    if not res.converged:
        raise NonConvergence(f"root search stopped after {res.iterations} iterations")
    return float(root)


_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section_max(f: Callable[[float], float], lo: float, hi: float,
                       tol: float = 1e-9, max_iter: int = 500) -> tuple[float, float]:
    """Maximize a unimodal function on ``[lo, hi]``; returns ``(x, f(x))``."""
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    else:
        raise NonConvergence("golden-section search exceeded max_iter")
    return (c, fc) if fc >= fd else (d, fd)
