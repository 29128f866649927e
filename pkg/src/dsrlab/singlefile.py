"""Single-file density of successful receptions and its optimum over the
transmitter fraction ``gamma1``.

With ``A = pi lam gamma1 beta`` and the coverage kernels ``K0``, ``K1`` (see
:func:`dsrlab.coverage.coverage_kernel`), the first-order condition of
``lam (a - gamma1) pcov(lam gamma1)`` reduces to

    (a - 2 gamma1) / (a - gamma1) = K1(c) / K0(c),   c = mu T sigma2 A^(-alpha/2),

which is what :func:`optimize_gamma1` solves with ``method="stationarity"``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .coverage import (CoverageResult, NetworkParams, coverage_kernel, pcov,
                       pcov_alpha4_closed)
from .errors import DomainError
from .fading import FadingModel, Rayleigh, beta, beta_rayleigh_alpha4
from .numerics import RootSpec, find_root, golden_section_max

__all__ = [
    "DsrPoint",
    "Method",
    "SingleFileOptimum",
    "EPS_GAMMA",
    "dsr_single",
    "optimize_gamma1",
    "stationarity_residual",
    "dsr_max_alpha4",
    "gamma1_low_snr",
    "low_snr_lhs",
    "dsr_max_small_noise",
]

EPS_GAMMA = 1e-6


@dataclass(frozen=True)
class DsrPoint:
    gamma1: float
    dsr: float
    pcov_used: CoverageResult


class Method(enum.Enum):
    NumericScan = "NumericScan"
    StationaritySolve = "StationaritySolve"
    ClosedFormAlpha4 = "ClosedFormAlpha4"
    SmallNoise = "SmallNoise"
    LowSnr = "LowSnr"


@dataclass(frozen=True)
class SingleFileOptimum:
    """Optimal transmitter fraction.

    ``degenerate`` marks the noiseless case, where the optimum sits at the
    boundary and ``gamma1_opt`` is only a placeholder.
    """

    gamma1_opt: float
    dsr_max: float
    method: Method
    degenerate: bool = False


def _beta(params: NetworkParams, fading):
    return beta(params.T, params.alpha, fading, params.mu).value


def dsr_single(params: NetworkParams, fading: FadingModel | None = None) -> DsrPoint:
    """``lam * (a - gamma1) * pcov(T, lam gamma1)``."""
    cov = pcov(params.T, params.lambda_t, params.alpha, params.mu, params.sigma2, fading)
    return DsrPoint(params.gamma1, params.lam * params.gamma2 * cov.p, cov)


def _dsr_at(params, fading, g):
    cov = pcov(params.T, params.lam * g, params.alpha, params.mu, params.sigma2, fading)
    return params.lam * (params.a - g) * cov.p


def _degenerate(params, fading, method):
    b = _beta(params, fading)
    return SingleFileOptimum(EPS_GAMMA, params.lam * (params.a - EPS_GAMMA) / b, method,
                             degenerate=True)


def stationarity_residual(params: NetworkParams, gamma1: float,
                          fading: FadingModel | None = None) -> float:
    """``(a - 2g)/(a - g) - K1/K0``: positive below the optimum, negative above."""
    b = _beta(params, fading)
    A = math.pi * params.lam * gamma1 * b
    c = params.mu * params.T * params.sigma2 * A ** (-params.alpha / 2.0)
    k0, _ = coverage_kernel(c, params.alpha, 0)
    k1, _ = coverage_kernel(c, params.alpha, 1)
    a = params.a
    return (a - 2.0 * gamma1) / (a - gamma1) - k1 / k0


def _scan(params, fading, tol=1e-9):
    a = params.a
    grid = np.linspace(0.0, a, 65)[1:-1]
    vals = [_dsr_at(params, fading, g) for g in grid]
    k = int(np.argmax(vals))
    lo = grid[k - 1] if k > 0 else EPS_GAMMA
    hi = grid[k + 1] if k + 1 < len(grid) else a - EPS_GAMMA
    g, v = golden_section_max(lambda x: _dsr_at(params, fading, x), lo, hi, tol * a)
    return float(g), float(v)


def optimize_gamma1(params: NetworkParams, fading: FadingModel | None = None,
                    method: str = "scan") -> SingleFileOptimum:
    """Maximize the single-file DSR over ``gamma1`` (``params.gamma1`` is ignored).

    Parameters
    ----------
    method : {"scan", "stationarity"}
        ``"scan"`` runs a coarse grid followed by golden-section refinement;
        ``"stationarity"`` finds the root of the first-order condition.
    """
    if method not in ("scan", "stationarity"):
        raise DomainError(f"unknown method {method!r}")
    tag = Method.NumericScan if method == "scan" else Method.StationaritySolve
    if params.sigma2 == 0:
        return _degenerate(params, fading, tag)
    if method == "scan":
        g, v = _scan(params, fading)
        return SingleFileOptimum(g, v, tag)
    a = params.a
    g = find_root(lambda x: stationarity_residual(params, x, fading),
                  RootSpec(EPS_GAMMA, a - EPS_GAMMA, tol=1e-13))
    return SingleFileOptimum(g, _dsr_at(params, fading, g), tag)


def _check_alpha4_rayleigh(params, fading):
    if params.alpha != 4:
        raise DomainError("this optimum is specific to alpha = 4")
    if fading is not None and not (isinstance(fading, Rayleigh) and fading.mu == params.mu):
        raise DomainError("this optimum assumes Rayleigh interference")


def dsr_max_alpha4(params: NetworkParams, fading: FadingModel | None = None) -> SingleFileOptimum:
    """Optimum at ``alpha = 4`` from the fixed point coupling ``gamma1`` and the
    closed-form coverage.

    The fixed point

        (1/g)(1/g - 1/(a-g)) = (pi lam)^2 beta^2 / (2 b) * (1/(beta pcov(g)) - 1),

    with ``b = mu T sigma2``, is solved as a bracketed root in ``g``, and the DSR
    follows from the explicit expression in ``g``.
    """
    _check_alpha4_rayleigh(params, fading)
    if not params.sigma2 > 0:
        raise DomainError("the alpha = 4 optimum needs positive noise")
    lam, a = params.lam, params.a
    b = params.mu * params.T * params.sigma2
    bt = float(beta_rayleigh_alpha4(params.T))
    k = (math.pi * lam) ** 2 * bt ** 2 / (2.0 * b)

    def resid(g):
        p = pcov_alpha4_closed(params.T, lam * g, params.mu, params.sigma2).p
        return (1.0 / g) * (1.0 / g - 1.0 / (a - g)) - k * (1.0 / (bt * p) - 1.0)

    g = find_root(resid, RootSpec(EPS_GAMMA, a - EPS_GAMMA, tol=1e-13))
    lhs = (1.0 / g) * (1.0 / g - 1.0 / (a - g))
    dsr = lam * (a - g) / (lhs * 2.0 * b / ((math.pi * lam) ** 2 * bt) + bt)
    return SingleFileOptimum(g, dsr, Method.ClosedFormAlpha4)


def low_snr_lhs(gamma1, a=1.0):
    """``(a - 3 a g + 3 g^2) / (g^3 (a - g))``."""
    g = gamma1
    return (a - 3 * a * g + 3 * g * g) / (g ** 3 * (a - g))


def gamma1_low_snr(params: NetworkParams) -> float:
    """Optimal ``gamma1`` from the low-SNR (large noise) expansion at ``alpha = 4``.

    Raises
    ------
    NoSignChange
        If the expansion has no root in ``(0, a/2)``, which happens when the
        right-hand side ``(pi lam)^2 / (4 mu T sigma2)`` is below
        ``16 (1 - 3a/4) / a^3``.
    """
    _check_alpha4_rayleigh(params, None)
    if not params.sigma2 > 0:
        raise DomainError("the low-SNR optimum needs positive noise")
    a = params.a
    rhs = (math.pi * params.lam) ** 2 / (4.0 * params.mu * params.T * params.sigma2)
    return find_root(lambda g: low_snr_lhs(g, a) - rhs, RootSpec(EPS_GAMMA, a / 2.0, tol=1e-14))


def dsr_max_small_noise(params: NetworkParams,
                        fading: FadingModel | None = None) -> SingleFileOptimum:
    """Optimum of the two-term small-noise expansion of the DSR.

    The expansion reads ``lam (a-g) (1/beta - C g^(-alpha/2))``.  At ``alpha = 4``
    the stationary point solves ``(pi lam g beta)^2 = 2 b (2a/g - 1)`` and the DSR
    is reported through ``(2 lam (a-g) / beta) (a-g)/(2a-g)``; other exponents
    solve ``1/beta = C g^(-alpha/2) ((alpha/2) a/g + 1 - alpha/2)``.

    Raises
    ------
    NoSignChange
        If the noise is too large for the expansion to have an interior optimum
        below ``a/2``.
    """
    if not params.sigma2 > 0:
        return _degenerate(params, fading, Method.SmallNoise)
    lam, a, alpha = params.lam, params.a, params.alpha
    b = params.mu * params.T * params.sigma2
    bt = _beta(params, fading)
    if alpha == 4:
        k = (math.pi * lam * bt) ** 2
        g = find_root(lambda x: k * x ** 3 - 2.0 * b * (2.0 * a - x),
                      RootSpec(EPS_GAMMA, a / 2.0, tol=1e-14))
        dsr = 2.0 * lam * (a - g) / bt * (a - g) / (2.0 * a - g)
        return SingleFileOptimum(g, dsr, Method.SmallNoise)
    h = alpha / 2.0
    C = b * math.gamma(1.0 + h) * (lam * math.pi) ** (-h) / bt ** (h + 1.0)

    def resid(x):
        # the stationarity condition multiplied through by x^(h+1)
        return C * (h * a + (1.0 - h) * x) - x ** (h + 1.0) / bt

    g = find_root(resid, RootSpec(EPS_GAMMA, a / 2.0, tol=1e-14))
    dsr = lam * (a - g) * (1.0 / bt - C * g ** (-h))
    return SingleFileOptimum(g, dsr, Method.SmallNoise)
