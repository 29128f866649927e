"""Transmission weighting strategies and simultaneous-transmission DSR functionals.

A weight ``rho_i`` in ``[0, 1]`` scales how often holders of file ``i`` transmit,
so the active transmitter fraction is ``xi = sum_i rho_i pc(i)``.  The
simultaneous model lets every file be transmitted at once; receivers are served
by the nearest holder of a wanted file and all other active transmitters
interfere.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .caching import Pmf, dsrs, zipf
from .coverage import NetworkParams, pcov, pcov_simultaneous, pcov_simultaneous_alpha4
from .errors import DomainError
from .fading import FadingModel

__all__ = [
    "WeightVector",
    "ReceiverState",
    "PopularitySets",
    "Objective",
    "maxmin_weights",
    "maxmin_objective",
    "maxall_weights",
    "maxall_objective",
    "waterfill_weights",
    "popularity_sets",
    "dsr_popularity",
    "dsr_global",
    "best_zipf_exponent",
]


@dataclass(frozen=True, eq=False)
class WeightVector:
    rho: np.ndarray
    xi: float

    @classmethod
    def from_rho(cls, rho, pc: Pmf) -> "WeightVector":
        rho = np.asarray(rho, dtype=float)
        if np.any(rho < 0) or np.any(rho > 1):
            raise DomainError("weights must lie in [0, 1]")
        return cls(rho, float(np.dot(rho, pc.probs)))


@dataclass(frozen=True)
class ReceiverState:
    """A receiver class wanting any file of ``requested_files`` (0-based)."""

    state_id: int
    requested_files: frozenset
    p_j: float

    @classmethod
    def build(cls, state_id: int, files, pc: Pmf) -> "ReceiverState":
        files = frozenset(int(f) for f in files)
        if not files:
            raise DomainError("a receiver state needs at least one requested file")
        p = float(sum(pc.probs[f] for f in files))
        if not 0 < p <= 1 + 1e-12:
            raise DomainError("requested files must carry positive caching mass")
        return cls(state_id, files, min(p, 1.0))


@dataclass(frozen=True)
class PopularitySets:
    K_set: tuple
    L_set: tuple


class Objective(enum.Enum):
    Sequential = "Sequential"
    Popularity = "Popularity"
    Global = "Global"


def _products(pr: Pmf, pc: Pmf) -> np.ndarray:
    if pr.M != pc.M:
        raise DomainError("request and caching pmfs must have the same size")
    prod = pr.probs * pc.probs
    if np.any(prod <= 0):
        raise DomainError("max-min weights need strictly positive pr and pc")
    return prod


def maxmin_weights(pr: Pmf, pc: Pmf) -> WeightVector:
    """Weights equalizing ``pr(i) rho_i pc(i)`` at the smallest product ``eta``.

    Files whose product equals ``eta`` keep ``rho = 1``; the others are scaled
    down to ``eta / (pr(i) pc(i))``.
    """
    prod = _products(pr, pc)
    eta = float(np.min(prod))
    rho = np.where(prod == eta, 1.0, eta / prod)
    return WeightVector.from_rho(rho, pc)


def _cov(params, density, fading):
    return pcov(params.T, density, params.alpha, params.mu, params.sigma2, fading).p


def maxmin_objective(rho, pr: Pmf, pc: Pmf, params: NetworkParams,
                     fading: FadingModel | None = None) -> float:
    """``lam gamma2 min_i pr(i) rho_i pc(i) / xi * pcov(T, lam_t xi)``."""
    rho = np.asarray(rho, dtype=float)
    xi = float(np.dot(rho, pc.probs))
    if xi == 0:
        return 0.0
    m = float(np.min(pr.probs * rho * pc.probs))
    return params.lam * params.gamma2 * m / xi * _cov(params, params.lambda_t * xi, fading)


def maxall_weights(pr: Pmf, pc: Pmf) -> WeightVector:
    """All-ones weights: every holder transmits."""
    if pr.M != pc.M:
        raise DomainError("request and caching pmfs must have the same size")
    return WeightVector.from_rho(np.ones(pr.M), pc)


def maxall_objective(rho, pr: Pmf, pc: Pmf, params: NetworkParams,
                     fading: FadingModel | None = None) -> float:
    """``lam gamma2 pcov(T, lam_t xi) / xi * sum_i pr(i) rho_i pc(i)``."""
    rho = np.asarray(rho, dtype=float)
    xi = float(np.dot(rho, pc.probs))
    if xi == 0:
        return 0.0
    s = float(np.dot(pr.probs * rho, pc.probs))
    return params.lam * params.gamma2 * _cov(params, params.lambda_t * xi, fading) / xi * s


def waterfill_weights(pr: Pmf, pc: Pmf, xi: float) -> WeightVector:
    """Weights with total fraction ``xi`` filled from the most popular file down.

    Each file in popularity order takes as much of the remaining budget as its
    caching mass allows, never exceeding the previous file's weight.
    """
    if not 0 < xi <= 1:
        raise DomainError("transmission fraction must lie in (0, 1]")
    if pr.M != pc.M:
        raise DomainError("request and caching pmfs must have the same size")
    order = pr.sorted_order()
    rho = np.zeros(pr.M)
    remaining = xi
    prev = 1.0
    for i in order:
        # an uncached file consumes no budget, so it inherits the previous weight
        r = prev if pc.probs[i] == 0 else min(prev, remaining / pc.probs[i])
        rho[i] = r
        remaining = max(remaining - r * pc.probs[i], 0.0)
        prev = r
    return WeightVector.from_rho(rho, pc)


def popularity_sets(pr: Pmf, K: int, L=None) -> PopularitySets:
    """The ``K`` most requested files (ties by index) and the transmitter set."""
    if not 1 <= K <= pr.M:
        raise DomainError("K must lie in [1, M]")
    k_set = tuple(int(i) for i in pr.sorted_order()[:K])
    l_set = k_set if L is None else tuple(sorted(int(i) for i in L))
    if not l_set:
        raise DomainError("the transmitter set must be nonempty")
    return PopularitySets(k_set, l_set)


def _sim_cov(params, lambda_j, lambda_t):
    if params.mu != 1:
        raise DomainError("simultaneous coverage is derived for mu = 1")
    if lambda_j == 0:
        return 0.0
    if params.alpha == 4 and params.sigma2 > 0:
        return pcov_simultaneous_alpha4(params.T, lambda_t, lambda_j / lambda_t, params.sigma2).p
    return pcov_simultaneous(params.T, lambda_j, lambda_t, params.alpha, params.sigma2).p


def dsr_popularity(pr: Pmf, pc: Pmf, K: int, params: NetworkParams, L=None) -> float:
    """Popularity-based simultaneous DSR.

    Receivers wanting one of the ``K`` most popular files are served, and only
    holders of files in ``L`` (default: the same ``K`` files) transmit, so the
    candidate and total transmitter densities both equal
    ``lam gamma1 sum_{i in L} pc(i)``.
    """
    if pr.M != pc.M:
        raise DomainError("request and caching pmfs must have the same size")
    sets = popularity_sets(pr, K, L)
    xi_l = params.lambda_t * float(sum(pc.probs[i] for i in sets.L_set))
    cov = _sim_cov(params, xi_l, xi_l) if xi_l > 0 else 0.0
    return params.lam * params.gamma2 * float(sum(pr.probs[k] for k in sets.K_set)) * cov


def dsr_global(pr: Pmf, pc: Pmf, params: NetworkParams) -> float:
    """Global simultaneous DSR: every file is transmitted, receivers wanting file
    ``i`` see candidate density ``lam gamma1 pc(i)`` among ``lam gamma1``."""
    if pr.M != pc.M:
        raise DomainError("request and caching pmfs must have the same size")
    lt = params.lambda_t
    total = sum(w * _sim_cov(params, lt * q, lt) for w, q in zip(pr.probs, pc.probs) if w > 0)
    return params.lam * params.gamma2 * float(total)


def best_zipf_exponent(objective, pr: Pmf, params: NetworkParams, gamma_c_grid,
                       K: int | None = None, fading: FadingModel | None = None) -> float:
    """Grid argmax of the chosen objective over Zipf caching exponents.

    Ties go to the smaller exponent.  ``K`` (popularity objective only)
    defaults to ``max(1, M // 2)``.
    """
    objective = Objective(objective)
    grid = np.sort(np.asarray(gamma_c_grid, dtype=float))
    if grid.size == 0:
        raise DomainError("exponent grid must be nonempty")
    M = pr.M
    K = max(1, M // 2) if K is None else K

    def value(gc):
        pc = zipf(M, gc)
        if objective is Objective.Sequential:
            return dsrs(pr, pc, params, fading)
        if objective is Objective.Popularity:
            return dsr_popularity(pr, pc, K, params)
        return dsr_global(pr, pc, params)

    vals = np.array([value(g) for g in grid])
    return float(grid[int(np.argmax(vals))])
