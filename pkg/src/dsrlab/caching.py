"""Popularity and caching distributions for the sequential multi-file model.

The objective is

    DSRs(pc) = lam gamma2 sum_i pr(i) pcov(T, lam gamma1 pc(i)),

i.e. each file is served by its own thinned transmitter process.  This module
provides the objective, its gamma1 stationarity, closed-form caching rules and a
projected-gradient optimizer over the probability simplex.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from .coverage import NetworkParams, coverage_kernel, pcov
from .errors import DomainError, NonConvergence, ValidityViolation
from .fading import FadingModel, beta
from .numerics import RootSpec, find_root, golden_section_max
from .singlefile import EPS_GAMMA

__all__ = [
    "Pmf",
    "BenfordPmf",
    "CachingSolution",
    "zipf",
    "geometric",
    "dsrs",
    "dsrs_gradient",
    "optimal_gamma1_multifile",
    "optimal_caching_zipf",
    "optimal_caching_general",
    "benford_bound",
    "benford_pmf",
    "benford_scale",
    "benford_caching",
    "project_simplex",
    "optimize_caching_numeric",
    "dsrs_bounds",
]

PC_FLOOR = 1e-9


@dataclass(frozen=True, eq=False)
class Pmf:
    """Probability mass function over files ``1..M`` (index order kept as given)."""

    probs: np.ndarray

    def __post_init__(self):
        p = np.array(self.probs, dtype=float)
        if p.ndim != 1 or p.size < 1:
            raise DomainError("a pmf needs a nonempty vector")
        if np.any(~np.isfinite(p)) or np.any(p < 0):
            raise DomainError("pmf entries must be finite and nonnegative")
        if abs(p.sum() - 1.0) > 1e-12:
            raise DomainError(f"pmf sums to {p.sum()!r}, not 1")
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    @classmethod
    def from_weights(cls, w) -> "Pmf":
        w = np.asarray(w, dtype=float)
        if np.any(w < 0) or not w.sum() > 0:
            raise DomainError("weights must be nonnegative with positive sum")
        return cls(w / w.sum())

    @property
    def M(self) -> int:
        return self.probs.size

    def __len__(self):
        return self.M

    def __getitem__(self, i):
        return self.probs[i]

    def sorted_order(self) -> np.ndarray:
        """Permutation sorting entries nonincreasing (ties by ascending index)."""
        return np.argsort(-self.probs, kind="stable")


def zipf(M: int, gamma: float) -> Pmf:
    """``p(i) proportional to i^(-gamma)``, ``i = 1..M``."""
    if M < 1:
        raise DomainError("catalog size must be at least 1")
    if gamma < 0:
        raise DomainError("Zipf exponent must be nonnegative")
    return Pmf.from_weights(np.arange(1, M + 1, dtype=float) ** (-gamma))


def geometric(M: int, p: float) -> Pmf:
    """Geometric law truncated to ``M`` files, ``p(i) proportional to (1-p)^(i-1)``."""
    if not 0 < p < 1:
        raise DomainError("geometric parameter must lie in (0, 1)")
    return Pmf.from_weights((1.0 - p) ** np.arange(M, dtype=float))


def _check_pair(pr: Pmf, pc: Pmf):
    if pr.M != pc.M:
        raise DomainError("request and caching pmfs must have the same size")


def _file_coverages(pc_probs, params, fading):
    return np.array([pcov(params.T, params.lambda_t * q, params.alpha, params.mu,
                          params.sigma2, fading).p for q in pc_probs])


def dsrs(pr: Pmf, pc: Pmf, params: NetworkParams, fading: FadingModel | None = None) -> float:
    """Sequential-model DSR ``lam gamma2 sum_i pr(i) pcov(T, lam gamma1 pc(i))``."""
    _check_pair(pr, pc)
    return _dsrs_raw(pr.probs, pc.probs, params, fading)


def _dsrs_raw(pr, q, params, fading):
    mask = pr > 0
    cov = _file_coverages(q[mask], params, fading)
    return float(params.lam * params.gamma2 * np.dot(pr[mask], cov))


def _dpcov_dpc(q, params, fading, b):
    # d pcov(T, lam_t q) / dq = (K0 - K1) / (q beta)
    if params.sigma2 == 0:
        return 0.0
    A = math.pi * params.lambda_t * q * b
    c = params.mu * params.T * params.sigma2 * A ** (-params.alpha / 2.0)
    k0, _ = coverage_kernel(c, params.alpha, 0)
    k1, _ = coverage_kernel(c, params.alpha, 1)
    return (k0 - k1) / (q * b)


def dsrs_gradient(pr: Pmf, pc, params: NetworkParams,
                  fading: FadingModel | None = None) -> np.ndarray:
    """Gradient of :func:`dsrs` with respect to the caching probabilities.

    Each partial derivative is a quadrature of the differentiated integrand.
    Entries of ``pc`` must be strictly positive.
    """
    q = np.asarray(getattr(pc, "probs", pc), dtype=float)
    if np.any(q <= 0):
        raise DomainError("gradient needs strictly positive caching probabilities")
    b = beta(params.T, params.alpha, fading, params.mu).value
    d = np.array([_dpcov_dpc(x, params, fading, b) for x in q])
    return params.lam * params.gamma2 * pr.probs * d


def optimal_gamma1_multifile(pr: Pmf, pc: Pmf, params: NetworkParams,
                             fading: FadingModel | None = None,
                             method: str = "stationarity") -> float:
    """Transmitter fraction maximizing :func:`dsrs` for fixed ``pr`` and ``pc``.

    The stationarity sum is written per file as
    ``pr(i) ((a - 2g)/(a - g) K0(c_i) - K1(c_i))`` after clearing positive
    factors; ``method="scan"`` maximizes the objective directly instead.
    """
    _check_pair(pr, pc)
    if method not in ("stationarity", "scan"):
        raise DomainError(f"unknown method {method!r}")
    a = params.a
    live = (pr.probs > 0) & (pc.probs > 0)
    w, q = pr.probs[live], pc.probs[live]
    if method == "scan":
        f = lambda g: _dsrs_raw(pr.probs, pc.probs, params.replace(gamma1=g), fading)
        grid = np.linspace(0.0, a, 65)[1:-1]
        k = int(np.argmax([f(g) for g in grid]))
        lo = grid[k - 1] if k > 0 else EPS_GAMMA
        hi = grid[k + 1] if k + 1 < len(grid) else a - EPS_GAMMA
        return float(golden_section_max(f, lo, hi, 1e-9 * a)[0])
    if params.sigma2 == 0:
        raise DomainError("the noiseless optimum is degenerate")
    b = beta(params.T, params.alpha, fading, params.mu).value
    s = params.mu * params.T * params.sigma2

    def resid(g):
        total = 0.0
        lead = (a - 2.0 * g) / (a - g)
        for wi, qi in zip(w, q):
            c = s * (math.pi * params.lam * g * qi * b) ** (-params.alpha / 2.0)
            k0, _ = coverage_kernel(c, params.alpha, 0)
            k1, _ = coverage_kernel(c, params.alpha, 1)
            total += wi * (lead * k0 - k1)
        return total

    return find_root(resid, RootSpec(EPS_GAMMA, a - EPS_GAMMA, tol=1e-13))


def optimal_caching_zipf(gamma_r: float, alpha: float) -> float:
    """Zipf caching exponent ``gamma_r / (alpha/2 + 1)`` for Zipf requests."""
    if not alpha > 2:
        raise DomainError("path-loss exponent must exceed 2")
    if gamma_r < 0:
        raise DomainError("Zipf exponent must be nonnegative")
    return gamma_r / (alpha / 2.0 + 1.0)


def optimal_caching_general(pr: Pmf, alpha: float) -> Pmf:
    """Flatten a request pmf: ``pc proportional to pr^(1/(alpha/2 + 1))``."""
    if not alpha > 2:
        raise DomainError("path-loss exponent must exceed 2")
    if np.any(pr.probs <= 0):
        raise DomainError("flattening needs strictly positive request probabilities")
    return Pmf.from_weights(pr.probs ** (1.0 / (alpha / 2.0 + 1.0)))


def benford_bound(M: int) -> float:
    """Largest scale ``b`` keeping the Benford-shaped pmf nonnegative."""
    if M < 1:
        raise DomainError("catalog size must be at least 1")
    denom = M * math.log(M) - special.gammaln(M + 1)
    return math.inf if denom <= 0 else 1.0 / denom


@dataclass(frozen=True, eq=False)
class BenfordPmf:
    """``p(i) = a_i + b log((i+1)/i)`` with shifts ``a_i`` making it sum to one."""

    b: float
    shifts: np.ndarray
    probs: np.ndarray
    bound: float = field(default=math.inf)

    @property
    def M(self) -> int:
        return self.probs.size

    @property
    def valid(self) -> bool:
        return bool(self.probs[-1] >= 0)

    def to_pmf(self) -> Pmf:
        if not self.valid:
            raise ValidityViolation("Benford pmf has negative entries", self.bound, self.b)
        return Pmf(np.clip(self.probs, 0.0, None))


def benford_pmf(M: int, b: float) -> BenfordPmf:
    """Build the Benford-shaped pmf for scale ``b`` without a validity check."""
    if M < 1:
        raise DomainError("catalog size must be at least 1")
    if b < 0:
        raise DomainError("Benford scale must be nonnegative")
    i = np.arange(1, M + 1, dtype=float)
    j = np.arange(1, M + 1, dtype=float)
    shifts = 1.0 / M + (b / M) * (np.log(j).sum() - M * np.log(i + 1.0))
    probs = shifts + b * np.log1p(1.0 / i)
    shifts.setflags(write=False)
    probs.setflags(write=False)
    return BenfordPmf(float(b), shifts, probs, benford_bound(M))


def benford_scale(gamma_r: float, params: NetworkParams,
                  fading: FadingModel | None = None) -> float:
    """``sqrt(mu T sigma2) gamma_r / (pi lam_t beta(T, 4))``."""
    b4 = beta(params.T, 4.0, fading, params.mu).value
    return math.sqrt(params.mu * params.T * params.sigma2) * gamma_r / (math.pi * params.lambda_t * b4)


def benford_caching(M: int, gamma_r: float, params: NetworkParams,
                    fading: FadingModel | None = None) -> BenfordPmf:
    """Benford-shaped caching pmf for Zipf(``gamma_r``) requests at ``alpha = 4``.

    Raises
    ------
    ValidityViolation
        If the scale exceeds :func:`benford_bound`, i.e. the last entry would be
        negative.
    """
    if params.alpha != 4:
        raise DomainError("the Benford construction is derived for alpha = 4")
    b = benford_scale(gamma_r, params, fading)
    pmf = benford_pmf(M, b)
    if not pmf.valid:
        raise ValidityViolation(
            f"Benford scale {b:.6g} exceeds the validity bound {pmf.bound:.6g}", pmf.bound, b)
    return pmf


def project_simplex(y, mass: float = 1.0) -> np.ndarray:
    """Euclidean projection onto ``{x >= 0, sum x = mass}`` (sort and threshold)."""
    y = np.asarray(y, dtype=float)
    u = np.sort(y)[::-1]
    css = np.cumsum(u) - mass
    ind = np.arange(1, y.size + 1)
    rho = ind[u - css / ind > 0][-1]
    theta = css[rho - 1] / rho
    return np.maximum(y - theta, 0.0)


def _project_floor(y, floor):
    return floor + project_simplex(np.asarray(y) - floor, 1.0 - floor * len(y))


@dataclass(frozen=True, eq=False)
class CachingSolution:
    """Result of :func:`optimize_caching_numeric`.

    Attributes
    ----------
    pc : Pmf
        Best caching pmf found.
    dsrs : float
        Objective at ``pc``.
    start : str
        Name of the start (or ``"random"``) that produced ``pc``.
    history : tuple of float
        Objective after each accepted ascent step of the winning start.
    candidates : dict
        Objective at every start point before ascent.
    random_search_dsrs : float or None
        Best objective among random pmfs, when requested.
    disagreement : bool
        Whether ascent and random search differ by more than 1e-3 relative.
    """

    pc: Pmf
    dsrs: float
    start: str
    history: tuple
    candidates: dict
    random_search_dsrs: float | None = None
    disagreement: bool = False


def _ascend(x0, pr, params, fading, iters, floor):
    obj = lambda x: _dsrs_raw(pr.probs, x, params, fading)
    x = _project_floor(x0, floor)
    f = obj(x)
    hist = [f]
    step = 1.0
    for _ in range(iters):
        g = dsrs_gradient(pr, x, params, fading)
        accepted = False
        for _ in range(60):
            xn = _project_floor(x + step * g, floor)
            dx = xn - x
            if np.max(np.abs(dx)) < 1e-13:
                break
            fn = obj(xn)
            if fn >= f + 1e-4 * float(np.dot(g, dx)):
                accepted = True
                break
            step *= 0.5
        if not accepted:
            break
        gain = fn - f
        x, f = xn, fn
        hist.append(f)
        step *= 2.0
        if gain <= 1e-15 * abs(f):
            break
    return x, f, hist


def optimize_caching_numeric(pr: Pmf, params: NetworkParams,
                             fading: FadingModel | None = None, iters: int = 500,
                             gamma_r: float | None = None, random_candidates: int = 0,
                             seed: int = 0) -> CachingSolution:
    """Maximize :func:`dsrs` over caching pmfs by projected gradient ascent.

    Starts from the uniform pmf, the flattened request pmf and, when
    ``gamma_r`` is given at ``alpha = 4`` and valid, the Benford-shaped pmf.  Each
    start is ascended with backtracking steps and projection onto the simplex
    with a ``1e-9`` floor; the best end point is returned.

    ``random_candidates > 0`` additionally evaluates that many Dirichlet(1)
    pmfs and keeps the better of the two searches.
    """
    M = pr.M
    if M > 200:
        raise DomainError("the numeric optimizer is meant for at most 200 files")
    if M == 1:
        v = dsrs(pr, Pmf(np.ones(1)), params, fading)
        return CachingSolution(Pmf(np.ones(1)), v, "uniform", (v,), {"uniform": v})
    starts = {"uniform": np.full(M, 1.0 / M)}
    if np.all(pr.probs > 0):
        starts["flattened"] = optimal_caching_general(pr, params.alpha).probs
    if gamma_r is not None and params.alpha == 4 and params.sigma2 > 0:
        bp = benford_pmf(M, benford_scale(gamma_r, params, fading))
        if bp.valid:
            order = pr.sorted_order()
            x = np.empty(M)
            x[order] = bp.probs
            starts["benford"] = x
    candidates = {k: _dsrs_raw(pr.probs, v, params, fading) for k, v in starts.items()}
    best = None
    for name, x0 in starts.items():
        x, f, hist = _ascend(x0, pr, params, fading, iters, PC_FLOOR)
        if best is None or f > best[1]:
            best = (x, f, hist, name)
    x, f, hist, name = best
    if not np.isfinite(f):
        raise NonConvergence("projected gradient produced a non-finite objective")
    rs = None
    disagree = False
    if random_candidates > 0:
        rng = np.random.default_rng(seed)
        rbest, rval = None, -math.inf
        for _ in range(random_candidates):
            cand = rng.dirichlet(np.ones(M))
            v = _dsrs_raw(pr.probs, cand, params, fading)
            if v > rval:
                rbest, rval = cand, v
        rs = rval
        disagree = abs(rval - f) > 1e-3 * abs(f)
        if rval > f:
            x, f, hist, name = rbest, rval, (rval,), "random"
    return CachingSolution(Pmf.from_weights(x), f, name, tuple(hist), candidates, rs, disagree)


def dsrs_bounds(pr: Pmf, params: NetworkParams,
                fading: FadingModel | None = None) -> tuple[float, float]:
    """Lower bound (uniform caching) and upper bound (all transmitters holding the
    most popular file) on the optimal :func:`dsrs`."""
    lt = params.lambda_t
    scale = params.lam * params.gamma2
    cov = lambda d: pcov(params.T, d, params.alpha, params.mu, params.sigma2, fading).p
    lb = scale * cov(lt / pr.M)
    ub = scale * cov(lt * float(np.max(pr.probs)))
    return lb, ub
