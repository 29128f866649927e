"""Monte Carlo engine for the typical receiver of a Poisson network in a disk.

Each trial places a Poisson number of nodes uniformly in a disk of radius
``R`` around the receiver at the origin, keeps each as a transmitter with
probability ``gamma1``, assigns cached files, and checks whether the SINR from
the nearest transmitter holding a wanted file exceeds ``T``.  Only squared
distances enter the SINR, so positions are drawn as ``R^2 U``.

Trials are grouped into fixed-size blocks; block ``k`` draws from the stream
``SeedSequence(seed, spawn_key=(k,))`` and returns integer counts, so the
result does not depend on how blocks are spread over workers.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .caching import Pmf
from .coverage import NetworkParams
from .errors import DomainError
from .fading import FadingModel, Rayleigh, beta
from .strategies import ReceiverState

__all__ = [
    "SequentialSingleFile",
    "SequentialMultiFile",
    "SimultaneousMultiFile",
    "SimConfig",
    "SimOutcome",
    "simulate",
    "truncation_check",
    "truncated_coverage",
    "default_workers",
    "band_truncation_tol",
]

_POINTS_PER_BLOCK = 1 << 21
_GL_T, _GL_W = np.polynomial.legendre.leggauss(64)
_GL_T = 0.5 * (_GL_T + 1.0)
_GL_W = 0.5 * _GL_W
_PANEL_T, _PANEL_W = np.polynomial.legendre.leggauss(32)
_PANEL_T = 0.5 * (_PANEL_T + 1.0)
_PANEL_W = 0.5 * _PANEL_W


@dataclass(frozen=True)
class SequentialSingleFile:
    """Every transmitter holds the one file."""


@dataclass(frozen=True, eq=False)
class SequentialMultiFile:
    """Only holders of the requested file transmit."""

    pr: Pmf
    pc: Pmf


@dataclass(frozen=True, eq=False)
class SimultaneousMultiFile:
    """All transmitters are active; the receiver wants any file of its state.

    ``states`` defaults to singleton sets drawn with the request pmf; custom
    states need ``state_probs``.
    """

    pr: Pmf
    pc: Pmf
    states: tuple | None = None
    state_probs: tuple | None = None

    def resolved_states(self) -> tuple[list[ReceiverState], np.ndarray]:
        if self.states is None:
            states = [ReceiverState(i, frozenset([i]), float(self.pc.probs[i]))
                      for i in range(self.pc.M)]
            return states, np.asarray(self.pr.probs, dtype=float)
        if self.state_probs is None or len(self.state_probs) != len(self.states):
            raise DomainError("custom receiver states need matching state_probs")
        w = np.asarray(self.state_probs, dtype=float)
        return list(self.states), w / w.sum()


@dataclass(frozen=True, eq=False)
class SimConfig:
    """Monte Carlo configuration.

    ``window_radius=None`` selects the smallest radius whose analytic
    truncation residual is below ``truncation_tol``.
    """

    params: NetworkParams
    fading: FadingModel | None = None
    window_radius: float | None = None
    n_trials: int = 100_000
    seed: int = 0
    model: object = field(default_factory=SequentialSingleFile)
    truncation_tol: float = 1e-3

    def __post_init__(self):
        if self.n_trials < 1:
            raise DomainError("n_trials must be at least 1")
        if self.window_radius is not None and not self.window_radius > 0:
            raise DomainError("window radius must be positive")
        if not self.truncation_tol > 0:
            raise DomainError("truncation tolerance must be positive")

    @property
    def interference(self) -> FadingModel:
        return Rayleigh(self.params.mu) if self.fading is None else self.fading


@dataclass(frozen=True)
class SimOutcome:
    """Monte Carlo estimate.

    ``coverage_est`` is the success fraction among non-degenerate trials
    (``n_effective`` of them); degenerate trials had no in-window holder of a
    wanted file.
    """

    coverage_est: float
    dsr_est: float
    half_width_95: float
    n_effective: int
    n_degenerate: int
    n_trials: int
    n_points: int
    n_transmitters: int
    window_radius: float

    @property
    def tx_fraction(self) -> float:
        return self.n_transmitters / self.n_points if self.n_points else math.nan


# ---------------------------------------------------------------- analytics

def _classes(config: SimConfig):
    """Receiver classes as (weight, candidate density, other active density)."""
    p = config.params
    lt = p.lambda_t
    m = config.model
    if isinstance(m, SequentialSingleFile):
        return [(1.0, lt, 0.0)]
    if isinstance(m, SequentialMultiFile):
        return [(float(w), lt * float(q), 0.0) for w, q in zip(m.pr.probs, m.pc.probs) if w > 0]
    if isinstance(m, SimultaneousMultiFile):
        states, w = m.resolved_states()
        return [(float(wj), lt * s.p_j, lt * (1.0 - s.p_j)) for s, wj in zip(states, w) if wj > 0]
    raise DomainError(f"unknown model {m!r}")


def _tail(v, R, p: NetworkParams, fading: FadingModel):
    # int_R^inf (1 - L_g(mu T r^alpha u^-alpha)) u du for r^2 = v (an array), mapped
    # to (0, 1] through u = R t^(-1/(alpha-2)), which makes the integrand tend to
    # a constant at t = 0
    al = p.alpha
    s = p.mu * p.T * np.asarray(v)[..., None] ** (al / 2.0) * R ** (-al)
    x = s * _GL_T ** (al / (al - 2.0))
    vals = (1.0 - fading.laplace(x)) * _GL_T ** (-al / (al - 2.0))
    return R * R / (al - 2.0) * (vals @ _GL_W)


def _exponent(config: SimConfig, lc: float, lu: float) -> float:
    p = config.params
    fading = config.interference
    e = math.pi * lc * beta(p.T, p.alpha, fading, p.mu).value
    if lu > 0:
        d = 2.0 / p.alpha
        kappa = (p.mu * p.T) ** d * fading.moment(d) * math.gamma(1.0 - d)
        e += math.pi * lu * kappa
    return e


def _panels(top: float, width: float):
    """Composite 32-point Gauss-Legendre nodes and weights on ``[0, top]``."""
    n = max(1, math.ceil(top / width))
    edges = np.linspace(0.0, top, n + 1)
    h = np.diff(edges)[:, None]
    nodes = edges[:-1, None] + h * _PANEL_T
    return nodes.ravel(), (h * _PANEL_W).ravel()


def truncated_coverage(config: SimConfig, R: float | None) -> float:
    """Expected Monte Carlo coverage estimate for window radius ``R``.

    ``R=None`` gives the infinite-plane value.  The expectation conditions on
    the trial being non-degenerate, exactly as :func:`simulate` does.
    """
    p = config.params
    fading = config.interference
    h = p.alpha / 2.0
    noise = p.mu * p.T * p.sigma2
    num = den = 0.0
    for w, lc, lu in _classes(config):
        if lc <= 0:
            continue
        E = _exponent(config, lc, lu)
        # in y = E v the integrand decays at unit rate, and the void probability
        # alone bounds it by exp(-y pi lc / E)
        scale = E / (math.pi * lc)
        top = 40.0 * scale if R is None else min(E * R * R, 40.0 * scale)
        y, wt = _panels(top, min(1.0, scale))
        expo = -y - noise * (y / E) ** h
        if R is None:
            prob_valid = 1.0
        else:
            expo = expo + 2.0 * math.pi * (lc + lu) * _tail(y / E, R, p, fading)
            prob_valid = -math.expm1(-math.pi * lc * R * R)
        val = float(np.dot(wt, np.exp(expo)))
        num += w * math.pi * lc / E * val
        den += w * prob_valid
    if den == 0:
        raise DomainError("no receiver class has a positive candidate density")
    return num / den


def truncation_check(config: SimConfig, tol: float | None = None) -> tuple[float, float]:
    """Smallest window radius (to 1%) whose truncation residual is below ``tol``.

    The residual is the gap between the analytic expectation of the windowed
    estimator and the infinite-plane coverage.  The radius is also large enough
    that a trial is degenerate with probability below ``tol``.

    Returns
    -------
    required_radius, residual : float
    """
    tol = config.truncation_tol if tol is None else tol
    full = truncated_coverage(config, None)
    lc_min = min(lc for _, lc, _ in _classes(config) if lc > 0)
    r_void = math.sqrt(math.log(1.0 / tol) / (math.pi * lc_min))
    resid = lambda R: abs(truncated_coverage(config, R) - full)
    hi = r_void
    while resid(hi) >= tol:
        hi *= 2.0
        if hi > 1e4 * r_void:
            raise DomainError("no window radius meets the truncation tolerance")
    lo = max(r_void, hi / 2.0)
    if lo < hi and resid(lo) < tol:
        hi = lo
    while hi - lo > 0.01 * hi:
        mid = 0.5 * (lo + hi)
        if resid(mid) < tol:
            hi = mid
        else:
            lo = mid
    return hi, resid(hi)


def band_truncation_tol(p_expected: float, n_trials: int, fraction: float = 0.1,
                        cap: float = 1e-3, floor: float = 1e-7) -> float:
    """Truncation tolerance small against the Monte Carlo 95% half-width.

    Returns ``fraction`` times the binomial half-width expected at coverage
    ``p_expected`` over ``n_trials``, clipped to ``[floor, cap]``, so window
    bias stays a small share of the statistical band.
    """
    p = min(max(p_expected, 0.0), 1.0)
    hw = 1.96 * math.sqrt(p * (1.0 - p) / n_trials)
    return float(min(cap, max(floor, fraction * hw)))


# ---------------------------------------------------------------- sampling

def _block_rng(seed: int, k: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(k,))))


def _draw_index(rng, probs, size):
    cdf = np.cumsum(probs)
    cdf[-1] = 1.0
    return np.searchsorted(cdf, rng.random(size), side="right")


def _run_block(config: SimConfig, R: float, k: int, n: int) -> np.ndarray:
    p = config.params
    rng = _block_rng(config.seed, k)
    m = config.model
    n_pts = rng.poisson(p.lam * math.pi * R * R, n)
    n_tx = rng.binomial(n_pts, p.gamma1)
    total = int(n_tx.sum())
    d2 = (R * R) * rng.random(total)
    g = config.interference.sample(rng, total)
    h = rng.standard_exponential(n) / p.mu
    if isinstance(m, SequentialSingleFile):
        cand = np.ones(total, dtype=bool)
        active = cand
    else:
        files = _draw_index(rng, m.pc.probs, total)
        if isinstance(m, SequentialMultiFile):
            req = np.repeat(_draw_index(rng, m.pr.probs, n), n_tx)
            cand = files == req
            active = cand
        else:
            states, w = m.resolved_states()
            table = np.zeros((len(states), m.pc.M), dtype=bool)
            for j, s in enumerate(states):
                table[j, list(s.requested_files)] = True
            st = np.repeat(_draw_index(rng, w, n), n_tx)
            cand = table[st, files]
            active = np.ones(total, dtype=bool)

    counts = np.zeros(5, dtype=np.int64)  # success, valid, degenerate, points, tx
    counts[3] = n_pts.sum()
    counts[4] = total
    nonempty = n_tx > 0
    if total == 0:
        counts[2] = n
        return counts
    starts = (np.cumsum(n_tx) - n_tx)[nonempty]
    d2c = np.where(cand, d2, np.inf)
    dmin = np.minimum.reduceat(d2c, starts)
    seg = np.repeat(np.arange(starts.size), n_tx[nonempty])
    server = cand & (d2c == dmin[seg])
    if p.alpha == 4:
        pw = g / (d2 * d2)
    else:
        pw = g * d2 ** (-p.alpha / 2.0)
    interf = np.add.reduceat(np.where(active & ~server, pw, 0.0), starts)
    ok = np.isfinite(dmin)
    with np.errstate(divide="ignore"):
        sig = h[nonempty][ok] * dmin[ok] ** (-p.alpha / 2.0)
    success = sig > p.T * (p.sigma2 + interf[ok])
    counts[0] = success.sum()
    counts[1] = ok.sum()
    counts[2] = n - counts[1]
    return counts


def default_workers() -> int:
    """Worker count from ``DSRLAB_THREADS`` (default 1)."""
    try:
        return max(1, int(os.environ.get("DSRLAB_THREADS", "1")))
    except ValueError:
        return 1


def simulate(config: SimConfig, workers: int | None = None) -> SimOutcome:
    """Estimate coverage and DSR by Monte Carlo.

    Raises
    ------
    DomainError
        If an explicit ``window_radius`` fails the truncation tolerance.
    """
    p = config.params
    if config.window_radius is None:
        R, _ = truncation_check(config)
    else:
        R = float(config.window_radius)
        full = truncated_coverage(config, None)
        if abs(truncated_coverage(config, R) - full) >= config.truncation_tol:
            raise DomainError(f"window radius {R} fails the truncation tolerance")
    expected_tx = max(1.0, p.lambda_t * math.pi * R * R)
    block = int(min(20_000, max(16, _POINTS_PER_BLOCK // expected_tx)))
    n = config.n_trials
    jobs = [(k, min(block, n - k * block)) for k in range(-(-n // block))]
    workers = default_workers() if workers is None else max(1, int(workers))
    if workers == 1:
        parts = [_run_block(config, R, k, nk) for k, nk in jobs]
    else:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda j: _run_block(config, R, *j), jobs))
    succ, valid, degen, pts, tx = (int(v) for v in np.sum(parts, axis=0))
    cov = succ / valid if valid else 0.0
    hw = 1.96 * math.sqrt(cov * (1.0 - cov) / valid) if valid else math.inf
    return SimOutcome(cov, p.lam * p.gamma2 * cov, hw, valid, degen, n, pts, tx, R)
