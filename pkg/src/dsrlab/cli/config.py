"""Strict JSON experiment configuration."""

from __future__ import annotations

import enum
import json
import math
import os
import re
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from ..coverage import NetworkParams
from ..errors import ConfigError, DomainError, IoError


class Experiment(enum.Enum):
    Fig3Sweep = "Fig3Sweep"
    Fig4Separability = "Fig4Separability"
    Fig5to8Bounds = "Fig5to8Bounds"
    Fig9to12Sweeps = "Fig9to12Sweeps"
    Fig13Benford = "Fig13Benford"
    Custom = "Custom"


DESCRIPTIONS = {
    Experiment.Fig3Sweep: "single-file DSR versus gamma1 at several SNRs, with Monte Carlo overlay",
    Experiment.Fig4Separability: "beta^(alpha/2) versus threshold for several fading laws, with linear fits",
    Experiment.Fig5to8Bounds: "sequential multi-file DSR of the optimized cache against its bounds",
    Experiment.Fig9to12Sweeps: "sequential, popularity and global DSR over Zipf caching exponents",
    Experiment.Fig13Benford: "Benford-shaped optimal cache versus its Zipf approximation",
    Experiment.Custom: "sweep one network parameter and report beta, coverage and DSR",
}

_PARAM_KEYS = tuple(f.name for f in fields(NetworkParams))

# Per-experiment parameter defaults (on top of NetworkParams defaults), sweep
# axes with default grids, and scalar options.
_RECIPES = {
    Experiment.Fig3Sweep: dict(
        params=dict(lam=0.1, alpha=4.0, mu=1.0, a=1.0),
        sweep=dict(snr=[1.0, 10.0, 100.0],
                   gamma1=[0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9]),
        options=dict(t_over_snr=0.5, mc_trials=100_000)),
    Experiment.Fig4Separability: dict(
        params=dict(alpha=4.0),
        sweep=dict(T=[float(1.0 * 50.0 ** (k / 19)) for k in range(20)],
                   rayleigh_mu=[1.0], ricean_v=[1.0, 2.0], nakagami_m=[0.5, 2.0]),
        options=dict(ricean_sigma=1.0 / math.sqrt(2.0))),
    Experiment.Fig5to8Bounds: dict(
        params=dict(lam=1.0, gamma1=0.4, alpha=4.0),
        sweep=dict(gamma_r=[0.5, 2.0], snr=[1.0, 10.0],
                   T=[float(0.1 * 100.0 ** (k / 9)) for k in range(10)]),
        options=dict(M=10, iters=500)),
    Experiment.Fig9to12Sweeps: dict(
        params=dict(lam=1.0, gamma1=0.4, alpha=4.0, T=1.0),
        sweep=dict(gamma_r=[0.5, 1.0, 1.5, 2.0],
                   gamma_c=[round(0.1 * k, 10) for k in range(31)]),
        options=dict(M=10, K=0, snr=1000.0)),
    Experiment.Fig13Benford: dict(
        params=dict(lam=1.0, gamma1=0.4, alpha=4.0, T=1.0),
        sweep=dict(M=[5, 10, 20]),
        options=dict(gamma_r=0.2, snr_db=30.0)),
    Experiment.Custom: dict(
        params=dict(),
        sweep=dict(),
        options=dict(mc_trials=100_000)),
}

# Custom sweeps one of these.
CUSTOM_AXES = _PARAM_KEYS + ("snr",)

_TOP_KEYS = ("experiment", "params", "sweep", "output_dir", "emit_svg", "mc_validate",
             "seed", "options")

_INT_OPTIONS = {"M", "K", "iters", "mc_trials"}
_INT_AXES = {"M"}


@dataclass
class ExperimentConfig:
    experiment: Experiment
    params: dict = field(default_factory=dict)
    sweep: dict = field(default_factory=dict)
    output_dir: str = "dsrlab_out"
    emit_svg: bool = True
    mc_validate: bool = False
    seed: int = 0
    options: dict = field(default_factory=dict)

    def network(self, **overrides) -> NetworkParams:
        kw = {k: v for k, v in self.params.items()}
        kw.update(overrides)
        return NetworkParams(**kw)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["experiment"] = self.experiment.value
        return d


def _line_of(text: str | None, key: str) -> str:
    if not text:
        return ""
    m = re.search(r'"%s"\s*:' % re.escape(key), text)
    if m is None:
        return ""
    return f" (line {text.count(chr(10), 0, m.start()) + 1})"


def _number(v, where, text, integer=False):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{where} must be a number{_line_of(text, where.split('.')[-1])}")
    if not math.isfinite(v):
        raise ConfigError(f"{where} must be finite")
    if integer:
        if float(v) != int(v):
            raise ConfigError(f"{where} must be an integer{_line_of(text, where.split('.')[-1])}")
        return int(v)
    return float(v)


def _check_keys(obj, allowed, where, text):
    if not isinstance(obj, dict):
        raise ConfigError(f"{where or 'config'} must be an object")
    unknown = [k for k in obj if k not in allowed]
    if unknown:
        msgs = [f"unknown key {k!r} in {where or 'config'}{_line_of(text, k)}" for k in unknown]
        raise ConfigError("; ".join(msgs))


def from_dict(raw: dict, text: str | None = None) -> ExperimentConfig:
    """Validate a parsed document and fill in the experiment's defaults."""
    _check_keys(raw, _TOP_KEYS, "", text)
    if "experiment" not in raw:
        raise ConfigError("missing required key 'experiment'")
    try:
        exp = Experiment(raw["experiment"])
    except (ValueError, TypeError):
        names = ", ".join(e.value for e in Experiment)
        raise ConfigError(f"unknown experiment {raw['experiment']!r}{_line_of(text, 'experiment')}; "
                          f"expected one of {names}") from None
    recipe = _RECIPES[exp]

    params_raw = raw.get("params", {})
    _check_keys(params_raw, _PARAM_KEYS, "params", text)
    params = dict(recipe["params"])
    for k, v in params_raw.items():
        params[k] = _number(v, f"params.{k}", text)

    sweep_raw = raw.get("sweep", {})
    allowed_axes = CUSTOM_AXES if exp is Experiment.Custom else tuple(recipe["sweep"])
    _check_keys(sweep_raw, allowed_axes, "sweep", text)
    sweep = {k: list(v) for k, v in recipe["sweep"].items()}
    for k, v in sweep_raw.items():
        if not isinstance(v, list):
            raise ConfigError(f"sweep.{k} must be a list{_line_of(text, k)}")
        if not v:
            raise ConfigError(f"sweep.{k} is empty{_line_of(text, k)}")
        sweep[k] = [_number(x, f"sweep.{k}", text, k in _INT_AXES) for x in v]
    if exp is Experiment.Custom and len(sweep) != 1:
        raise ConfigError("Custom needs exactly one sweep axis, one of " + ", ".join(CUSTOM_AXES))
    for k, grid in sweep.items():
        if not grid:
            raise ConfigError(f"sweep.{k} is empty")

    opt_raw = raw.get("options", {})
    _check_keys(opt_raw, tuple(recipe["options"]), "options", text)
    options = dict(recipe["options"])
    for k, v in opt_raw.items():
        options[k] = _number(v, f"options.{k}", text, k in _INT_OPTIONS)

    cfg = ExperimentConfig(exp, params, sweep, options=options)
    if "output_dir" in raw:
        if not isinstance(raw["output_dir"], str) or not raw["output_dir"]:
            raise ConfigError("output_dir must be a nonempty string")
        cfg.output_dir = raw["output_dir"]
    for flag in ("emit_svg", "mc_validate"):
        if flag in raw:
            if not isinstance(raw[flag], bool):
                raise ConfigError(f"{flag} must be true or false{_line_of(text, flag)}")
            setattr(cfg, flag, raw[flag])
    if "seed" in raw:
        seed = _number(raw["seed"], "seed", text, integer=True)
        if seed < 0:
            raise ConfigError("seed must be nonnegative")
        cfg.seed = seed
    _semantic_checks(cfg)
    return cfg


def _valid_alone(key, value) -> bool:
    try:
        NetworkParams(**{key: value})
    except DomainError:
        return False
    return True


def _semantic_checks(cfg: ExperimentConfig):
    # every swept parameter value must produce valid NetworkParams
    try:
        cfg.network()
    except DomainError as e:
        keys = [k for k, v in cfg.params.items() if not _valid_alone(k, v)]
        named = ", ".join(f"params.{k}={cfg.params[k]!r}" for k in keys) or "params"
        raise ConfigError(f"invalid {named}: {e}") from None
    for axis, grid in cfg.sweep.items():
        if axis in _PARAM_KEYS:
            for v in grid:
                try:
                    cfg.network(**{axis: v})
                except DomainError as e:
                    raise ConfigError(f"invalid sweep.{axis} value {v!r}: {e}") from None
        elif axis in ("snr", "gamma_r", "M", "rayleigh_mu", "ricean_v", "nakagami_m"):
            lo = 0 if axis in ("gamma_r", "ricean_v") else 1 if axis == "M" else None
            for v in grid:
                if (lo is None and not v > 0) or (lo is not None and v < lo):
                    raise ConfigError(f"invalid sweep.{axis} value {v!r}")
        elif axis == "gamma_c":
            if any(v < 0 for v in grid):
                raise ConfigError("sweep.gamma_c must be nonnegative")
    if cfg.experiment is Experiment.Fig3Sweep and not cfg.options["t_over_snr"] > 0:
        raise ConfigError("options.t_over_snr must be positive (T must be positive)")
    for k in ("M", "iters", "mc_trials"):
        if k in cfg.options and cfg.options[k] < 1:
            raise ConfigError(f"options.{k} must be at least 1")
    if "K" in cfg.options and not 0 <= cfg.options["K"] <= cfg.options["M"]:
        raise ConfigError("options.K must lie in [0, M] (0 selects M // 2)")
    if "snr" in cfg.options and not cfg.options["snr"] > 0:
        raise ConfigError("options.snr must be positive")
    if "gamma_r" in cfg.options and cfg.options["gamma_r"] < 0:
        raise ConfigError("options.gamma_r must be nonnegative")
    if "ricean_sigma" in cfg.options and not cfg.options["ricean_sigma"] > 0:
        raise ConfigError("options.ricean_sigma must be positive")


def parse_config(text: str) -> ExperimentConfig:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"malformed JSON at line {e.lineno}, column {e.colno}: {e.msg}") from None
    return from_dict(raw, text)


def validate_config(path) -> ExperimentConfig:
    """Parse and validate a config file; relative ``output_dir`` is kept as given."""
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as e:
        raise IoError(f"cannot read config {p}: {e}") from None
    return parse_config(text)


def ensure_output_dir(cfg: ExperimentConfig) -> Path:
    out = Path(cfg.output_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise IoError(f"cannot create output directory {out}: {e}") from None
    if not os.access(out, os.W_OK):
        raise IoError(f"output directory {out} is not writable")
    return out
