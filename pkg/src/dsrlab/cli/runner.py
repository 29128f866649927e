"""Run an experiment and write CSV, SVG and manifest files."""

from __future__ import annotations

import hashlib
import io
import json
import math
import subprocess
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .. import __version__
from ..errors import IoError, NonConvergence
from ..mcsim import default_workers
from .config import ExperimentConfig, ensure_output_dir
from .experiments import RECIPES


def _cell(v) -> str:
    if hasattr(v, "dtype"):
        v = v.item()
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        if not math.isfinite(v):
            raise NonConvergence("a non-finite value reached the CSV writer")
        return repr(float(v))
    return str(v)


def render_csv(table) -> str:
    buf = io.StringIO()
    buf.write(",".join(table.columns) + "\n")
    for row in table.rows:
        if len(row) != len(table.columns):
            raise ValueError(f"row width mismatch in {table.name}")
        buf.write(",".join(_cell(v) for v in row) + "\n")
    return buf.getvalue()


def version_string() -> str:
    """``git describe`` of the source tree, falling back to the package version."""
    here = Path(__file__).resolve().parent
    try:
        r = subprocess.run(["git", "describe", "--tags", "--always", "--dirty"], cwd=here,
                           capture_output=True, text=True, timeout=5)
        if r.returncode == 0 and r.stdout.strip():
            return f"{__version__}+g{r.stdout.strip()}"
    except (OSError, subprocess.SubprocessError):
        pass
    return __version__


def run(cfg: ExperimentConfig, workers: int | None = None) -> dict:
    """Execute ``cfg`` and return the manifest it wrote."""
    out = ensure_output_dir(cfg)
    workers = default_workers() if workers is None else max(1, int(workers))
    if workers == 1:
        pmap = lambda f, xs: [f(x) for x in xs]
        result = RECIPES[cfg.experiment](cfg, pmap)
    else:
        with ThreadPoolExecutor(workers) as pool:
            pmap = lambda f, xs: list(pool.map(f, xs))
            result = RECIPES[cfg.experiment](cfg, pmap)

    # render everything first so a bad cell aborts before any file is touched
    payloads = [(t.name, render_csv(t)) for t in result.tables]
    if cfg.emit_svg:
        payloads += list(result.plots)
    files = []
    for name, text in payloads:
        data = text.encode()
        path = out / name
        try:
            path.write_bytes(data)
        except OSError as e:
            raise IoError(f"cannot write {path}: {e}") from None
        files.append({"path": name, "sha256": hashlib.sha256(data).hexdigest(),
                      "bytes": len(data)})
    manifest = {"version": version_string(), "experiment": cfg.experiment.value,
                "config": cfg.to_dict(), "files": files}
    try:
        (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    except OSError as e:
        raise IoError(f"cannot write manifest: {e}") from None
    return manifest
