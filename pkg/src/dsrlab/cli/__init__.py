"""Command-line experiment runner: ``dsrlab run|validate|list-experiments``."""

from __future__ import annotations

import argparse
import json
import sys

from ..errors import ConfigError, DomainError, IoError, NonConvergence
from .config import DESCRIPTIONS, Experiment, ExperimentConfig, parse_config, validate_config
from .runner import render_csv, run, version_string

__all__ = ["main", "run", "validate_config", "parse_config", "ExperimentConfig", "Experiment",
           "render_csv", "version_string"]

EXIT_OK, EXIT_IO, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3


def _parser():
    ap = argparse.ArgumentParser(prog="dsrlab", description="Reproduce DSR experiments.")
    sub = ap.add_subparsers(dest="cmd", required=True)
    r = sub.add_parser("run", help="run an experiment config")
    r.add_argument("config")
    r.add_argument("--output-dir", help="override output_dir from the config")
    v = sub.add_parser("validate", help="validate a config and print it fully defaulted")
    v.add_argument("config")
    sub.add_parser("list-experiments", help="list available experiments")
    return ap


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.cmd == "list-experiments":
            for e in Experiment:
                print(f"{e.value}\t{DESCRIPTIONS[e]}")
            return EXIT_OK
        cfg = validate_config(args.config)
        if args.cmd == "validate":
            print(json.dumps(cfg.to_dict(), indent=2, sort_keys=True))
            return EXIT_OK
        if args.output_dir:
            cfg.output_dir = args.output_dir
        manifest = run(cfg)
        for f in manifest["files"]:
            print(f"{f['sha256'][:12]}  {f['path']}")
        print(f"manifest: {cfg.output_dir}/manifest.json")
        return EXIT_OK
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (NonConvergence, DomainError) as e:
        print(f"numeric error: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except IoError as e:
        print(f"i/o error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
