"""Command-line front end for the canned experiments.

Subcommands: temp-ratio, thermalize, engine-sweep, cascade-cycle,
mi-vs-work. Each reads an optional JSON config (built-in defaults
otherwise), applies --set key=value overrides, runs, and writes CSV files
plus a manifest into --out.

Exit codes: 0 on success, 2 when a run completed but is flagged
(tainted-truncation or non-converged), 1 on fatal errors. The worker-pool
width for sweep cells comes from the PHASEONIUM_ENGINE_WORKERS environment
variable (default 1).
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .experiments import (
    EXPERIMENTS,
    apply_overrides,
    default_config,
    run_experiment,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="phaseonium-engine",
        description="Coherence-fuelled quantum Otto engine experiments",
    )
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name in EXPERIMENTS:
        cmd = sub.add_parser(name, help=f"run the {name} experiment")
        cmd.add_argument("--config", type=Path, default=None, help="JSON config file")
        cmd.add_argument("--out", type=Path, required=True, help="output directory")
        cmd.add_argument(
            "--set",
            dest="overrides",
            action="append",
            default=[],
            metavar="KEY=VALUE",
            help="override a config entry (value parsed as JSON)",
        )
    return parser


def load_config(experiment: str, config_path: Path | None, overrides: list[str]) -> dict:
    config = default_config(experiment)
    if config_path is not None:
        loaded = json.loads(Path(config_path).read_text())
        if "experiment" in loaded and loaded["experiment"] != experiment:
            raise ValueError(
                f"config file is for {loaded['experiment']!r}, not {experiment!r}"
            )
        config.update(loaded)
        config["experiment"] = experiment
    return apply_overrides(config, overrides)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = load_config(args.experiment, args.config, args.overrides)
        result = run_experiment(config, args.out)
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"{result.experiment}: {result.status}")
    for name in result.files:
        print(f"  {result.out_dir / name}")
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
