"""Command line entry point: qfilter <experiment> --out <dir> [options]."""

from __future__ import annotations

import argparse
import json
import sys

from .experiments import RUNNERS, load_config, run_experiment


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qfilter",
        description="Quantum filter experiments: figure regeneration, "
                    "bound tables and oracle checks.")
    parser.add_argument("experiment", choices=sorted(RUNNERS))
    parser.add_argument("--config", help="JSON config overriding the defaults")
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument("--shots", type=int, help="override shots per cell")
    parser.add_argument("--seed", type=int, help="override the master seed")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = load_config(args.experiment, args.config, args.shots, args.seed)
    result = run_experiment(args.experiment, cfg, args.out)
    n_rows = len(result["rows"])
    print(f"{args.experiment}: wrote {n_rows} rows to {args.out}")
    if "crossover" in result:
        print(json.dumps(result["crossover"], sort_keys=True))
    return 0


if __name__ == "__main__":
    sys.exit(main())
