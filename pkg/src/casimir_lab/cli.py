"""Command-line interface.

    casimir-lab simulate <config.yaml>     run one scenario
    casimir-lab sweep <config.yaml>        omega_r sweep (reduced-dce)
    casimir-lab coeffs <config.yaml>       dressed levels + Theta tables
    casimir-lab reproduce <fig-tag>        fig2 | fig3 | fig4 | fig4a..fig4d
    casimir-lab validate                   run the acceptance suite
    casimir-lab version

Exit codes: 0 ok, 1 failure, 2 config/parse error, 3 regime violation,
4 truncation error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .errors import CasimirLabError, ConfigError, RegimeError, TruncationError


def _exit_code(exc: CasimirLabError) -> int:
    if isinstance(exc, ConfigError):
        return 2
    if isinstance(exc, RegimeError):
        return 3
    if isinstance(exc, TruncationError):
        return 4
    return 1


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="casimir-lab",
                                     description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run one scenario config")
    p_sim.add_argument("config", type=Path)

    p_sweep = sub.add_parser("sweep", help="run a sweep config")
    p_sweep.add_argument("config", type=Path)

    p_coeff = sub.add_parser("coeffs", help="emit coefficient tables for a config")
    p_coeff.add_argument("config", type=Path)

    p_rep = sub.add_parser("reproduce", help="emit the CSVs behind a figure analog")
    p_rep.add_argument("tag", choices=["fig2", "fig3", "fig4",
                                       "fig4a", "fig4b", "fig4c", "fig4d"])
    p_rep.add_argument("--out", type=Path, default=Path("out"))

    p_val = sub.add_parser("validate", help="run the acceptance suite")
    p_val.add_argument("--criterion", action="append", default=None,
                       help="run only criteria whose name contains this substring")

    sub.add_parser("version", help="print the library version")

    args = parser.parse_args(argv)

    try:
        if args.command == "version":
            print(f"casimir-lab {__version__}")
            return 0
        if args.command == "simulate":
            from .runner import run
            for path in run(args.config):
                print(path)
            return 0
        if args.command == "sweep":
            from .runner import run_sweep_config
            for path in run_sweep_config(args.config):
                print(path)
            return 0
        if args.command == "coeffs":
            from .config import load_config
            from .runner import _coeff_table, write_manifest
            config = load_config(args.config)
            if config.kind != "coeff-table":
                raise ConfigError("coeffs requires a config with kind: coeff-table")
            outputs = _coeff_table(config)
            outputs.append(write_manifest(config.output_dir, config.label,
                                          config.config_hash, config.integrator,
                                          [p.name for p in outputs]))
            for path in outputs:
                print(path)
            return 0
        if args.command == "reproduce":
            from .runner import reproduce_figure
            for path in reproduce_figure(args.tag, args.out):
                print(path)
            return 0
        if args.command == "validate":
            from .acceptance import run_acceptance
            results = run_acceptance(only=args.criterion)
            ok = all(r.passed for r in results)
            return 0 if ok else 1
    except CasimirLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _exit_code(exc)
    return 1


if __name__ == "__main__":
    sys.exit(main())
