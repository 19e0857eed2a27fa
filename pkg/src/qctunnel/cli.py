"""Command-line front end: run, sweep, presets, validate.

Exit codes: 0 success, 1 numerical abort during a run, 2 usage or config
errors.  Flag overrides are merged through the same sectioned-text path as
config files, so `--set section.key=value` and the dedicated flags share
one validation story.
"""

from __future__ import annotations

import argparse
import logging
from pathlib import Path

from .classical import TrajectoryError
from .quantum import PropagationError
from .runner import (
    PAPER_MASS,
    PRESETS,
    ConfigError,
    format_config,
    parse_config,
    preset_config,
    run_scenario,
    run_sweep,
)

__all__ = ["main"]


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--preset", choices=sorted(PRESETS), help="start from a built-in preset")
    parser.add_argument("--config", help="start from a config file")
    parser.add_argument("--out", help="output directory (output.directory)")
    parser.add_argument("--gamma", type=float, help="coupling strength (model.gamma)")
    parser.add_argument("--lambda2", type=float, help="probe barrier height (model.lambda2)")
    parser.add_argument("--dt", type=float, help="quantum step (time.dt)")
    parser.add_argument("--t-final", type=float, help="run length (time.t_final)")
    parser.add_argument("--seed", type=int, help="classical RNG seed (classical.seed)")
    parser.add_argument("--classical-n", type=int, help="ensemble size (classical.n)")
    parser.add_argument(
        "--paper-mass", action="store_true",
        help="literal m2=1e-4 stretch regime (large grid, small dt; slow)")
    parser.add_argument(
        "--set", action="append", default=[], metavar="SECTION.KEY=VALUE",
        help="override any config key; repeatable, applied last")


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qctunnel",
        description="Two-particle double-well tunneling: quantum grid runs "
                    "and matched classical ensembles.")
    sub = parser.add_subparsers(dest="command", required=True)
    run_p = sub.add_parser("run", help="run one scenario and write its CSVs")
    _add_common(run_p)
    sweep_p = sub.add_parser("sweep", help="run a parameter sweep plus summary CSV")
    _add_common(sweep_p)
    sweep_p.add_argument("--workers", type=int, default=1,
                         help="parallel sweep processes (default 1)")
    sub.add_parser("presets", help="list built-in presets with their parameters")
    val_p = sub.add_parser("validate", help="parse and validate a config file")
    val_p.add_argument("config_path", help="config file to check")
    return parser


def _override_lines(args) -> list[str]:
    lines = []
    if args.paper_mass:
        for section, pairs in PAPER_MASS.items():
            lines.append(f"[{section}]")
            lines.extend(f"{key} = {value}" for key, value in pairs.items())
    flag_map = [
        ("model", "gamma", args.gamma),
        ("model", "lambda2", args.lambda2),
        ("time", "dt", args.dt),
        ("time", "t_final", args.t_final),
        ("classical", "seed", args.seed),
        ("classical", "n", args.classical_n),
        ("output", "directory", args.out),
    ]
    for section, key, value in flag_map:
        if value is not None:
            lines.append(f"[{section}]")
            lines.append(f"{key} = {value}")
    for item in args.set:
        head, _, value = item.partition("=")
        section, dot, key = head.strip().partition(".")
        if not dot or not value.strip() or not key.strip():
            raise ConfigError(f"--set expects SECTION.KEY=VALUE, got {item!r}")
        lines.append(f"[{section.strip()}]")
        lines.append(f"{key.strip()} = {value.strip()}")
    return lines


def _build_config(args):
    if args.preset and args.config:
        raise ConfigError("choose one of --preset or --config, not both")
    if args.config:
        base = parse_config(Path(args.config).read_text())
    elif args.preset:
        base = preset_config(args.preset)
    else:
        base = parse_config("")
    text = format_config(base) + "\n" + "\n".join(_override_lines(args))
    return parse_config(text)


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    try:
        if args.command == "presets":
            for name in sorted(PRESETS):
                print(f"{name}: {PRESETS[name][0]}")
                for line in format_config(preset_config(name)).splitlines():
                    print(f"    {line}")
            return 0
        if args.command == "validate":
            path = Path(args.config_path)
            if not path.exists():
                print(f"error: no such config file: {path}")
                return 2
            parse_config(path.read_text())
            print(f"ok: {path}")
            return 0
        cfg = _build_config(args)
        if args.command == "run":
            run_scenario(cfg)
            return 0
        manifest = run_sweep(cfg, workers=args.workers)
        if not manifest.ok:
            print("sweep finished with failed members:")
            for item in manifest.failed:
                print(f"  {item}")
            return 1
        return 0
    except ConfigError as exc:
        print(f"config error: {exc}")
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}")
        return 2
    except (PropagationError, TrajectoryError) as exc:
        print(f"numerical abort: {exc}")
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
