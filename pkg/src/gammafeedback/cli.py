"""
Command-line front door.

    gammafeedback <subcommand> --config run.cfg --out results/ [--seed N]
                  [--svg] [--quiet]

Exit codes: 0 success, 2 configuration error, 3 numerical error (singular
denominator or overflow), 4 I/O error. Failures print a one-line JSON
error record to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import ConfigError, parse_config
from .dynamics import NumericalOverflow
from .model import SingularDenominator
from .runner import SUBCOMMANDS, apply_seed_override, run_subcommand

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gammafeedback",
        description="Gamma-feedback stability maps and hedging-feedback simulations.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in SUBCOMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="path to the run configuration")
        p.add_argument("--out", default=None, help="output directory (one per run)")
        p.add_argument("--seed", type=int, default=None, help="override all run seeds")
        p.add_argument("--svg", action="store_true", help="also emit SVG plots")
        p.add_argument("--quiet", action="store_true", help="suppress the summary line")
    return parser


def _fail(code: int, kind: str, message: str) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": message}) + "\n")
    return code


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = Path(args.config).read_text(encoding="utf-8")
    except OSError as exc:
        return _fail(EXIT_IO, "io", f"cannot read config: {exc}")

    try:
        config = parse_config(text)
        if args.seed is not None:
            if not 0 <= args.seed < (1 << 64):
                raise ConfigError(f"--seed must be a 64-bit unsigned integer (got {args.seed})")
            config = apply_seed_override(config, args.seed)
        if args.svg:
            config.emit_svg = True
        # --out directs this invocation only; it is not baked into the
        # resolved config, so reruns into fresh directories digest equal
        out_dir = args.out or config.output_dir
        if out_dir is None:
            raise ConfigError("no output directory: pass --out or set [run] out")
    except ConfigError as exc:
        return _fail(EXIT_CONFIG, "config", str(exc))

    try:
        manifest = run_subcommand(args.subcommand, config, out_dir)
    except ConfigError as exc:
        return _fail(EXIT_CONFIG, "config", str(exc))
    except (SingularDenominator, NumericalOverflow) as exc:
        return _fail(EXIT_NUMERICAL, "numerical", str(exc))
    except ValueError as exc:
        return _fail(EXIT_CONFIG, "config", str(exc))
    except FileExistsError as exc:
        return _fail(EXIT_IO, "io", str(exc))
    except OSError as exc:
        return _fail(EXIT_IO, "io", str(exc))

    if not args.quiet:
        outputs = ", ".join(entry["path"] for entry in manifest.outputs)
        print(f"{args.subcommand}: wrote {outputs} to {out_dir} "
              f"in {manifest.duration_seconds:.3f}s")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
