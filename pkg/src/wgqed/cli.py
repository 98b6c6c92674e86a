"""Command-line interface.

Exit codes: 0 success, 2 configuration error, 3 engine/numeric error.
"""

from __future__ import annotations

import argparse
import sys

from .errors import ConfigError, WgqedError
from .scenario import (
    ENGINES,
    PRESETS,
    SWEEP_PARAMETERS,
    compare_engines,
    load_config,
    run_preset,
    run_scenario,
    sweep,
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wgqed",
        description="Spontaneous-emission dynamics of an emitter in a semi-infinite rectangular waveguide.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one scenario from a config file or manifest")
    run.add_argument("--config", required=True, help="path to a scenario config or run manifest")
    run.add_argument("--out", default=None, help="output directory (default: from the config)")
    run.add_argument("--no-figures", action="store_true", help="skip figure rendering")

    preset = sub.add_parser("preset", help="regenerate a named figure preset")
    preset.add_argument("name", choices=sorted(PRESETS))
    preset.add_argument("--out", default="runs", help="output directory")
    preset.add_argument("--no-figures", action="store_true", help="skip figure rendering")

    compare = sub.add_parser("compare", help="run several engines on identical physics")
    compare.add_argument("--config", required=True)
    compare.add_argument(
        "--engines", required=True, help=f"comma-separated subset of {','.join(ENGINES)}"
    )
    compare.add_argument("--out", default="runs")

    swp = sub.add_parser("sweep", help="repeat a scenario over a list of parameter values")
    swp.add_argument("--config", required=True)
    swp.add_argument("--param", required=True, choices=SWEEP_PARAMETERS)
    swp.add_argument("--values", required=True, help="comma-separated numbers (may be empty)")
    swp.add_argument("--out", default=None)
    swp.add_argument("--no-figures", action="store_true")

    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            config = load_config(args.config)
            manifest = run_scenario(config, out_dir=args.out, render=not args.no_figures)
            print(f"wrote {manifest.path.parent / manifest.files[0]}")
            print(f"manifest {manifest.path}")
        elif args.command == "preset":
            manifests = run_preset(args.name, args.out, render=not args.no_figures)
            for m in manifests:
                print(f"wrote {m.path.parent / m.files[0]}")
        elif args.command == "compare":
            config = load_config(args.config)
            engines = [e.strip() for e in args.engines.split(",") if e.strip()]
            rows = compare_engines(config, engines, out_dir=args.out)
            for ea, eb, mx, mean in rows:
                print(f"{ea} vs {eb}: max {mx:.3e} mean {mean:.3e}")
        elif args.command == "sweep":
            config = load_config(args.config)
            values = [float(v) for v in args.values.split(",") if v.strip()]
            summary = sweep(
                config, args.param, values, out_dir=args.out, render=not args.no_figures
            )
            print(f"wrote {summary}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (WgqedError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
