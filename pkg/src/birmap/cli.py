"""Command-line front end: ``birmap <command> [config] [options]``.

Every analysis command accepts either a job file or a single map given
with --alpha/--beta/--gamma (comma-separated scalars, e.g. "0,i,1").
``run`` executes the commands listed in the job file; ``report`` runs
everything that applies.

Exit codes: 0 success, 1 a verification failed or a map errored,
2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from birmap import __version__
from birmap.errors import ConfigError
from birmap.report import ALL, COMMANDS, JobConfig, config_from_dict, load_config, render_report, run


def _triple(text: str) -> list:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 3:
        raise ConfigError(f"expected three comma-separated scalars, got {text!r}")
    return parts


def _add_common(p: argparse.ArgumentParser, with_config_positional: bool = True):
    if with_config_positional:
        p.add_argument("config", nargs="?", help="TOML or JSON job file")
    p.add_argument("--alpha", help="a0,a1,a2 for a single map")
    p.add_argument("--beta", help="b0,b1,b2")
    p.add_argument("--gamma", help="g0,g1,g2")
    p.add_argument("--name", default="map", help="name of the single map (default: map)")
    p.add_argument("--n", type=int, help="number of iterates (default 10)")
    p.add_argument("--horizon", type=int, help="orbit horizon for as-check (default 64)")
    p.add_argument("--period-bound", type=int, help="largest period searched (default 24)")
    p.add_argument("--seed", type=int, help="seed for numeric sampling")
    p.add_argument("--format", choices=("json", "table"), default="json")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--workers", type=int, help="parallel worker processes")
    p.add_argument("--timing", action="store_true", help="include wall-clock timings (breaks byte-identical output)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="birmap",
        description="Exact degree growth, special loci and invariant fibrations for the maps "
        "(a0+a1x+a2y, (b0+b1x+b2y)/(g0+g1x+g2y)).",
    )
    parser.add_argument("--version", action="version", version=f"birmap {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for cmd in COMMANDS + (ALL,):
        _add_common(sub.add_parser(cmd, help=f"run '{cmd}' on every map"))
    _add_common(sub.add_parser("run", help="run the commands listed in the job file"))
    return parser


def _config_from_args(args) -> JobConfig:
    single = any(getattr(args, k) for k in ("alpha", "beta", "gamma"))
    if args.config and single:
        raise ConfigError("give either a job file or --alpha/--beta/--gamma, not both")
    if args.config:
        cfg = load_config(args.config)
    elif single:
        if not all(getattr(args, k) for k in ("alpha", "beta", "gamma")):
            raise ConfigError("--alpha, --beta and --gamma must all be given")
        data = {"maps": [{"name": args.name, **{k: _triple(getattr(args, k)) for k in ("alpha", "beta", "gamma")}}]}
        cfg = config_from_dict(data, "<command line>")
    else:
        raise ConfigError("no maps: pass a job file or --alpha/--beta/--gamma")
    if args.command != "run":
        cfg = replace(cfg, commands=(args.command,))
    overrides = {
        "n_iterates": args.n,
        "horizon": args.horizon,
        "period_bound": args.period_bound,
        "seed": args.seed,
        "workers": args.workers,
        "output_path": args.out,
    }
    for key, value in overrides.items():
        if value is None:
            continue
        if key not in ("seed", "output_path") and value < 1:
            raise ConfigError(f"--{key.replace('_', '-')} must be positive")
        cfg = replace(cfg, **{key: value})
    return cfg


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config_from_args(args)
    except ConfigError as exc:
        print(f"birmap: error: {exc}", file=sys.stderr)
        return 2
    report, code = run(cfg, timing=args.timing)
    text = render_report(report, args.format)
    if cfg.output_path:
        try:
            Path(cfg.output_path).write_text(text, encoding="utf-8")
        except OSError as exc:
            print(f"birmap: error: cannot write {cfg.output_path}: {exc.strerror}", file=sys.stderr)
            return 2
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
