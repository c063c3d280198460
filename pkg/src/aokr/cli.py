"""Command-line interface.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import logging
import sys

from . import __version__
from .experiments import (
    ConfigError,
    RunConfig,
    parse_config_file,
    run_convert_period,
    run_figure,
    run_scan,
)
from .quantum import BasisOverflowError

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3


def _common_flags() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", help="flat 'key = value' file; flags override it")
    g = p.add_argument_group("physics")
    g.add_argument("--k", type=float, help="kick strength")
    g.add_argument("--tau", help="scaled period, or a comma-separated tau grid")
    g.add_argument("--tau-min", type=float)
    g.add_argument("--tau-max", type=float)
    g.add_argument("--tau-steps", type=int)
    g.add_argument("--kicks", help="kick numbers, e.g. '5', '3,4,5' or '1..8'")
    g = p.add_argument_group("ensemble")
    g.add_argument("--dist", choices=["gaussian", "uniform", "delta"])
    g.add_argument("--sigma-p", type=float, help="gaussian width in two-photon recoils")
    g.add_argument("--p-mean", type=float)
    g.add_argument("--p0", type=float, help="momentum of a delta ensemble")
    g.add_argument("--n-momenta", type=int)
    g.add_argument("--n-angles", type=int)
    g.add_argument("--quantum-samples", type=int)
    g.add_argument("--basis", type=int, help="quantum basis half size N (default: automatic)")
    g.add_argument("--seed", type=int)
    g = p.add_argument_group("scaling function and portrait")
    g.add_argument("--x-max", type=float)
    g.add_argument("--x-step", type=float)
    g.add_argument("--n-theta", type=int)
    g.add_argument("--step", type=float, help="pendulum integration step")
    g.add_argument("--iterations", type=int)
    g.add_argument("--n-seeds", type=int)
    g = p.add_argument_group("run")
    g.add_argument("--threads", type=int, help="worker threads (never changes results)")
    g.add_argument("--out", help="output directory")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags()
    parser = argparse.ArgumentParser(
        prog="aokr", description="Kicked-rotor simulations near vanishing kicking period.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    fig = sub.add_parser("figure", parents=[common], help="regenerate the data of figure 1-4")
    fig.add_argument("fig", type=int, help="figure number")
    sub.add_parser("scan-tau", parents=[common], help="classical energy against tau")
    sub.add_parser("scan-kicks", parents=[common], help="classical energy against kick number")
    sub.add_parser("scaling", parents=[common], help="tabulate the scaling function G(x)")
    sub.add_parser("portrait", parents=[common], help="phase-space orbits of the map")
    sub.add_parser("quantum-scan", parents=[common], help="quantum energy against tau")
    conv = sub.add_parser("convert-period", parents=[common],
                          help="convert a kicking period in seconds to tau")
    conv.add_argument("period", type=float, help="kicking period T in seconds")
    conv.add_argument("--k-l", type=float, help="laser wavenumber in 1/m")
    conv.add_argument("--mass", type=float, help="atomic mass in kg")
    return parser


_NOT_SETTINGS = {"command", "config", "verbose", "fig"}


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    flags = {k: v for k, v in vars(args).items() if k not in _NOT_SETTINGS}
    file_values = parse_config_file(args.config) if args.config else {}
    figure = args.fig if args.command == "figure" else None
    return RunConfig.build(args.command, file_values, flags, figure=figure)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        config = _config_from_args(args)
        if args.command == "convert-period":
            print(repr(run_convert_period(config)))
            return EXIT_OK
        if args.command == "figure":
            paths = run_figure(args.fig, config)
        else:
            paths = run_scan(config)
    except (BasisOverflowError, FloatingPointError) as exc:
        print(f"aokr: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, OSError) as exc:
        print(f"aokr: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    for path in paths:
        print(path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
