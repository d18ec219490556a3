"""Command-line entry point: ``solve``, ``sweep``, ``figures`` and ``invest``.

Exit status is 0 on success, 1 on bad input and 2 when a solver fails to
converge.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import reporting
from .errors import (
    BracketError,
    ConfigError,
    ConvergenceError,
    DegeneracyError,
    DomainError,
    UnsupportedConfigurationError,
)
from .investment import (
    SpectrumOffer,
    monopoly_clearing_price,
    monopoly_purchase,
    planner_prices,
    solve_investment_game,
)

log = logging.getLogger("spectrum_statics")

EXIT_OK, EXIT_INVALID, EXIT_NO_CONVERGENCE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; 2 is reserved for convergence here.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _scenario_flags(p):
    p.add_argument("--config", help="YAML file of scenario keys; flags override it")
    p.add_argument("--market", choices=sorted(reporting.MARKETS))
    p.add_argument("--p-max", dest="p_max", type=float)
    p.add_argument("--q-max", dest="q_max", type=float)
    p.add_argument("--latency", choices=["linear-latency", "power-latency"])
    p.add_argument("--latency-k", dest="latency_k", type=float)
    p.add_argument("--whitespace-latency", dest="whitespace_latency",
                   choices=["linear-latency", "power-latency"])
    p.add_argument("--whitespace-k", dest="whitespace_k", type=float)
    for name in ("C", "C1", "C2", "W"):
        p.add_argument(f"--{name}", dest=name, type=float)
    p.add_argument("--n", type=int)


def _sweep_flags(p):
    p.add_argument("--sweep", help="parameter(s) to vary, comma separated")
    p.add_argument("--sweep-mode", dest="sweep_mode", choices=["set", "add"])
    p.add_argument("--sweep-scale", dest="sweep_scale", type=float)
    p.add_argument("--lo", type=float)
    p.add_argument("--hi", type=float)
    p.add_argument("--steps", type=int)
    p.add_argument("--derivatives", action="store_true", default=None,
                   help="add a dT/dvalue column")
    p.add_argument("--output", "-o")
    p.add_argument("--format", choices=reporting.FORMATS)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="spectrum-statics", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    solve = sub.add_parser("solve", help="solve one scenario and print JSON")
    _scenario_flags(solve)

    sweep = sub.add_parser("sweep", help="solve over a parameter grid and write CSV/JSON")
    _scenario_flags(sweep)
    _sweep_flags(sweep)

    figs = sub.add_parser("figures", help="write the data behind the comparison figures")
    figs.add_argument("figure", nargs="*", type=int, help="figure ids (default: all)")
    figs.add_argument("--output-dir", "-o", default=".")
    figs.add_argument("--format", choices=reporting.FORMATS, default="csv")
    figs.add_argument("--p-max", dest="p_max", type=float, default=1.0)
    figs.add_argument("--points", type=int, default=201)

    inv = sub.add_parser("invest", help="spectrum purchases at given or clearing unit prices")
    inv.add_argument("--mode", choices=["monopoly", "game"], default="monopoly")
    inv.add_argument("--p-max", dest="p_max", type=float, default=1.0)
    inv.add_argument("--W", type=float, default=0.0)
    inv.add_argument("--C", type=float, default=1.0, help="monopolist capacity")
    inv.add_argument("--Ce", type=float, default=1.0, help="capacity on offer to the monopolist")
    inv.add_argument("--pe", type=float, help="unit price (default: market clearing)")
    inv.add_argument("--C1", type=float, default=0.5)
    inv.add_argument("--C2", type=float, default=0.5)
    inv.add_argument("--Ce1", type=float, default=0.5)
    inv.add_argument("--Ce2", type=float, default=0.5)
    inv.add_argument("--pe1", type=float, help="unit price to provider 1 (default: planner price)")
    inv.add_argument("--pe2", type=float, help="unit price to provider 2 (default: planner price)")
    return parser


def _config_from_args(args, keys) -> reporting.ScenarioConfig:
    data = reporting.load_config(args.config) if args.config else {}
    for key in keys:
        value = getattr(args, key, None)
        if value is not None:
            data[key] = value
    return reporting.ScenarioConfig.from_mapping(data)


_SCENARIO_KEYS = ("market", "p_max", "q_max", "latency", "latency_k", "whitespace_latency",
                  "whitespace_k", "C", "C1", "C2", "W", "n")
_SWEEP_KEYS = ("sweep", "sweep_mode", "sweep_scale", "lo", "hi", "steps", "derivatives",
               "output", "format")


def _dump(obj, out):
    json.dump(obj, out, indent=2)
    out.write("\n")


def cmd_solve(args, out) -> int:
    config = _config_from_args(args, _SCENARIO_KEYS)
    outcome = reporting.solve_config(config)
    outcome.check(tol=1e-9, q_max=config.q_max)
    _dump(outcome.as_dict(), out)
    return EXIT_OK


def cmd_sweep(args, out) -> int:
    config = _config_from_args(args, _SCENARIO_KEYS + _SWEEP_KEYS)
    records = reporting.sweep_records(config, reporting.run_sweep(config))
    if config.output:
        path = reporting.emit(records, config.format, config.output)
        log.info("wrote %d rows to %s", len(records), path)
        print(path, file=out)
    else:
        out.write(reporting.render(records, config.format))
    return EXIT_OK


def cmd_figures(args, out) -> int:
    figures = args.figure or list(reporting.FIGURES)
    if args.points < 2:
        raise ConfigError("must be at least 2", "points")
    grid = reporting.default_grid(args.points)
    outdir = Path(args.output_dir)
    for fig in figures:
        bundle = reporting.figure_suite(fig, p_max=args.p_max, grid=grid)
        path = reporting.emit(bundle.records(), args.format, outdir / f"figure{fig}.{args.format}")
        print(path, file=out)
    return EXIT_OK


def cmd_invest(args, out) -> int:
    if args.mode == "monopoly":
        pe = args.pe
        if pe is None:
            pe = monopoly_clearing_price(args.C, args.Ce, args.W, args.p_max)
        result = monopoly_purchase(args.C, SpectrumOffer(args.Ce, pe), args.p_max, args.W)
    else:
        pe1, pe2 = args.pe1, args.pe2
        if pe1 is None or pe2 is None:
            q1, q2 = planner_prices(args.C1, args.C2, args.Ce1, args.Ce2, args.p_max, args.W)
            pe1 = q1 if pe1 is None else pe1
            pe2 = q2 if pe2 is None else pe2
        offer = SpectrumOffer((args.Ce1, args.Ce2), (pe1, pe2))
        result = solve_investment_game(args.C1, args.C2, offer, args.p_max, args.W)
    _dump(result.as_dict(), out)
    return EXIT_OK


COMMANDS = {"solve": cmd_solve, "sweep": cmd_sweep, "figures": cmd_figures, "invest": cmd_invest}


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args, out)
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    except (ConfigError, DomainError, BracketError, DegeneracyError,
            UnsupportedConfigurationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
