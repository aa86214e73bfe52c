"""Command-line interface.

Subcommands: ``run`` (single simulation), ``eoc`` (convergence study),
``cfl-search`` (maximal stable CFL), ``compare`` (errors against the exact
Riemann solution).  Exit codes: 0 success, 2 positivity failure, 3 config
error, 4 I/O error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import harness
from .harness import ConfigError, EXIT_CONFIG, EXIT_IO, EXIT_OK, RunConfig
from .integrators import SCHEMES, parse_scheme
from .scenarios import SCENARIO_NAMES, make_scenario
from .spatial import CellField, Grid


def _add_run_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key=value config file; flags override it")
    p.add_argument("--scenario", choices=SCENARIO_NAMES)
    p.add_argument("--scheme", choices=sorted(SCHEMES))
    p.add_argument("--order", type=int, choices=(1, 2),
                   help="validated against the scheme's own order")
    p.add_argument("--cells", type=int)
    p.add_argument("--cfl", type=float)
    p.add_argument("--safety", type=float)
    p.add_argument("--tend", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--out")
    p.add_argument("--snapshots", type=int,
                   help="emit a snapshot every k steps (0: final only)")


_RUN_TYPES = {"order": int, "cells": int, "cfl": float, "safety": float,
              "tend": float, "delta": float, "snapshots": int}


def _build_run_config(args: argparse.Namespace) -> RunConfig:
    values: dict = {}
    if args.config:
        for key, raw in harness.load_config(args.config).items():
            if key in ("scenario", "scheme", "out"):
                values[key] = raw
            elif key in _RUN_TYPES:
                try:
                    values[key] = _RUN_TYPES[key](raw)
                except ValueError:
                    raise ConfigError(f"bad value for {key}: {raw!r}") from None
            else:
                raise ConfigError(f"unknown config key {key!r}")
    for key in ("scenario", "scheme", "order", "cells", "cfl", "safety",
                "tend", "delta", "out", "snapshots"):
        v = getattr(args, key)
        if v is not None:
            values[key] = v
    for required in ("scenario", "scheme", "cells", "cfl"):
        if required not in values:
            raise ConfigError(f"missing required option --{required}")
    values.setdefault("safety", 1.0)
    values.setdefault("out", "out")
    values.setdefault("snapshots", 0)
    return RunConfig(**values)


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="mprkfv")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one scenario/scheme configuration")
    _add_run_args(p_run)

    p_eoc = sub.add_parser("eoc", help="self-convergence study on the smooth scenario")
    p_eoc.add_argument("--scenario", default="smooth", choices=SCENARIO_NAMES)
    p_eoc.add_argument("--scheme", required=True, choices=sorted(SCHEMES))
    p_eoc.add_argument("--cells", required=True,
                       help="comma-separated doubling list, e.g. 160,320,640")
    p_eoc.add_argument("--cfl", type=float, default=0.5)
    p_eoc.add_argument("--safety", type=float, default=1.0)
    p_eoc.add_argument("--out", required=True)

    p_cfl = sub.add_parser("cfl-search", help="maximal stable CFL on a grid")
    p_cfl.add_argument("--scenario", required=True, choices=SCENARIO_NAMES)
    p_cfl.add_argument("--scheme", required=True, choices=sorted(SCHEMES))
    p_cfl.add_argument("--cells", type=int, required=True)
    p_cfl.add_argument("--grid", help="comma-separated CFL values")
    p_cfl.add_argument("--safety", type=float, default=1.0)
    p_cfl.add_argument("--tend", type=float)
    p_cfl.add_argument("--delta", type=float)
    p_cfl.add_argument("--out", required=True)

    p_cmp = sub.add_parser("compare", help="errors against the exact Riemann solution")
    p_cmp.add_argument("--snapshot", required=True)
    p_cmp.add_argument("--out", required=True)
    p_cmp.add_argument("--reference-out", help="also write the sampled reference curve")

    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            config = _build_run_config(args)
            result = harness.run(config)
            if result.status != "ok":
                print(f"positivity failure: {result.summary['failure']}", file=sys.stderr)
            return result.exit_code
        if args.command == "eoc":
            scenario = make_scenario(args.scenario)
            scheme = parse_scheme(args.scheme)
            n_list = [int(v) for v in args.cells.split(",")]
            rows = harness.eoc_study(scenario, scheme, n_list, args.cfl, args.safety)
            harness.write_eoc(args.out, scenario, scheme, rows, args.cfl)
            return EXIT_OK
        if args.command == "cfl-search":
            scenario = make_scenario(args.scenario, delta=args.delta, t_end=args.tend)
            scheme = parse_scheme(args.scheme)
            grid = harness.DEFAULT_CFL_GRID
            if args.grid:
                grid = tuple(float(v) for v in args.grid.split(","))
            result = harness.cfl_search(scenario, scheme, args.cells, grid, args.safety)
            harness._atomic_write(Path(args.out),
                                  json.dumps(result.to_json(), indent=2) + "\n")
            return EXIT_OK
        if args.command == "compare":
            meta, header, data = harness.read_snapshot(args.snapshot)
            scenario = make_scenario(meta["scenario"])
            n = data.shape[1]
            grid = Grid(scenario.a, scenario.b, n)
            model = scenario.model
            # rebuild the conservative field from the primitive columns
            prim = np.vstack([data[1:model.ndens + 1], data[model.ndens + 1:model.ndens + 3]])
            u = model.prim_to_cons(prim)
            fld = CellField(grid, scenario.bc, u)
            sampler = harness.reference_sampler(scenario)
            t = float(meta["t"])
            errors = harness.compare_reference(fld, model, sampler, t)
            payload = {"snapshot": args.snapshot, "t": t, **errors}
            harness._atomic_write(Path(args.out), json.dumps(payload, indent=2) + "\n")
            if args.reference_out:
                harness.write_reference_curve(Path(args.reference_out),
                                              grid.centers(), sampler, t)
            return EXIT_OK
        raise ConfigError(f"unknown command {args.command!r}")
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
