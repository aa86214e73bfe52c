"""Experiment harness: runs, snapshot/summary files, convergence studies,
maximal-stable-CFL searches, and comparison against reference solutions.

File formats (consumed by the reporting frontend, so kept bit-stable):

* snapshots: ``#key=value`` metadata lines, a header row, then one row per
  cell with 17-significant-digit decimals (lossless float64 round trip),
* run summaries and study results: JSON.

All files are written atomically (temp file + rename).
"""
from __future__ import annotations

import json
import math
import os
import tempfile
import time
from dataclasses import dataclass, field as _dfield
from pathlib import Path

import numpy as np

from .integrators import (
    PositivityError,
    RunStats,
    SCHEMES,
    SchemeSpec,
    advance_to,
    parse_scheme,
)
from .models import Model
from .riemann import solve_riemann
from .scenarios import Scenario, make_scenario
from .spatial import CellField

_GAUSS_X, _GAUSS_W = np.polynomial.legendre.leggauss(5)

EXIT_OK = 0
EXIT_POSITIVITY = 2
EXIT_CONFIG = 3
EXIT_IO = 4

#: Two-significant-digit CFL ladder used when no explicit grid is given.
DEFAULT_CFL_GRID = (0.01, 0.02, 0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 0.9, 1.0)


@dataclass
class RunConfig:
    scenario: str
    scheme: str
    cells: int
    cfl: float
    safety: float = 1.0
    order: int | None = None
    tend: float | None = None
    delta: float | None = None
    out: str = "out"
    snapshots: int = 0

    def validate(self) -> None:
        if self.scheme not in SCHEMES:
            raise ConfigError(f"unknown scheme {self.scheme!r}")
        spec = SCHEMES[self.scheme]
        if self.order is not None and self.order != spec.order:
            raise ConfigError(
                f"scheme {self.scheme!r} is order {spec.order}, got --order {self.order}")
        if self.cells < 2:
            raise ConfigError("need at least 2 cells")
        if self.cfl <= 0 or not 0 < self.safety <= 1:
            raise ConfigError("need cfl > 0 and 0 < safety <= 1")
        if self.snapshots < 0:
            raise ConfigError("snapshots must be >= 0")


class ConfigError(ValueError):
    pass


def load_config(path: str | Path) -> dict:
    """Plain key=value file; '#' starts a comment."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def snapshot_columns(model: Model) -> list[str]:
    if model.ndens == 1:
        return ["x", "rho", "u", "p", "rhoE"]
    return ["x", "rho1", "rho2", "rho3", "u", "p", "rhoE"]


def write_snapshot(path: str | Path, model: Model, field: CellField,
                   meta: dict) -> None:
    cols = snapshot_columns(model)
    prim = model.cons_to_prim(field.u)
    data = np.vstack([field.grid.centers(), prim, field.u[model.ndens + 1]])
    lines = [f"#{k}={v}" for k, v in meta.items()]
    lines.append(",".join(cols))
    for j in range(data.shape[1]):
        lines.append(",".join(_fmt(v) for v in data[:, j]))
    _atomic_write(Path(path), "\n".join(lines) + "\n")


def read_snapshot(path: str | Path) -> tuple[dict, list[str], np.ndarray]:
    meta: dict[str, str] = {}
    header: list[str] = []
    rows: list[list[float]] = []
    for raw in Path(path).read_text().splitlines():
        if raw.startswith("#"):
            key, _, value = raw[1:].partition("=")
            meta[key] = value
        elif not header:
            header = raw.split(",")
        elif raw:
            rows.append([float(v) for v in raw.split(",")])
    return meta, header, np.array(rows).T


@dataclass
class RunResult:
    status: str                    # "ok" | "positivity-failure"
    exit_code: int
    summary: dict
    field: CellField | None
    snapshot_paths: list[str] = _dfield(default_factory=list)


def simulate(scenario: Scenario, scheme: SchemeSpec, cells: int, cfl: float,
             safety: float = 1.0, t_end: float | None = None,
             on_step=None) -> tuple[CellField, RunStats]:
    field = scenario.initial_field(cells)
    t = scenario.t_end if t_end is None else t_end
    return advance_to(scenario.model, field, t, scheme, cfl, safety, on_step=on_step)


def run(config: RunConfig) -> RunResult:
    """Execute one configured run, writing snapshots and a JSON summary."""
    config.validate()
    scenario = make_scenario(config.scenario, delta=config.delta, t_end=config.tend)
    scheme = parse_scheme(config.scheme)
    out = Path(config.out)
    model = scenario.model

    meta_base = {
        "scenario": scenario.name,
        "scheme": scheme.name,
        "model": "single" if model.ndens == 1 else "multi",
        "cells": config.cells,
        "cfl": _fmt(config.cfl),
        "safety": _fmt(config.safety),
        "tend": _fmt(scenario.t_end),
        "delta": _fmt(getattr(model, "delta", 0.0)),
    }
    snapshots: list[str] = []

    def emit(tag: str, step: int, t: float, fld: CellField) -> None:
        name = f"snap_{tag}.csv"
        write_snapshot(out / name, model, fld,
                       {**meta_base, "t": _fmt(t), "step": step})
        snapshots.append(name)

    def on_step(step: int, t: float, fld: CellField) -> None:
        if config.snapshots and step % config.snapshots == 0:
            emit(f"{step:06d}", step, t, fld)

    wall0 = time.perf_counter()
    failure = None
    try:
        field0 = scenario.initial_field(config.cells)
        emit("000000", 0, 0.0, field0)
        field, stats = simulate(scenario, scheme, config.cells, config.cfl,
                                config.safety, on_step=on_step if config.snapshots else None)
        emit("final", stats.steps, stats.t, field)
        status, code = "ok", EXIT_OK
    except PositivityError as exc:
        field, stats = None, RunStats()
        failure = {"step": exc.step, "t": exc.t, "reason": exc.reason,
                   "component": exc.component, "cell": exc.cell}
        status, code = "positivity-failure", EXIT_POSITIVITY

    summary = {
        **meta_base,
        "status": status,
        "exit_code": code,
        "steps": stats.steps,
        "t_final": stats.t,
        "dt_min": stats.dt_min if math.isfinite(stats.dt_min) else 0.0,
        "dt_max": stats.dt_max,
        "alpha_max": stats.alpha_max,
        "min_pressure": stats.min_pressure if math.isfinite(stats.min_pressure) else None,
        "min_density": stats.min_density if math.isfinite(stats.min_density) else None,
        "wall_time_s": time.perf_counter() - wall0,
        "failure": failure,
        "snapshots": snapshots,
    }
    _atomic_write(out / "summary.json", json.dumps(summary, indent=2) + "\n")
    return RunResult(status, code, summary, field, snapshots)


def restrict_pair(fine: np.ndarray) -> np.ndarray:
    """Average two fine cells per coarse cell (conservative restriction)."""
    return 0.5 * (fine[..., 0::2] + fine[..., 1::2])


def _norms(diff: np.ndarray, dx: float) -> tuple[float, float]:
    return float(np.sum(np.abs(diff)) * dx), float(np.sqrt(np.sum(diff**2) * dx))


@dataclass
class EocRow:
    cells: int
    l1: float
    l2: float
    eoc1: float | None
    eoc2: float | None


def eoc_study(scenario: Scenario, scheme: SchemeSpec, n_list: list[int],
              cfl: float, safety: float = 1.0) -> list[EocRow]:
    """Self-convergence study: the reference for each N is the same scheme at
    2N restricted by cell-pair averaging; errors are L1/L2 of the density and
    EOC(N) = log2(err(N/2) / err(N))."""
    needed = sorted({n for n in n_list} | {2 * n for n in n_list})
    fields: dict[int, np.ndarray] = {}
    for n in needed:
        fld, _ = simulate(scenario, scheme, n, cfl, safety)
        fields[n] = fld.u
    rows: list[EocRow] = []
    prev: EocRow | None = None
    for n in sorted(n_list):
        dx = (scenario.b - scenario.a) / n
        diff = fields[n][0] - restrict_pair(fields[2 * n][0])
        l1, l2 = _norms(diff, dx)
        eoc1 = eoc2 = None
        if prev is not None and n == 2 * prev.cells:
            eoc1 = math.log2(prev.l1 / l1)
            eoc2 = math.log2(prev.l2 / l2)
        prev = EocRow(n, l1, l2, eoc1, eoc2)
        rows.append(prev)
    return rows


def write_eoc(path: str | Path, scenario: Scenario, scheme: SchemeSpec,
              rows: list[EocRow], cfl: float) -> None:
    payload = {
        "scenario": scenario.name,
        "scheme": scheme.name,
        "order": scheme.order,
        "cfl": cfl,
        "norm_component": "rho",
        "rows": [{"cells": r.cells, "l1": r.l1, "l2": r.l2,
                  "eoc_l1": r.eoc1, "eoc_l2": r.eoc2} for r in rows],
    }
    _atomic_write(Path(path), json.dumps(payload, indent=2) + "\n")


@dataclass
class CflProbe:
    cfl: float
    stable: bool
    steps: int
    wall_time: float
    reason: str | None = None


@dataclass
class CflSearchResult:
    scenario: str
    scheme: str
    cells: int
    grid: list[float]
    probes: list[CflProbe]
    max_stable: float  # 0.0 when every grid value fails

    def to_json(self) -> dict:
        return {
            "scenario": self.scenario, "scheme": self.scheme, "cells": self.cells,
            "grid": self.grid, "max_stable_cfl": self.max_stable,
            "probes": [{"cfl": p.cfl, "stable": p.stable, "steps": p.steps,
                        "runtime_s": p.wall_time, "reason": p.reason}
                       for p in self.probes],
        }


def cfl_search(scenario: Scenario, scheme: SchemeSpec, cells: int,
               grid: tuple[float, ...] = DEFAULT_CFL_GRID,
               safety: float = 1.0) -> CflSearchResult:
    """Largest grid CFL for which the full run keeps densities, pressure and
    total energy positive.  The whole grid is probed and the stability
    pattern is required to be monotone (no stability islands)."""
    probes: list[CflProbe] = []
    for cfl in sorted(grid):
        t0 = time.perf_counter()
        try:
            _, stats = simulate(scenario, scheme, cells, cfl, safety)
            probes.append(CflProbe(cfl, True, stats.steps, time.perf_counter() - t0))
        except PositivityError as exc:
            probes.append(CflProbe(cfl, False, exc.step, time.perf_counter() - t0,
                                   reason=str(exc)))
    stable_flags = [p.stable for p in probes]
    if any(s and not all(stable_flags[:i]) for i, s in enumerate(stable_flags)):
        raise RuntimeError(
            f"non-monotone stability pattern for {scheme.name}: "
            + ", ".join(f"{p.cfl}:{'ok' if p.stable else 'fail'}" for p in probes))
    max_stable = max((p.cfl for p in probes if p.stable), default=0.0)
    return CflSearchResult(scenario.name, scheme.name, cells, list(sorted(grid)),
                           probes, max_stable)


def reference_sampler(scenario: Scenario):
    """Exact-solution sampler (x, t) -> primitive array for Riemann scenarios."""
    if scenario.ic_left is None or scenario.model.ndens != 1:
        raise ValueError(f"no exact reference for scenario {scenario.name!r}")
    sol = solve_riemann(scenario.ic_left, scenario.ic_right, scenario.model.gamma)

    def sample(x: np.ndarray, t: float) -> np.ndarray:
        if t <= 0:
            xi = np.where(np.asarray(x) < scenario.x0, -np.inf, np.inf)
        else:
            xi = (np.asarray(x) - scenario.x0) / t
        return sol.sample_array(np.atleast_1d(xi))

    return sample


def reference_cell_averages(grid, sampler, t: float) -> np.ndarray:
    """5-point Gauss cell averages of a (rho, u, p) reference sampler."""
    xc = grid.centers()
    ref = np.zeros((3, grid.n))
    for xi, wi in zip(_GAUSS_X, _GAUSS_W):
        ref += 0.5 * wi * sampler(xc + 0.5 * grid.dx * xi, t)
    return ref


def compare_reference(field: CellField, model: Model, sampler, t: float,
                      min_density: float = 0.0) -> dict:
    """Cell-average L1/L2 errors of (rho, u, p) against a sampled reference.

    Errors are absolute (vacuum regions make relative measures meaningless);
    ``min_density`` masks out cells whose reference density falls below it,
    for measurements away from a vacuum region.
    """
    grid = field.grid
    ref = reference_cell_averages(grid, sampler, t)
    prim = model.cons_to_prim(field.u)
    num = np.stack([model.density(field.u), prim[model.ndens], prim[model.ndens + 1]])
    keep = ref[0] >= min_density
    out = {}
    for i, name in enumerate(("rho", "u", "p")):
        l1, l2 = _norms((num[i] - ref[i])[keep], grid.dx)
        out[f"l1_{name}"] = l1
        out[f"l2_{name}"] = l2
    return out


def write_reference_curve(path: str | Path, grid_x: np.ndarray, sampler,
                          t: float) -> None:
    ref = sampler(grid_x, t)
    lines = ["x,rho,u,p"]
    for j in range(ref.shape[1]):
        lines.append(",".join(_fmt(v) for v in (grid_x[j], ref[0, j], ref[1, j], ref[2, j])))
    _atomic_write(Path(path), "\n".join(lines) + "\n")
