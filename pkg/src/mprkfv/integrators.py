"""Time integrators: explicit RK, modified-Patankar, and flux-balanced variants.

Eight schemes: forward Euler and Heun (explicit, first/second order in time,
paired with first-order and minmod-reconstructed fluxes respectively), their
modified-Patankar versions applied to the densities (``mpe``/``mpheun``) or to
densities and total energy (``-rhoe``), and the flux-balanced versions
(``-s``) where only the densities are Patankar-treated and the momentum and
energy fluxes are split so their density-tied parts carry the same weights.

The Patankar weight denominators are the old state for the one-stage schemes
and (stage, final) = (u^n, u^(2)) for the Heun-based ones.
"""
from __future__ import annotations

import time as _time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .models import EosError, Model
from .pdrs import (
    PdrsTerms,
    assemble_density_pdrs,
    assemble_aux_terms,
    assemble_mp_matrix,
    assemble_source_coupling,
    aux_update,
    solve_banded,
    solve_coupled,
)
from .spatial import CellField, evaluate, max_wave_speed


@dataclass(frozen=True)
class ButcherTableau:
    """Explicit RK tableau with non-negative entries."""

    a: tuple[tuple[float, ...], ...]
    b: tuple[float, ...]
    c: tuple[float, ...]

    def __post_init__(self) -> None:
        s = len(self.b)
        if len(self.a) != s or len(self.c) != s:
            raise ValueError("inconsistent tableau dimensions")
        for k, row in enumerate(self.a):
            if len(row) != s:
                raise ValueError("tableau rows must have length s")
            if any(row[j] != 0.0 for j in range(k, s)):
                raise ValueError("tableau must be strictly lower triangular")
        if any(v < 0 for row in self.a for v in row) or any(v < 0 for v in self.b + self.c):
            raise ValueError("tableau entries must be non-negative")

    @property
    def stages(self) -> int:
        return len(self.b)


FORWARD_EULER = ButcherTableau(a=((0.0,),), b=(1.0,), c=(0.0,))
HEUN = ButcherTableau(a=((0.0, 0.0), (1.0, 0.0)), b=(0.5, 0.5), c=(0.0, 1.0))

MP_NONE = "none"
MP_DENSITIES = "densities"
MP_DENSITIES_ENERGY = "densities-energy"
MP_FLUX_BALANCED = "flux-balanced"


@dataclass(frozen=True)
class SchemeSpec:
    """Integrator identity: explicit base plus Patankar treatment."""

    name: str
    base: str  # "fe" | "heun"
    mp: str

    @property
    def order(self) -> int:
        return 1 if self.base == "fe" else 2

    @property
    def tableau(self) -> ButcherTableau:
        return FORWARD_EULER if self.base == "fe" else HEUN


SCHEMES = {
    s.name: s
    for s in (
        SchemeSpec("fe", "fe", MP_NONE),
        SchemeSpec("mpe", "fe", MP_DENSITIES),
        SchemeSpec("mpe-rhoe", "fe", MP_DENSITIES_ENERGY),
        SchemeSpec("mpe-s", "fe", MP_FLUX_BALANCED),
        SchemeSpec("heun", "heun", MP_NONE),
        SchemeSpec("mpheun", "heun", MP_DENSITIES),
        SchemeSpec("mpheun-rhoe", "heun", MP_DENSITIES_ENERGY),
        SchemeSpec("mpheun-s", "heun", MP_FLUX_BALANCED),
    )
}

FIRST_ORDER_SCHEMES = ("fe", "mpe-rhoe", "mpe", "mpe-s")
SECOND_ORDER_SCHEMES = ("heun", "mpheun-rhoe", "mpheun", "mpheun-s")


def parse_scheme(name: str) -> SchemeSpec:
    try:
        return SCHEMES[name.lower()]
    except KeyError:
        raise ValueError(f"unknown scheme {name!r}; known: {', '.join(SCHEMES)}") from None


def compute_dt(model: Model, field: CellField, cfl: float, safety: float = 1.0,
               order: int = 1, remaining: float | None = None) -> float:
    """cfl * safety * dx / max interface wave speed, clipped to land on t_end."""
    if cfl <= 0 or not 0 < safety <= 1:
        raise ValueError("need cfl > 0 and 0 < safety <= 1")
    dt = cfl * safety * field.grid.dx / max_wave_speed(model, field, order)
    if remaining is not None:
        dt = min(dt, remaining)
    return dt


def _flux_diff(fl) -> np.ndarray:
    return fl.flux[:, :-1] - fl.flux[:, 1:]


def step_explicit(model: Model, field: CellField, dt: float,
                  tableau: ButcherTableau = FORWARD_EULER) -> CellField:
    """Plain explicit RK step of all components, source by the midpoint rule."""
    order = 1 if tableau.stages == 1 else 2
    lam = dt / field.grid.dx
    rhs = []
    state = field
    for k in range(tableau.stages):
        if k > 0:
            uk = field.u.copy()
            for nu in range(k):
                if tableau.a[k][nu] != 0.0:
                    uk = uk + dt * tableau.a[k][nu] * rhs[nu]
            state = field.replace(uk)
        fl = evaluate(model, state, order, split=False)
        r = _flux_diff(fl) / field.grid.dx
        if model.has_source:
            r = r + model.source(state.u)
        rhs.append(r)
    new = field.u.copy()
    for k in range(tableau.stages):
        new = new + dt * tableau.b[k] * rhs[k]
    return field.replace(new)


def _check_mp_positive(u: np.ndarray, rows: list[int]) -> None:
    for r in rows:
        if not np.all(u[r] > 0):
            raise ValueError(f"non-positive state in MP-treated component {r}")


def _solve_mp_rows(terms: dict[int, PdrsTerms], src: tuple | None,
                   pwd: dict[int, np.ndarray], base: np.ndarray,
                   lam: float, dt: float) -> dict[int, np.ndarray]:
    """Solve the Patankar systems of all MP rows; rows 0 and 1 are coupled
    through the reaction blocks when a source split is given.

    The reaction blocks use the same weight denominators as the flux terms of
    the solve they join, so the coupled matrix keeps its vanishing block
    column sums (positivity and exact mass conservation).
    """
    out: dict[int, np.ndarray] = {}
    for r, t in terms.items():
        if src is not None and r in (0, 1):
            continue
        out[r] = solve_banded(assemble_mp_matrix(t, pwd[r], lam), base[r] + lam * t.rp)
    if src is not None:
        sp1, sd1 = src
        m1 = assemble_mp_matrix(terms[0], pwd[0], lam)
        m2 = assemble_mp_matrix(terms[1], pwd[1], lam)
        blocks = assemble_source_coupling(sp1, sd1, pwd[0], pwd[1], dt)
        out[0], out[1] = solve_coupled(m1, m2, blocks,
                                       base[0] + lam * terms[0].rp,
                                       base[1] + lam * terms[1].rp)
    return out


def _mp_rows(model: Model, energy: bool) -> list[int]:
    rows = list(range(model.ndens))
    if energy:
        rows.append(model.ndens + 1)
    return rows


def _source_split(model: Model, u: np.ndarray) -> tuple | None:
    if model.ndens > 1 and model.has_source:
        return model.source_split(u)
    return None


def step_mpe(model: Model, field: CellField, dt: float, energy: bool = False) -> CellField:
    """Modified-Patankar Euler on the densities (and total energy if asked);
    momentum (and untreated energy) advance by forward Euler."""
    u = field.u
    nd = model.ndens
    rows = _mp_rows(model, energy)
    _check_mp_positive(u, rows)
    lam = dt / field.grid.dx
    fl = evaluate(model, field, order=1, split=False)
    terms = {r: assemble_density_pdrs(fl.flux[r], field.bc) for r in rows}
    sol = _solve_mp_rows(terms, _source_split(model, u), {r: u[r] for r in rows},
                         u, lam, dt)
    new = u.copy()
    fd = _flux_diff(fl)
    new[nd] = u[nd] + lam * fd[nd]
    if not energy:
        new[nd + 1] = u[nd + 1] + lam * fd[nd + 1]
    for r, x in sol.items():
        new[r] = x
    return field.replace(new)


def step_mpheun(model: Model, field: CellField, dt: float, energy: bool = False) -> CellField:
    """Heun-based MPRK step: the internal stage is an MPE step with weight
    denominators u^n, the final combination reuses both flux evaluations with
    denominators taken from the stage state."""
    u = field.u
    nd = model.ndens
    rows = _mp_rows(model, energy)
    _check_mp_positive(u, rows)
    lam = dt / field.grid.dx

    fl1 = evaluate(model, field, order=2, split=False)
    terms1 = {r: assemble_density_pdrs(fl1.flux[r], field.bc) for r in rows}
    src1 = _source_split(model, u)
    sol2 = _solve_mp_rows(terms1, src1, {r: u[r] for r in rows}, u, lam, dt)
    u2 = u.copy()
    fd1 = _flux_diff(fl1)
    u2[nd] = u[nd] + lam * fd1[nd]
    if not energy:
        u2[nd + 1] = u[nd + 1] + lam * fd1[nd + 1]
    for r, x in sol2.items():
        u2[r] = x

    stage = field.replace(u2)
    fl2 = evaluate(model, stage, order=2, split=False)
    terms2 = {r: assemble_density_pdrs(fl2.flux[r], field.bc) for r in rows}
    src2 = _source_split(model, u2)
    terms = {r: terms1[r].scaled(0.5).plus(terms2[r].scaled(0.5)) for r in rows}
    src = None
    if src1 is not None:
        src = (0.5 * (src1[0] + src2[0]), 0.5 * (src1[1] + src2[1]))
    sol = _solve_mp_rows(terms, src, {r: u2[r] for r in rows}, u, lam, dt)

    new = u.copy()
    fd2 = _flux_diff(fl2)
    new[nd] = u[nd] + 0.5 * lam * (fd1[nd] + fd2[nd])
    if not energy:
        new[nd + 1] = u[nd + 1] + 0.5 * lam * (fd1[nd + 1] + fd2[nd + 1])
    for r, x in sol.items():
        new[r] = x
    return field.replace(new)


def step_mpe_s(model: Model, field: CellField, dt: float) -> CellField:
    """Flux-balanced MPE: Patankar on the densities only; momentum and energy
    advance explicitly with their weighted flux parts carrying the density
    weights, which preserves contacts and needs no extra linear solves."""
    u = field.u
    nd = model.ndens
    rows = list(range(nd))
    _check_mp_positive(u, rows)
    lam = dt / field.grid.dx
    fl = evaluate(model, field, order=1, split=True)
    terms = {r: assemble_density_pdrs(fl.flux[r], field.bc) for r in rows}
    sol = _solve_mp_rows(terms, _source_split(model, u), {r: u[r] for r in rows},
                         u, lam, dt)
    w = np.stack([sol[r] / u[r] for r in rows])
    upd = aux_update(assemble_aux_terms(fl, field.bc), w)
    new = u.copy()
    for r in rows:
        new[r] = sol[r]
    new[nd] = u[nd] + lam * upd[0]
    new[nd + 1] = u[nd + 1] + lam * upd[1]
    return field.replace(new)


def step_mpheun_s(model: Model, field: CellField, dt: float) -> CellField:
    """Flux-balanced MPHeun: each density solve produces a weight vector
    (stage: u^(2)/u^n, final: u^(n+1)/u^(2)) that also weighs the auxiliary
    momentum/energy terms of the corresponding flux evaluations."""
    u = field.u
    nd = model.ndens
    rows = list(range(nd))
    _check_mp_positive(u, rows)
    lam = dt / field.grid.dx

    fl1 = evaluate(model, field, order=2, split=True)
    terms1 = {r: assemble_density_pdrs(fl1.flux[r], field.bc) for r in rows}
    aux1 = assemble_aux_terms(fl1, field.bc)
    src1 = _source_split(model, u)
    sol2 = _solve_mp_rows(terms1, src1, {r: u[r] for r in rows}, u, lam, dt)
    w2 = np.stack([sol2[r] / u[r] for r in rows])
    u2 = u.copy()
    for r in rows:
        u2[r] = sol2[r]
    upd1 = aux_update(aux1, w2)
    u2[nd] = u[nd] + lam * upd1[0]
    u2[nd + 1] = u[nd + 1] + lam * upd1[1]

    stage = field.replace(u2)
    fl2 = evaluate(model, stage, order=2, split=True)
    terms2 = {r: assemble_density_pdrs(fl2.flux[r], field.bc) for r in rows}
    aux2 = assemble_aux_terms(fl2, field.bc)
    src2 = _source_split(model, u2)
    terms = {r: terms1[r].scaled(0.5).plus(terms2[r].scaled(0.5)) for r in rows}
    src = None
    if src1 is not None:
        src = (0.5 * (src1[0] + src2[0]), 0.5 * (src1[1] + src2[1]))
    sol = _solve_mp_rows(terms, src, {r: u2[r] for r in rows}, u, lam, dt)
    wf = np.stack([sol[r] / u2[r] for r in rows])

    new = u.copy()
    for r in rows:
        new[r] = sol[r]
    updf = 0.5 * (aux_update(aux1, wf) + aux_update(aux2, wf))
    new[nd] = u[nd] + lam * updf[0]
    new[nd + 1] = u[nd + 1] + lam * updf[1]
    return field.replace(new)


def make_stepper(model: Model, scheme: SchemeSpec) -> Callable[[CellField, float], CellField]:
    if scheme.mp == MP_NONE:
        tab = scheme.tableau
        return lambda f, dt: step_explicit(model, f, dt, tab)
    if scheme.mp == MP_FLUX_BALANCED:
        fn = step_mpe_s if scheme.base == "fe" else step_mpheun_s
        return lambda f, dt: fn(model, f, dt)
    energy = scheme.mp == MP_DENSITIES_ENERGY
    fn = step_mpe if scheme.base == "fe" else step_mpheun
    return lambda f, dt: fn(model, f, dt, energy)


class PositivityError(RuntimeError):
    """A step produced (or started from) a state outside the positive set."""

    def __init__(self, step: int, t: float, reason: str,
                 component: str | None = None, cell: int | None = None):
        self.step = step
        self.t = t
        self.reason = reason
        self.component = component
        self.cell = cell
        where = ""
        if component is not None:
            where = f" in {component}" + (f" at cell {cell}" if cell is not None else "")
        super().__init__(f"step {step} (t={t:.6g}): {reason}{where}")


@dataclass
class RunStats:
    """Per-trajectory bookkeeping collected by advance_to."""

    steps: int = 0
    t: float = 0.0
    dt_min: float = np.inf
    dt_max: float = 0.0
    alpha_max: float = 0.0
    min_pressure: float = np.inf
    min_density: float = np.inf
    wall_time: float = 0.0


def check_positivity(model: Model, u: np.ndarray) -> tuple[str, int] | None:
    """Return (component, cell) of the first positivity violation, else None.

    Positivity means: all densities, total energy, and pressure strictly
    positive (NaN counts as a violation).
    """
    dens = model.densities(u)
    ok = dens > 0
    if not ok.all():
        k, i = np.argwhere(~ok)[0]
        name = "density" if model.ndens == 1 else f"density {k + 1}"
        return name, int(i)
    ene = u[model.ndens + 1]
    ok = ene > 0
    if not ok.all():
        return "total energy", int(np.flatnonzero(~ok)[0])
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        p = model.pressure(u)
    ok = p > 0
    if not ok.all():
        return "pressure", int(np.flatnonzero(~ok)[0])
    return None


def advance_to(model: Model, field: CellField, t_end: float, scheme: SchemeSpec,
               cfl: float, safety: float = 1.0,
               on_step: Callable[[int, float, CellField], None] | None = None,
               max_steps: int = 50_000_000) -> tuple[CellField, RunStats]:
    """March the field to t_end with per-step CFL time steps.

    Raises PositivityError with full diagnostics if a step fails or commits a
    non-positive state; the input field is never mutated.
    """
    if t_end < 0:
        raise ValueError("t_end must be non-negative")
    stepper = make_stepper(model, scheme)
    stats = RunStats()
    start = _time.perf_counter()
    bad = check_positivity(model, field.u)
    if bad is not None:
        raise PositivityError(0, 0.0, "invalid initial state", *bad)
    stats.min_pressure = float(np.min(model.pressure(field.u)))
    stats.min_density = float(np.min(model.densities(field.u)))
    t = 0.0
    eps = 1e-12 * max(1.0, t_end)
    while t < t_end - eps:
        if stats.steps >= max_steps:
            raise PositivityError(stats.steps, t, "step budget exhausted")
        try:
            amax = max_wave_speed(model, field, scheme.order)
            dt = min(cfl * safety * field.grid.dx / amax, t_end - t)
            new = stepper(field, dt)
        except (EosError, ValueError) as exc:
            raise PositivityError(stats.steps + 1, t, str(exc)) from exc
        bad = check_positivity(model, new.u)
        if bad is not None:
            raise PositivityError(stats.steps + 1, t + dt,
                                  "non-positive committed state", *bad)
        field = new
        t += dt
        stats.steps += 1
        stats.t = t
        stats.dt_min = min(stats.dt_min, dt)
        stats.dt_max = max(stats.dt_max, dt)
        stats.alpha_max = max(stats.alpha_max, amax)
        stats.min_pressure = min(stats.min_pressure, float(np.min(model.pressure(field.u))))
        stats.min_density = min(stats.min_density, float(np.min(model.densities(field.u))))
        if on_step is not None:
            on_step(stats.steps, t, field)
    stats.wall_time = _time.perf_counter() - start
    if stats.dt_min > stats.dt_max:
        stats.dt_min = stats.dt_max = 0.0
    return field, stats
