"""Uniform grid, boundary handling, reconstruction, and LLF interface fluxes.

Interfaces are indexed 0..N: interface ``j`` sits between cell ``j-1`` and
cell ``j``, with 0 and N the domain boundary.  All interface arrays returned
here have length N+1 along the last axis.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .models import EosError, Model

PERIODIC = "periodic"
NEUMANN = "neumann"
_POLICIES = (PERIODIC, NEUMANN)


@dataclass(frozen=True)
class Grid:
    """Equispaced cells on [a, b]: interfaces at a + j*dx, j = 0..n."""

    a: float
    b: float
    n: int

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError("grid needs at least 2 cells")
        if not self.b > self.a:
            raise ValueError("empty domain")

    @property
    def dx(self) -> float:
        return (self.b - self.a) / self.n

    def centers(self) -> np.ndarray:
        return self.a + (np.arange(self.n) + 0.5) * self.dx

    def interfaces(self) -> np.ndarray:
        return self.a + np.arange(self.n + 1) * self.dx


@dataclass
class CellField:
    """Cell-averaged conservative states plus the boundary policy."""

    grid: Grid
    bc: str
    u: np.ndarray  # (ncomp, n)

    def __post_init__(self) -> None:
        if self.bc not in _POLICIES:
            raise ValueError(f"unknown boundary policy {self.bc!r}")
        if self.u.ndim != 2 or self.u.shape[1] != self.grid.n:
            raise ValueError("field shape does not match grid")

    def replace(self, u: np.ndarray) -> "CellField":
        return CellField(self.grid, self.bc, u)


def fill_ghosts(u: np.ndarray, bc: str) -> np.ndarray:
    """Extend (ncomp, n) by one ghost cell per side according to the policy."""
    ext = np.empty((u.shape[0], u.shape[1] + 2))
    ext[:, 1:-1] = u
    if bc == PERIODIC:
        ext[:, 0] = u[:, -1]
        ext[:, -1] = u[:, 0]
    elif bc == NEUMANN:
        ext[:, 0] = u[:, 0]
        ext[:, -1] = u[:, -1]
    else:
        raise ValueError(f"unknown boundary policy {bc!r}")
    return ext


def mean_jump(gl: np.ndarray, gr: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Interface mean (g(UL)+g(UR))/2 and jump g(UR)-g(UL), component-wise."""
    return 0.5 * (gl + gr), gr - gl


def minmod(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.where(a * b > 0, np.where(np.abs(a) < np.abs(b), a, b), 0.0)


def minmod_reconstruct(values: np.ndarray, bc: str) -> tuple[np.ndarray, np.ndarray]:
    """Left/right interface traces from limited linear reconstruction.

    Component-wise slopes minmod(v_i - v_{i-1}, v_{i+1} - v_i)/dx; traces are
    v_i -/+ dx/2 * slope, so cell means of the reconstructed profile are
    preserved and traces stay within the local three-cell range.  Ghost cells
    carry the wrapped slope (periodic) or a zero slope (neumann).
    """
    ext = fill_ghosts(values, bc)
    half = np.zeros_like(ext)  # dx/2 * slope per (extended) cell
    dl = ext[:, 1:-1] - ext[:, :-2]
    dr = ext[:, 2:] - ext[:, 1:-1]
    half[:, 1:-1] = 0.5 * minmod(dl, dr)
    if bc == PERIODIC:
        half[:, 0] = half[:, -2]
        half[:, -1] = half[:, 1]
    vl = ext[:, :-1] + half[:, :-1]
    vr = ext[:, 1:] - half[:, 1:]
    return vl, vr


def interface_states(model: Model, field: CellField,
                     order: int) -> tuple[np.ndarray, np.ndarray]:
    """Interface states: cell values (order 1) or minmod traces (order 2).

    Reconstruction acts on the primitive variables: minmod keeps each trace
    within the range of its neighbours, so positive cell densities and
    pressures give positive traces, which conservative-variable slopes do not
    guarantee near vacuum states.
    """
    if order == 1:
        ext = fill_ghosts(field.u, field.bc)
        return ext[:, :-1], ext[:, 1:]
    if order == 2:
        w = model.cons_to_prim(field.u)
        wl, wr = minmod_reconstruct(w, field.bc)
        return model.prim_to_cons(wl), model.prim_to_cons(wr)
    raise ValueError(f"unsupported order {order}")


def llf_alpha(model: Model, ul: np.ndarray, ur: np.ndarray) -> np.ndarray:
    """Local wave speed: max of |u|+c on both sides and on the mean state."""
    try:
        al = np.abs(model.velocity(ul)) + model.sound_speed(ul)
        ar = np.abs(model.velocity(ur)) + model.sound_speed(ur)
    except EosError as exc:
        raise _located(model, (ul, ur), str(exc)) from None
    um = 0.5 * (ul + ur)
    try:
        am = np.abs(model.velocity(um)) + model.sound_speed(um)
    except EosError as exc:
        raise _located(model, (um,), str(exc)) from None
    return np.maximum(np.maximum(al, ar), am)


def _located(model: Model, states: tuple[np.ndarray, ...], msg: str) -> EosError:
    """Attach the first offending interface index to an EoS failure."""
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        for u in states:
            bad = np.flatnonzero(~(model.densities(u) > 0).all(axis=0))
            if not bad.size:
                rho = model.density(u)
                eint = u[-1] - 0.5 * u[model.ndens] ** 2 / rho
                if model.ndens > 1:
                    eint = eint - u[0] * model.formation_enthalpy_1
                bad = np.flatnonzero(~(eint > 0))
            if bad.size:
                return EosError(f"{msg} at interface {bad[0]}")
    return EosError(msg)


def llf_flux(model: Model, ul: np.ndarray, ur: np.ndarray,
             alpha: np.ndarray | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Local Lax-Friedrichs flux <F(U)> - alpha/2 [U] and the wave speed."""
    if alpha is None:
        alpha = llf_alpha(model, ul, ur)
    fm, _ = mean_jump(model.flux(ul), model.flux(ur))
    return fm - 0.5 * alpha * (ur - ul), alpha


@dataclass
class InterfaceFluxes:
    """Full LLF fluxes plus the flux-balanced splitting, per interface.

    ``fw[k, l]`` is the part of balanced component l (0 momentum, 1 energy)
    tied to density component k; ``fu[l]`` is the untouched remainder, so
    sum_k fw[k, l] + fu[l] recomposes the full flux row of component l.
    """

    flux: np.ndarray             # (ncomp, n+1)
    alpha: np.ndarray            # (n+1,)
    fw: np.ndarray | None = None  # (ndens, 2, n+1)
    fu: np.ndarray | None = None  # (2, n+1)


def split_flux(model: Model, ul: np.ndarray, ur: np.ndarray,
               alpha: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Weighted/unweighted decomposition of the momentum and energy fluxes.

    The weighted parts collect everything that, on a contact, is a multiple
    of the corresponding density flux; pressure work and internal-energy
    advection stay unweighted.
    """
    nd = model.ndens
    vl, vr = model.velocity(ul), model.velocity(ur)
    pl, pr = model.pressure(ul), model.pressure(ur)
    if nd == 1:
        el = pl / (model.gamma - 1.0)
        er = pr / (model.gamma - 1.0)
    else:
        el = ul[nd + 1] - 0.5 * ul[nd] ** 2 / model.density(ul)
        er = ur[nd + 1] - 0.5 * ur[nd] ** 2 / model.density(ur)

    fw = np.empty((nd, 2, ul.shape[1]))
    for k in range(nd):
        mom_m = 0.5 * (ul[k] * vl**2 + ur[k] * vr**2)
        fw[k, 0] = mom_m - 0.5 * alpha * (ur[k] * vr - ul[k] * vl)
        ke_l, ke_r = 0.5 * ul[k] * vl**2, 0.5 * ur[k] * vr**2
        fw[k, 1] = 0.5 * (ke_l * vl + ke_r * vr) - 0.5 * alpha * (ke_r - ke_l)

    fu = np.empty((2, ul.shape[1]))
    fu[0] = 0.5 * (pl + pr)
    if nd == 1:
        # direct form: the internal-energy jump vanishes bitwise on contacts
        fu[1] = 0.5 * (vl * (el + pl) + vr * (er + pr)) - 0.5 * alpha * (er - el)
    else:
        # remainder form <u(e+p)> - alpha/2 [e]: algebraically identical, but
        # immune to the cancellation the formation-enthalpy magnitudes cause
        full = (0.5 * (vl * (ul[nd + 1] + pl) + vr * (ur[nd + 1] + pr))
                - 0.5 * alpha * (ur[nd + 1] - ul[nd + 1]))
        fu[1] = full - fw[:, 1, :].sum(axis=0)
    return fw, fu


def evaluate(model: Model, field: CellField, order: int,
             split: bool = True) -> InterfaceFluxes:
    """One flux pass: traces, wave speeds, LLF fluxes, and the splitting.

    Single consolidated pass so primitives are computed once per side; the
    per-function entry points above stay available for piecewise use.
    """
    ul, ur = interface_states(model, field, order)
    nd = model.ndens
    try:
        vl, vr = model.velocity(ul), model.velocity(ur)
        pl, pr = model.pressure(ul), model.pressure(ur)
        if not (np.all(pl > 0) and np.all(pr > 0)):
            raise EosError("non-positive pressure")
        if nd == 1:
            gl = gr = model.gamma
            el, er = pl / (gl - 1.0), pr / (gr - 1.0)
        else:
            gl, gr = model.mixture_gamma(ul), model.mixture_gamma(ur)
            el = er = None  # multi energy split uses the remainder form
        cl = np.sqrt(gl * pl / model.density(ul))
        cr = np.sqrt(gr * pr / model.density(ur))
    except EosError as exc:
        raise _located(model, (ul, ur), str(exc)) from None
    um = 0.5 * (ul + ur)
    try:
        am = np.abs(model.velocity(um)) + model.sound_speed(um)
    except EosError as exc:
        raise _located(model, (um,), str(exc)) from None
    alpha = np.maximum(np.maximum(np.abs(vl) + cl, np.abs(vr) + cr), am)

    flux = np.empty((model.ncomp, ul.shape[1]))
    half = 0.5 * alpha
    for k in range(nd):
        flux[k] = 0.5 * (ul[k] * vl + ur[k] * vr) - half * (ur[k] - ul[k])
    flux[nd] = 0.5 * (ul[nd] * vl + pl + ur[nd] * vr + pr) - half * (ur[nd] - ul[nd])
    flux[nd + 1] = (0.5 * (vl * (ul[nd + 1] + pl) + vr * (ur[nd + 1] + pr))
                    - half * (ur[nd + 1] - ul[nd + 1]))

    fw = fu = None
    if split:
        fw = np.empty((nd, 2, ul.shape[1]))
        for k in range(nd):
            fw[k, 0] = 0.5 * (ul[k] * vl**2 + ur[k] * vr**2) - half * (ur[k] * vr - ul[k] * vl)
            ke_l, ke_r = 0.5 * ul[k] * vl**2, 0.5 * ur[k] * vr**2
            fw[k, 1] = 0.5 * (ke_l * vl + ke_r * vr) - half * (ke_r - ke_l)
        fu = np.empty((2, ul.shape[1]))
        fu[0] = 0.5 * (pl + pr)
        if nd == 1:
            fu[1] = 0.5 * (vl * (el + pl) + vr * (er + pr)) - half * (er - el)
        else:
            fu[1] = flux[nd + 1] - fw[:, 1, :].sum(axis=0)
    return InterfaceFluxes(flux=flux, alpha=alpha, fw=fw, fu=fu)


def max_wave_speed(model: Model, field: CellField, order: int) -> float:
    ul, ur = interface_states(model, field, order)
    return float(np.max(llf_alpha(model, ul, ur)))
