"""Exact Riemann solver for the single-species ideal-gas Euler equations.

Star-region pressure from Newton iteration on the standard pressure function,
with the two-rarefaction approximation as initial guess (robust near vacuum).
Vacuum generation (two rarefactions separating, no positive star pressure) is
detected from the pressure positivity condition and sampled with the
two-rarefaction vacuum profile: zero density and pressure in the gap, with a
linearly interpolated velocity there for plotting purposes only.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class RiemannSolution:
    """Solved wave structure; sample(xi) returns (rho, u, p) at xi = x/t."""

    gamma: float
    left: tuple[float, float, float]   # rho, u, p
    right: tuple[float, float, float]
    p_star: float
    u_star: float
    rho_star_l: float
    rho_star_r: float
    left_wave: str   # "shock" | "rarefaction"
    right_wave: str
    vacuum: bool

    def sample(self, xi: float) -> tuple[float, float, float]:
        if self.vacuum:
            return _sample_vacuum(self, xi)
        if xi < self.u_star:
            return _sample_side(self, xi, side=-1)
        return _sample_side(self, xi, side=+1)

    def sample_array(self, xi: np.ndarray) -> np.ndarray:
        out = np.empty((3, len(xi)))
        for i, x in enumerate(np.asarray(xi, dtype=float)):
            out[:, i] = self.sample(x)
        return out


def _pressure_fn(p: float, rho_k: float, p_k: float, c_k: float, g: float) -> tuple[float, float]:
    """Toro's f_K(p) and its derivative for one side."""
    if p > p_k:  # shock
        a = 2.0 / ((g + 1.0) * rho_k)
        b = (g - 1.0) / (g + 1.0) * p_k
        root = np.sqrt(a / (p + b))
        f = (p - p_k) * root
        df = root * (1.0 - 0.5 * (p - p_k) / (p + b))
    else:  # rarefaction
        pr = p / p_k
        f = 2.0 * c_k / (g - 1.0) * (pr ** ((g - 1.0) / (2.0 * g)) - 1.0)
        df = pr ** (-(g + 1.0) / (2.0 * g)) / (rho_k * c_k)
    return f, df


def solve_riemann(prim_l, prim_r, gamma: float = 1.4,
                  tol: float = 1e-12, max_iter: int = 100) -> RiemannSolution:
    """Solve the Riemann problem for primitive states (rho, u, p)."""
    rho_l, u_l, p_l = map(float, prim_l)
    rho_r, u_r, p_r = map(float, prim_r)
    g = gamma
    if min(rho_l, rho_r) <= 0 or min(p_l, p_r) <= 0:
        raise ValueError("initial states must have positive density and pressure")
    c_l = np.sqrt(g * p_l / rho_l)
    c_r = np.sqrt(g * p_r / rho_r)

    if u_r - u_l >= 2.0 * (c_l + c_r) / (g - 1.0):
        return RiemannSolution(g, (rho_l, u_l, p_l), (rho_r, u_r, p_r),
                               p_star=0.0, u_star=0.0, rho_star_l=0.0, rho_star_r=0.0,
                               left_wave="rarefaction", right_wave="rarefaction",
                               vacuum=True)

    # two-rarefaction initial guess
    ex = (g - 1.0) / (2.0 * g)
    p = ((c_l + c_r - 0.5 * (g - 1.0) * (u_r - u_l))
         / (c_l / p_l**ex + c_r / p_r**ex)) ** (1.0 / ex)
    p = max(p, 1e-14 * min(p_l, p_r))
    du = u_r - u_l
    for _ in range(max_iter):
        fl, dfl = _pressure_fn(p, rho_l, p_l, c_l, g)
        fr, dfr = _pressure_fn(p, rho_r, p_r, c_r, g)
        dp = (fl + fr + du) / (dfl + dfr)
        p_new = p - dp
        if p_new <= 0:
            p_new = 0.5 * p
        if abs(p_new - p) <= tol * p_new:
            p = p_new
            break
        p = p_new
    else:
        raise RuntimeError(f"pressure iteration did not converge, residual {dp:.3e}")

    fl, _ = _pressure_fn(p, rho_l, p_l, c_l, g)
    fr, _ = _pressure_fn(p, rho_r, p_r, c_r, g)
    u_star = 0.5 * (u_l + u_r) + 0.5 * (fr - fl)
    gm = (g - 1.0) / (g + 1.0)
    if p > p_l:
        rho_sl = rho_l * (p / p_l + gm) / (gm * p / p_l + 1.0)
        lw = "shock"
    else:
        rho_sl = rho_l * (p / p_l) ** (1.0 / g)
        lw = "rarefaction"
    if p > p_r:
        rho_sr = rho_r * (p / p_r + gm) / (gm * p / p_r + 1.0)
        rw = "shock"
    else:
        rho_sr = rho_r * (p / p_r) ** (1.0 / g)
        rw = "rarefaction"
    return RiemannSolution(g, (rho_l, u_l, p_l), (rho_r, u_r, p_r),
                           p_star=p, u_star=u_star, rho_star_l=rho_sl,
                           rho_star_r=rho_sr, left_wave=lw, right_wave=rw,
                           vacuum=False)


def _sample_side(sol: RiemannSolution, xi: float, side: int) -> tuple[float, float, float]:
    g = sol.gamma
    gm = (g - 1.0) / (g + 1.0)
    if side < 0:
        rho_k, u_k, p_k = sol.left
        rho_s, wave = sol.rho_star_l, sol.left_wave
    else:
        rho_k, u_k, p_k = sol.right
        rho_s, wave = sol.rho_star_r, sol.right_wave
    c_k = np.sqrt(g * p_k / rho_k)
    s = float(side)
    if wave == "shock":
        speed = u_k + s * c_k * np.sqrt((g + 1.0) / (2.0 * g) * sol.p_star / p_k
                                        + (g - 1.0) / (2.0 * g))
        outside = xi <= speed if side < 0 else xi >= speed
        if outside:
            return rho_k, u_k, p_k
        return rho_s, sol.u_star, sol.p_star
    head = u_k + s * c_k
    c_s = c_k * (sol.p_star / p_k) ** ((g - 1.0) / (2.0 * g))
    tail = sol.u_star + s * c_s
    if (xi <= head if side < 0 else xi >= head):
        return rho_k, u_k, p_k
    if (xi >= tail if side < 0 else xi <= tail):
        return rho_s, sol.u_star, sol.p_star
    # inside the fan: self-similar profile
    c = 2.0 / (g + 1.0) * (c_k + s * (g - 1.0) / 2.0 * (xi - u_k))
    u = 2.0 / (g + 1.0) * (-s * c_k + (g - 1.0) / 2.0 * u_k + xi)
    rho = rho_k * (c / c_k) ** (2.0 / (g - 1.0))
    p = p_k * (c / c_k) ** (2.0 * g / (g - 1.0))
    return rho, u, p


def _sample_vacuum(sol: RiemannSolution, xi: float) -> tuple[float, float, float]:
    g = sol.gamma
    rho_l, u_l, p_l = sol.left
    rho_r, u_r, p_r = sol.right
    c_l = np.sqrt(g * p_l / rho_l)
    c_r = np.sqrt(g * p_r / rho_r)
    s_l = u_l + 2.0 * c_l / (g - 1.0)  # left vacuum front
    s_r = u_r - 2.0 * c_r / (g - 1.0)  # right vacuum front
    if xi <= u_l - c_l:
        return rho_l, u_l, p_l
    if xi >= u_r + c_r:
        return rho_r, u_r, p_r
    if xi < s_l:  # left fan
        c = 2.0 / (g + 1.0) * (c_l - (g - 1.0) / 2.0 * (xi - u_l))
        u = 2.0 / (g + 1.0) * (c_l + (g - 1.0) / 2.0 * u_l + xi)
        rho = rho_l * (c / c_l) ** (2.0 / (g - 1.0))
        return rho, u, p_l * (c / c_l) ** (2.0 * g / (g - 1.0))
    if xi > s_r:  # right fan
        c = 2.0 / (g + 1.0) * (c_r + (g - 1.0) / 2.0 * (xi - u_r))
        u = 2.0 / (g + 1.0) * (-c_r + (g - 1.0) / 2.0 * u_r + xi)
        rho = rho_r * (c / c_r) ** (2.0 / (g - 1.0))
        return rho, u, p_r * (c / c_r) ** (2.0 * g / (g - 1.0))
    # vacuum region: zero density/pressure, interpolated velocity (plotting only)
    frac = (xi - s_l) / (s_r - s_l) if s_r > s_l else 0.5
    return 0.0, s_l + frac * (s_r - s_l), 0.0
