"""Physical models for the 1D compressible Euler equations.

Two gas models share one state-array convention: component axis first, so a
state is any array of shape ``(ncomp, ...)``.  For the single-species gas the
components are ``(rho, rho*u, rho*E)``; for the three-species reactive gas
``(rho1, rho2, rho3, rho*u, rho*E)``.  Primitive arrays use the same layout
with velocity and pressure in place of momentum and total energy.

All methods are pure functions of their inputs; models are frozen dataclasses
and safe to share between threads.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class EosError(ValueError):
    """Thermodynamic state outside the domain of the equation of state."""


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise EosError(msg)


@dataclass(frozen=True)
class IdealGas:
    """Single-species ideal gas, p = (gamma - 1) (rho E - rho u^2 / 2)."""

    gamma: float = 1.4

    ndens: int = 1

    @property
    def ncomp(self) -> int:
        return 3

    def densities(self, u: np.ndarray) -> np.ndarray:
        return u[:1]

    def density(self, u: np.ndarray) -> np.ndarray:
        return u[0]

    def velocity(self, u: np.ndarray) -> np.ndarray:
        _require(bool(np.all(u[0] > 0)), "non-positive density")
        return u[1] / u[0]

    def pressure(self, u: np.ndarray) -> np.ndarray:
        _require(bool(np.all(u[0] > 0)), "non-positive density")
        return (self.gamma - 1.0) * (u[2] - 0.5 * u[1] ** 2 / u[0])

    def internal_energy(self, u: np.ndarray) -> np.ndarray:
        """Internal energy density e = rho E - rho u^2 / 2, via EoS inversion."""
        return self.pressure(u) / (self.gamma - 1.0)

    def sound_speed(self, u: np.ndarray) -> np.ndarray:
        p = self.pressure(u)
        _require(bool(np.all(p > 0)), "non-positive pressure")
        return np.sqrt(self.gamma * p / u[0])

    def flux(self, u: np.ndarray) -> np.ndarray:
        v = self.velocity(u)
        p = self.pressure(u)
        return np.stack([u[1], u[1] * v + p, v * (u[2] + p)])

    def source(self, u: np.ndarray) -> np.ndarray:
        return np.zeros_like(u)

    @property
    def has_source(self) -> bool:
        return False

    def prim_to_cons(self, w: np.ndarray) -> np.ndarray:
        rho, v, p = w[0], w[1], w[2]
        _require(bool(np.all(rho > 0)), "non-positive density")
        return np.stack([rho, rho * v, p / (self.gamma - 1.0) + 0.5 * rho * v**2])

    def cons_to_prim(self, u: np.ndarray) -> np.ndarray:
        return np.stack([u[0], self.velocity(u), self.pressure(u)])


@dataclass(frozen=True)
class ReactiveMixture:
    """Three-species reactive gas: 2 A <-> A2 with species 3 inert.

    ``gas_constant`` is the universal constant in J/(mol K); molar masses are
    in kg/mol, and the reference Riemann states only give a physical reaction
    temperature (~8000 K) with this pairing.  ``energy_coeffs`` are the
    per-species internal-energy coefficients q_s in e_s = q_s rho_s R T / M_s;
    they enter both the equation of state and the mixture adiabatic index.
    ``delta`` is the inverse reaction characteristic time multiplying the
    reaction rate (0 switches the source off).
    """

    molar_masses: tuple[float, float, float] = (0.016, 0.032, 0.028)
    gas_constant: float = 8.314
    rate_prefactor: float = 2.9e17
    activation_temperature: float = 59750.0
    equilibrium_coeffs: tuple[float, float, float, float, float] = (
        2.85,
        0.988,
        -6.181,
        -0.023,
        -0.001,
    )
    formation_enthalpy_1: float = 1.558e7
    energy_coeffs: tuple[float, float, float] = (1.5, 2.5, 1.5)
    delta: float = 0.0

    ndens: int = 3

    @property
    def ncomp(self) -> int:
        return 5

    def densities(self, u: np.ndarray) -> np.ndarray:
        return u[:3]

    def density(self, u: np.ndarray) -> np.ndarray:
        return u[0] + u[1] + u[2]

    def _moles(self, u: np.ndarray) -> np.ndarray:
        m = self.molar_masses
        return u[0] / m[0] + u[1] / m[1] + u[2] / m[2]

    def _heat(self, u: np.ndarray) -> np.ndarray:
        m, q = self.molar_masses, self.energy_coeffs
        return q[0] * u[0] / m[0] + q[1] * u[1] / m[1] + q[2] * u[2] / m[2]

    def velocity(self, u: np.ndarray) -> np.ndarray:
        return u[3] / self.density(u)

    def internal_energy(self, u: np.ndarray) -> np.ndarray:
        """EoS bracket rho E - rho1 h1^0 - m^2/(2 rho) (thermal energy only)."""
        _require(bool(np.all(u[:3] > 0)), "non-positive species density")
        rho = self.density(u)
        return u[4] - u[0] * self.formation_enthalpy_1 - 0.5 * u[3] ** 2 / rho

    def pressure(self, u: np.ndarray) -> np.ndarray:
        return self._moles(u) / self._heat(u) * self.internal_energy(u)

    def temperature(self, u: np.ndarray) -> np.ndarray:
        p = self.pressure(u)
        _require(bool(np.all(p > 0)), "non-positive pressure")
        return p / (self.gas_constant * self._moles(u))

    def rate_coeffs(self, T: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Forward/backward rate coefficients (k_f, k_b) at temperature T.

        Evaluated in log space with clamped exponents: the equilibrium fit is
        a cubic in 1/T, so far outside its calibration range (transient cells
        with near-zero thermal energy) k_b would overflow; clamping keeps the
        values finite-huge, which the Patankar solves absorb gracefully.
        """
        T = np.asarray(T, dtype=float)
        _require(bool(np.all(T > 0)), "non-positive temperature")
        z = 1.0e4 / T
        b1, b2, b3, b4, b5 = self.equilibrium_coeffs
        with np.errstate(under="ignore", over="ignore"):
            log_kf = (np.log(self.rate_prefactor) - 2.0 * np.log(T)
                      - self.activation_temperature / T)
            eq = b1 + b2 * np.log(z) + b3 * z + b4 * z**2 + b5 * z**3
            kf = np.exp(np.clip(log_kf, -700.0, 700.0))
            kb = np.exp(np.clip(log_kf - eq, -700.0, 700.0))
        return kf, kb

    def source_split(self, u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Production/destruction parts (S1^p, S1^d) of the rho1 source.

        Because 2 M1 = M2, the rho2 source is the mirror image: S2^p is S1^d
        and S2^d is S1^p (the same arrays, not copies), so total mass is
        conserved exactly.
        """
        m = self.molar_masses
        T = self.temperature(u)
        kf, kb = self.rate_coeffs(T)
        moles = self._moles(u)
        scale = self.delta * 2.0 * m[0] * moles
        sp1 = scale * kf * (u[1] / m[1])
        sd1 = scale * kb * (u[0] / m[0]) ** 2
        return sp1, sd1

    def source(self, u: np.ndarray) -> np.ndarray:
        out = np.zeros_like(u)
        if self.delta != 0.0:
            sp1, sd1 = self.source_split(u)
            out[0] = sp1 - sd1
            out[1] = sd1 - sp1
        return out

    @property
    def has_source(self) -> bool:
        return self.delta != 0.0

    def mixture_gamma(self, u: np.ndarray) -> np.ndarray:
        return 1.0 + self._moles(u) / self._heat(u)

    def sound_speed(self, u: np.ndarray) -> np.ndarray:
        p = self.pressure(u)
        _require(bool(np.all(p > 0)), "non-positive pressure")
        return np.sqrt(self.mixture_gamma(u) * p / self.density(u))

    def flux(self, u: np.ndarray) -> np.ndarray:
        v = self.velocity(u)
        p = self.pressure(u)
        return np.stack([u[0] * v, u[1] * v, u[2] * v, u[3] * v + p, v * (u[4] + p)])

    def prim_to_cons(self, w: np.ndarray) -> np.ndarray:
        _require(bool(np.all(w[:3] > 0)), "non-positive species density")
        rho = w[0] + w[1] + w[2]
        eint = w[4] * self._heat(w) / self._moles(w)
        ene = eint + w[0] * self.formation_enthalpy_1 + 0.5 * rho * w[3] ** 2
        return np.stack([w[0], w[1], w[2], rho * w[3], ene])

    def cons_to_prim(self, u: np.ndarray) -> np.ndarray:
        return np.stack([u[0], u[1], u[2], self.velocity(u), self.pressure(u)])


Model = IdealGas | ReactiveMixture
