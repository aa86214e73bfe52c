"""Positivity-preserving finite-volume solvers for the 1D compressible Euler
equations: explicit, modified-Patankar, and flux-balanced time integrators."""

from .models import EosError, IdealGas, ReactiveMixture
from .spatial import CellField, Grid, NEUMANN, PERIODIC
from .integrators import (
    PositivityError,
    SCHEMES,
    SchemeSpec,
    advance_to,
    compute_dt,
    make_stepper,
    parse_scheme,
)
from .scenarios import Scenario, make_scenario
from .riemann import RiemannSolution, solve_riemann

__all__ = [
    "EosError", "IdealGas", "ReactiveMixture",
    "CellField", "Grid", "NEUMANN", "PERIODIC",
    "PositivityError", "SCHEMES", "SchemeSpec", "advance_to", "compute_dt",
    "make_stepper", "parse_scheme",
    "Scenario", "make_scenario",
    "RiemannSolution", "solve_riemann",
]
