"""Production-destruction-rest assembly and the Patankar linear systems.

A conserved component with interface fluxes f[0..n] is rewritten as a
production-destruction system between neighbouring cells:

    p_{i+1,i} = d_{i,i+1} = max(0, f[i+1]),
    p_{i,i+1} = d_{i+1,i} = max(0, -f[i+1]),

with boundary fluxes entering as rest terms (neumann) or as one extra
interior pair across the wrap interface (periodic, which keeps the update
exactly conservative).  Patankar weighting of these terms yields banded
M-matrices: tridiagonal per component, block-tridiagonal with 2x2 blocks when
the two reacting densities are coupled through the source.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_banded as _lapack_banded

from .spatial import NEUMANN, PERIODIC, InterfaceFluxes


@dataclass
class PdrsTerms:
    """Banded production/destruction entries and rest vectors for one component.

    ``dplus[i]`` is the shared value d_{i,i+1} = p_{i+1,i} and ``pplus[i]``
    the shared p_{i,i+1} = d_{i+1,i} at interior interface i+1 (i = 0..n-2).
    ``wrap_d``/``wrap_p`` carry the same pair for the periodic wrap interface.
    """

    dplus: np.ndarray  # (n-1,)
    pplus: np.ndarray  # (n-1,)
    rp: np.ndarray     # (n,)
    rd: np.ndarray     # (n,)
    wrap_d: float = 0.0
    wrap_p: float = 0.0
    periodic: bool = False

    @property
    def n(self) -> int:
        return self.rp.shape[0]

    def destruction_sums(self) -> np.ndarray:
        """Row sums sum_j d_{ij} including the wrap pair."""
        n = self.n
        out = np.zeros(n)
        out[:-1] += self.dplus
        out[1:] += self.pplus
        if self.periodic:
            out[-1] += self.wrap_d
            out[0] += self.wrap_p
        return out

    def scaled(self, c: float) -> "PdrsTerms":
        return PdrsTerms(c * self.dplus, c * self.pplus, c * self.rp, c * self.rd,
                         c * self.wrap_d, c * self.wrap_p, self.periodic)

    def plus(self, other: "PdrsTerms") -> "PdrsTerms":
        return PdrsTerms(self.dplus + other.dplus, self.pplus + other.pplus,
                         self.rp + other.rp, self.rd + other.rd,
                         self.wrap_d + other.wrap_d, self.wrap_p + other.wrap_p,
                         self.periodic)


def assemble_density_pdrs(f: np.ndarray, bc: str) -> PdrsTerms:
    """Split one component's interface fluxes f[0..n] into PDRS terms."""
    n = f.shape[0] - 1
    inner = f[1:-1]
    dplus = np.maximum(inner, 0.0)
    pplus = np.maximum(-inner, 0.0)
    rp = np.zeros(n)
    rd = np.zeros(n)
    if bc == NEUMANN:
        rp[0] = max(f[0], 0.0)
        rd[0] = max(-f[0], 0.0)
        rp[-1] = max(-f[-1], 0.0)
        rd[-1] = max(f[-1], 0.0)
        return PdrsTerms(dplus, pplus, rp, rd)
    if bc == PERIODIC:
        # f[0] and f[-1] are the same physical interface between cells n-1 and 0
        return PdrsTerms(dplus, pplus, rp, rd,
                         wrap_d=max(f[-1], 0.0), wrap_p=max(-f[-1], 0.0),
                         periodic=True)
    raise ValueError(f"unknown boundary policy {bc!r}")


@dataclass
class AuxTerms:
    """Sign-slaved momentum/energy companions of the density PDRS terms.

    For every interface where the density component k contributes a
    production (resp. destruction) term, the same branch of the weighted flux
    part fw[k] is stored here, so applying the density Patankar weights to
    these terms reproduces, on a contact, the density update scaled by the
    constant velocity/enthalpy factors.  ``rp`` already contains the
    unweighted remainder: unweighted flux differences, the net boundary
    weighted-flux, and the rd compensation that makes unit weights reproduce
    the plain explicit update.
    """

    ad: np.ndarray     # (ndens, 2, n-1) destruction branch values
    ap: np.ndarray     # (ndens, 2, n-1) production branch values
    rd: np.ndarray     # (ndens, 2, n)
    rp: np.ndarray     # (2, n)
    wrap_ad: np.ndarray  # (ndens, 2)
    wrap_ap: np.ndarray  # (ndens, 2)
    periodic: bool = False


def assemble_aux_terms(fl: InterfaceFluxes, bc: str) -> AuxTerms:
    """Build the flux-balanced auxiliary terms from one flux evaluation."""
    nd = fl.fw.shape[0]
    n = fl.flux.shape[1] - 1
    ad = np.empty((nd, 2, n - 1))
    ap = np.empty((nd, 2, n - 1))
    rd = np.zeros((nd, 2, n))
    wrap_ad = np.zeros((nd, 2))
    wrap_ap = np.zeros((nd, 2))
    rp = np.empty((2, n))
    rp[:] = fl.fu[:, :-1] - fl.fu[:, 1:]

    for k in range(nd):
        sign = fl.flux[k, 1:-1] >= 0.0  # destruction branch marker, zero included
        ad[k] = np.where(sign[None, :], fl.fw[k, :, 1:-1], 0.0)
        ap[k] = np.where(sign[None, :], 0.0, -fl.fw[k, :, 1:-1])
        if bc == PERIODIC:
            if fl.flux[k, -1] >= 0.0:
                wrap_ad[k] = fl.fw[k, :, -1]
            else:
                wrap_ap[k] = -fl.fw[k, :, -1]
        else:
            # net boundary weighted-flux enters rp; the destruction-branch part
            # is compensated there and applied weighted through rd
            rp[:, 0] += fl.fw[k, :, 0]
            rp[:, -1] -= fl.fw[k, :, -1]
            if fl.flux[k, 0] < 0.0:
                rd[k, :, 0] = -fl.fw[k, :, 0]
                rp[:, 0] += rd[k, :, 0]
            if fl.flux[k, -1] >= 0.0:
                rd[k, :, -1] = fl.fw[k, :, -1]
                rp[:, -1] += rd[k, :, -1]
    return AuxTerms(ad=ad, ap=ap, rd=rd, rp=rp, wrap_ad=wrap_ad, wrap_ap=wrap_ap,
                    periodic=(bc == PERIODIC))


def aux_update(aux: AuxTerms, weights: np.ndarray) -> np.ndarray:
    """Weighted momentum/energy update increment (2, n), to be scaled dt/dx.

    ``weights`` has shape (ndens, n): the density Patankar weight vector(s)
    of the linear solve this update accompanies.  Unit weights reproduce the
    plain flux-difference update exactly.
    """
    upd = aux.rp.copy()
    for k in range(weights.shape[0]):
        w = weights[k]
        upd[:, :-1] += aux.ap[k] * w[1:] - aux.ad[k] * w[:-1]
        upd[:, 1:] += aux.ad[k] * w[:-1] - aux.ap[k] * w[1:]
        upd -= aux.rd[k] * w
        if aux.periodic:
            upd[:, -1] += aux.wrap_ap[k] * w[0] - aux.wrap_ad[k] * w[-1]
            upd[:, 0] += aux.wrap_ad[k] * w[-1] - aux.wrap_ap[k] * w[0]
    return upd


@dataclass
class MpMatrix:
    """Banded Patankar system matrix (tridiagonal plus optional wrap corners)."""

    diag: np.ndarray   # (n,)
    lower: np.ndarray  # (n-1,) entries (i+1, i)
    upper: np.ndarray  # (n-1,) entries (i, i+1)
    corner_ur: float = 0.0  # entry (0, n-1)
    corner_ll: float = 0.0  # entry (n-1, 0)

    @property
    def n(self) -> int:
        return self.diag.shape[0]

    def to_dense(self) -> np.ndarray:
        a = np.diag(self.diag)
        n = self.n
        a[np.arange(n - 1), np.arange(1, n)] = self.upper
        a[np.arange(1, n), np.arange(n - 1)] = self.lower
        a[0, n - 1] += self.corner_ur
        a[n - 1, 0] += self.corner_ll
        return a


def assemble_mp_matrix(terms: PdrsTerms, pwd: np.ndarray, lam: float) -> MpMatrix:
    """System matrix of the Patankar-weighted update with weight denominators pwd.

    lam is the dt/dx factor multiplying the flux-based terms.  Diagonal
    entries are 1 + lam (r^d_i + sum_j d_ij)/pwd_i, off-diagonal entries
    -lam p_ij / pwd_j.
    """
    if np.any(pwd <= 0):
        raise ValueError("Patankar-weight denominators must be positive")
    if lam < 0:
        raise ValueError("negative time step")
    diag = 1.0 + lam * (terms.rd + terms.destruction_sums()) / pwd
    upper = -lam * terms.pplus / pwd[1:]
    lower = -lam * terms.dplus / pwd[:-1]
    corner_ur = corner_ll = 0.0
    if terms.periodic:
        corner_ur = -lam * terms.wrap_d / pwd[-1]  # p_{0,n-1} = wrap_d
        corner_ll = -lam * terms.wrap_p / pwd[0]   # p_{n-1,0} = wrap_p
    return MpMatrix(diag=diag, lower=lower, upper=upper,
                    corner_ur=corner_ur, corner_ll=corner_ll)


@dataclass
class SourceBlocks:
    """Per-cell 2x2 reaction coupling blocks added to the density systems.

    Row/column order is (rho1, rho2); a11/a22 add to the diagonals, a12/a21
    are the (negative) cross couplings.
    """

    a11: np.ndarray
    a12: np.ndarray
    a21: np.ndarray
    a22: np.ndarray


def assemble_source_coupling(sp1: np.ndarray, sd1: np.ndarray,
                             pwd1: np.ndarray, pwd2: np.ndarray,
                             dt: float) -> SourceBlocks:
    """Patankar-weighted reaction blocks: production of one species is
    destruction of the other, so the block column sums vanish and the coupled
    matrix stays an M-matrix."""
    if np.any(pwd1 <= 0) or np.any(pwd2 <= 0):
        raise ValueError("Patankar-weight denominators must be positive")
    return SourceBlocks(
        a11=dt * sd1 / pwd1,
        a12=-dt * sp1 / pwd2,
        a21=-dt * sd1 / pwd1,
        a22=dt * sp1 / pwd2,
    )


def solve_banded(matrix: MpMatrix, rhs: np.ndarray) -> np.ndarray:
    """Solve the tridiagonal system, with a Woodbury correction for the
    periodic wrap corners."""
    n = matrix.n
    ab = np.zeros((3, n))
    ab[0, 1:] = matrix.upper
    ab[1] = matrix.diag
    ab[2, :-1] = matrix.lower
    if matrix.corner_ur == 0.0 and matrix.corner_ll == 0.0:
        return _lapack_banded((1, 1), ab, rhs, check_finite=False)
    # B = T + cu e0 e_{n-1}^T + cl e_{n-1} e0^T, solved via Woodbury
    cols = np.zeros((n, 3))
    cols[:, 0] = rhs
    cols[0, 1] = matrix.corner_ur
    cols[-1, 2] = matrix.corner_ll
    sol = _lapack_banded((1, 1), ab, cols, check_finite=False)
    y, z1, z2 = sol[:, 0], sol[:, 1], sol[:, 2]
    cap = np.array([[1.0 + z1[-1], z2[-1]], [z1[0], 1.0 + z2[0]]])
    mu = np.linalg.solve(cap, np.array([y[-1], y[0]]))
    return y - z1 * mu[0] - z2 * mu[1]


def solve_coupled(m1: MpMatrix, m2: MpMatrix, blocks: SourceBlocks,
                  rhs1: np.ndarray, rhs2: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Solve the rho1-rho2 system coupled by the reaction blocks.

    Unknowns are interleaved per cell, giving a bandwidth-2 banded matrix
    (block-tridiagonal with 2x2 blocks); periodic wrap corners are handled by
    a rank-4 Woodbury correction.
    """
    n = m1.n
    ab = np.zeros((5, 2 * n))
    ab[2, 0::2] = m1.diag + blocks.a11
    ab[2, 1::2] = m2.diag + blocks.a22
    ab[1, 1::2] = blocks.a12          # (2i, 2i+1)
    ab[3, 0:-1:2] = blocks.a21        # (2i+1, 2i)
    ab[0, 2::2] = m1.upper            # (2i, 2i+2)
    ab[0, 3::2] = m2.upper
    ab[4, 0:-2:2] = m1.lower          # (2i+2, 2i)
    ab[4, 1:-2:2] = m2.lower
    rhs = np.empty(2 * n)
    rhs[0::2] = rhs1
    rhs[1::2] = rhs2

    corners = [(0, 2 * n - 2, m1.corner_ur), (1, 2 * n - 1, m2.corner_ur),
               (2 * n - 2, 0, m1.corner_ll), (2 * n - 1, 1, m2.corner_ll)]
    corners = [(i, j, v) for i, j, v in corners if v != 0.0]
    if not corners:
        x = _lapack_banded((2, 2), ab, rhs, check_finite=False)
        return x[0::2], x[1::2]
    k = len(corners)
    cols = np.zeros((2 * n, 1 + k))
    cols[:, 0] = rhs
    for m, (i, _, v) in enumerate(corners):
        cols[i, 1 + m] = v
    sol = _lapack_banded((2, 2), ab, cols, check_finite=False)
    y = sol[:, 0]
    z = sol[:, 1:]
    # Woodbury capacitance (I + V^T Z) mu = V^T y with v_m = e_{j_m}
    cap = np.eye(k) + np.array([z[j, :] for _, j, _ in corners])
    vy = np.array([y[j] for _, j, _ in corners])
    mu = np.linalg.solve(cap, vy)
    x = y - z @ mu
    return x[0::2], x[1::2]
