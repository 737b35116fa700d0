"""Discrete radial bilaplacian with clamped boundary conditions.

The radial Laplacian u'' + (N-1)/r u' is discretized in conservative form
r^(1-N) (r^(N-1) u')' on a graded mesh r_i = (i/(n+1))^gamma, with no node
at the origin (the flux through r = 0 vanishes by symmetry) and ghost
elimination of u(1) = u'(1) = 0 at r = 1.  Composing two Laplacians gives
a pentadiagonal operator that is exactly self-adjoint and positive
definite in the cell-volume inner product, so Green-matrix positivity and
the eigenvalue problems inherit clean linear algebra.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_solve_banded, cholesky_banded, eig_banded

from mems4.closed_forms import BoundaryPair, PowerSum


@dataclass(frozen=True)
class RadialGrid:
    """Graded mesh on (0, 1): interior nodes, grading exponent, dimension."""

    nodes: np.ndarray
    gamma: float
    dim: int

    @property
    def n(self) -> int:
        return len(self.nodes)


def build_grid(n_nodes: int, gamma: float, dim: int) -> RadialGrid:
    """Graded mesh with nodes (i/(n+1))^gamma, i = 1..n, clustered at the
    origin for gamma > 1 to resolve r^(-8/3) forcing."""
    if n_nodes < 16:
        raise ValueError("need at least 16 interior nodes")
    if gamma < 1:
        raise ValueError("grading exponent must be >= 1")
    if dim < 1:
        raise ValueError("dimension must be >= 1")
    i = np.arange(1, n_nodes + 1, dtype=float)
    nodes = (i / (n_nodes + 1)) ** float(gamma)
    return RadialGrid(nodes, float(gamma), dim)


@dataclass(frozen=True)
class RadialField:
    """Sampled radial function: one value per interior grid node."""

    grid: RadialGrid
    values: np.ndarray

    def __post_init__(self):
        if len(self.values) != self.grid.n:
            raise ValueError("value vector does not match the grid")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("field contains non-finite entries")

    def max(self) -> float:
        return float(np.max(self.values))


def sample_power_sum(ps: PowerSum, radii: np.ndarray) -> np.ndarray:
    """Float samples of an exact power sum at the given radii."""
    out = np.zeros_like(radii, dtype=float)
    for t in ps.terms:
        out += float(t.coeff) * radii ** float(t.exponent)
    return out


class OperatorMatrix:
    """Discrete clamped bilaplacian on a radial grid.

    Weighted form: A = S W^-1 S + kappa e_n e_n^T with S the (symmetric)
    conservative Laplacian matrix and W the diagonal of cell volumes; the
    action of the bilaplacian is B = W^-1 A.  A is pentadiagonal,
    symmetric, positive definite.
    """

    def __init__(self, grid: RadialGrid, boundary: BoundaryPair):
        self.grid = grid
        self.boundary = boundary
        self.dim = grid.dim
        r = grid.nodes
        n = grid.n
        nd = float(self.dim)
        mids = np.empty(n)
        mids[:-1] = 0.5 * (r[:-1] + r[1:])
        mids[-1] = 0.5 * (r[-1] + 1.0)
        gaps = np.empty(n)
        gaps[:-1] = r[1:] - r[:-1]
        gaps[-1] = 1.0 - r[-1]
        # Cell volumes int r^(N-1) dr over [m_{i-1}, m_i] (m_{-1} = 0).
        powers = mids**nd
        cells = np.empty(n)
        cells[0] = powers[0] / nd
        cells[1:] = (powers[1:] - powers[:-1]) / nd
        flux = mids ** (nd - 1.0) / gaps
        self.cells = cells
        self.flux = flux
        self.delta = gaps[-1]
        # Tridiagonal S (weighted Laplacian): S[i,i+1] = flux[i],
        # S[i,i] = -(flux[i-1] + flux[i]) with flux[-1] := 0 at the origin.
        diag = -np.copy(flux)
        diag[1:] -= flux[:-1]
        self.s_diag = diag
        self.s_off = flux[:-1]
        self.kappa = flux[-1] * 2.0 / self.delta**2
        self._banded = self._assemble_banded()
        self._chol = None

    def _assemble_banded(self) -> np.ndarray:
        n = self.grid.n
        d, e, c = self.s_diag, self.s_off, self.cells
        ab = np.zeros((3, n))
        # A = S diag(1/c) S, upper banded storage (row 2 = main diagonal).
        ab[2, :] = d * d / c
        ab[2, :-1] += e * e / c[1:]
        ab[2, 1:] += e * e / c[:-1]
        ab[1, 1:] = e * (d[:-1] / c[:-1] + d[1:] / c[1:])
        ab[0, 2:] = e[:-1] * e[1:] / c[1:-1]
        ab[2, -1] += self.kappa
        return ab

    @property
    def banded(self) -> np.ndarray:
        """Upper symmetric-banded storage of the weighted matrix A."""
        return self._banded

    def weights(self) -> np.ndarray:
        """Quadrature weights (cell volumes, surface measure dropped)."""
        return self.cells

    def laplacian(self, v: np.ndarray, bv: float = 0.0, bs: float = 0.0) -> np.ndarray:
        """Discrete radial Laplacian at the interior nodes for a field with
        boundary value bv and boundary slope bs at r = 1."""
        out = self.s_diag * v
        out[:-1] += self.s_off * v[1:]
        out[1:] += self.s_off * v[:-1]
        out[-1] += self.flux[-1] * bv
        return out / self.cells

    def boundary_laplacian(self, v: np.ndarray, bv: float = 0.0, bs: float = 0.0) -> float:
        """Discrete Laplacian at r = 1 via the reflected ghost node."""
        return (
            2.0 * (v[-1] - bv) / self.delta**2
            + 2.0 * bs / self.delta
            + (self.dim - 1.0) * bs
        )

    def apply(self, v: np.ndarray, bv: float = 0.0, bs: float = 0.0) -> np.ndarray:
        """Discrete bilaplacian of a sampled field with boundary data
        (bv, bs) at r = 1; (0, 0) is the clamped operator action."""
        w = self.laplacian(v, bv)
        wb = self.boundary_laplacian(v, bv, bs)
        out = self.s_diag * w
        out[:-1] += self.s_off * w[1:]
        out[1:] += self.s_off * w[:-1]
        out[-1] += self.flux[-1] * wb
        return out / self.cells

    def _factor(self):
        if self._chol is None:
            self._chol = cholesky_banded(self._banded, lower=False)
        return self._chol

    def solve(self, f: np.ndarray) -> np.ndarray:
        """Solve the clamped problem: bilaplacian(v) = f at interior nodes."""
        return cho_solve_banded((self._factor(), False), self.cells * f)

    def solve_shifted(self, rhs: np.ndarray, shift_diag: np.ndarray) -> np.ndarray:
        """Solve (A - W diag(shift_diag)) x = W rhs with banded LU (the
        shifted matrix need not be definite near a fold)."""
        from scipy.linalg import solve_banded

        n = self.grid.n
        ab = np.zeros((5, n))
        ab[0, 2:] = self._banded[0, 2:]
        ab[1, 1:] = self._banded[1, 1:]
        ab[2, :] = self._banded[2, :] - self.cells * shift_diag
        ab[3, :-1] = self._banded[1, 1:]
        ab[4, :-2] = self._banded[0, 2:]
        return solve_banded((2, 2), ab, self.cells * rhs)

    def green_matrix(self) -> np.ndarray:
        """Dense inverse of the clamped bilaplacian (columns are discrete
        Green functions); raises on a singular factorization."""
        n = self.grid.n
        x = cho_solve_banded((self._factor(), False), np.eye(n))
        return x * self.cells[None, :]

    def _standard_banded(self, weight: np.ndarray | None = None) -> np.ndarray:
        """Symmetric-banded similarity transform W^-1/2 (A - W diag) W^-1/2."""
        sq = np.sqrt(self.cells)
        ab = np.copy(self._banded)
        ab[2, :] /= self.cells
        ab[1, 1:] /= sq[1:] * sq[:-1]
        ab[0, 2:] /= sq[2:] * sq[:-2]
        if weight is not None:
            ab[2, :] -= weight
        return ab

    def nu1(self) -> tuple[float, RadialField]:
        """Smallest eigenvalue of the clamped bilaplacian in the weighted
        inner product, with its (one-signed) eigenfunction."""
        ab = self._standard_banded()
        vals, vecs = eig_banded(
            ab, lower=False, select="i", select_range=(0, 0)
        )
        phi = vecs[:, 0] / np.sqrt(self.cells)
        if phi[np.argmax(np.abs(phi))] < 0:
            phi = -phi
        return float(vals[0]), RadialField(self.grid, phi)

    def smallest_weighted_eigenvalue(
        self, weight: np.ndarray, return_field: bool = False
    ):
        """Smallest eigenvalue of bilaplacian - diag(weight) in the
        weighted inner product (the discrete stability eigenvalue when
        weight = 2 lambda / (1-u)^3)."""
        weight = np.asarray(weight, dtype=float)
        if len(weight) != self.grid.n or not np.all(np.isfinite(weight)):
            raise ValueError("weight must be a finite vector on the grid")
        if np.any(weight < 0):
            raise ValueError("weight entries must be nonnegative")
        ab = self._standard_banded(weight)
        if return_field:
            vals, vecs = eig_banded(ab, lower=False, select="i", select_range=(0, 0))
            phi = vecs[:, 0] / np.sqrt(self.cells)
            return float(vals[0]), RadialField(self.grid, phi)
        vals = eig_banded(
            ab, lower=False, select="i", select_range=(0, 0), eigvals_only=True
        )
        return float(vals[0])

    def rayleigh_quotient(self, v: np.ndarray, weight: np.ndarray | None = None) -> float:
        """Discrete Rayleigh quotient (v, (A - W diag(weight)) v) / (v, W v)."""
        num = float(v @ self._matvec_weighted(v))
        den = float(np.sum(self.cells * v * v))
        if weight is not None:
            num -= float(np.sum(self.cells * weight * v * v))
        return num / den

    def _matvec_weighted(self, v: np.ndarray) -> np.ndarray:
        """A v in the pentadiagonal storage."""
        ab = self._banded
        out = ab[2, :] * v
        out[:-1] += ab[1, 1:] * v[1:]
        out[1:] += ab[1, 1:] * v[:-1]
        out[:-2] += ab[0, 2:] * v[2:]
        out[2:] += ab[0, 2:] * v[:-2]
        return out

    def _matvec_weighted_abs(self, v: np.ndarray) -> np.ndarray:
        """|A| |v|, the scale vector for componentwise backward error."""
        ab = np.abs(self._banded)
        v = np.abs(v)
        out = ab[2, :] * v
        out[:-1] += ab[1, 1:] * v[1:]
        out[1:] += ab[1, 1:] * v[:-1]
        out[:-2] += ab[0, 2:] * v[2:]
        out[2:] += ab[0, 2:] * v[:-2]
        return out


def assemble_bilaplacian(grid: RadialGrid, bp: BoundaryPair) -> OperatorMatrix:
    """Assemble the clamped discrete bilaplacian; non-homogeneous boundary
    data is handled by the solver through the shift u = v + extension."""
    return OperatorMatrix(grid, bp)
