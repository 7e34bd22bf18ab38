"""Dirichlet lattice on an interval and the spectral basis of the discrete Laplacian.

The spatial domain is (0, L) sampled at N interior points x_i = i*h with
h = L/(N+1); Dirichlet walls sit at x = 0 and x = L. All inner products are
h-weighted, i.e. <u, v> = h * sum_i conj(u_i) v_i, so that lattice sums
approximate integrals over (0, L).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class SpatialGrid:
    """Interior points of a Dirichlet lattice on (0, length)."""

    num_points: int
    length: float
    spacing: float = field(init=False)
    points: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if self.num_points < 1:
            raise ValueError("grid needs at least one interior point")
        if not self.length > 0.0:
            raise ValueError("grid length must be positive")
        h = self.length / (self.num_points + 1)
        object.__setattr__(self, "spacing", h)
        object.__setattr__(
            self, "points", h * np.arange(1, self.num_points + 1, dtype=float)
        )

    def inner(self, u: np.ndarray, v: np.ndarray) -> complex:
        """h-weighted inner product, conjugate-linear in the first slot."""
        return self.spacing * np.sum(np.conj(u) * v)


def build_grid(num_points: int, length: float) -> SpatialGrid:
    return SpatialGrid(num_points=num_points, length=length)


def laplacian(grid: SpatialGrid) -> np.ndarray:
    """Matrix of -d^2/dx^2 with Dirichlet walls: 3-point stencil, dense."""
    n, h = grid.num_points, grid.spacing
    main = np.full(n, 2.0 / h**2)
    off = np.full(n - 1, -1.0 / h**2)
    return np.diag(main) + np.diag(off, 1) + np.diag(off, -1)


@dataclass(frozen=True)
class SpectralBasis:
    """Eigenpairs of a positive symmetric lattice operator.

    Columns of `vectors` are orthonormal in the h-weighted inner product;
    eigenvalues are sorted ascending and strictly positive.
    """

    grid: SpatialGrid
    eigenvalues: np.ndarray
    vectors: np.ndarray  # (N, N), column n is the n-th mode

    @property
    def size(self) -> int:
        return self.eigenvalues.size

    def analyze(self, u: np.ndarray) -> np.ndarray:
        """Mode coefficients c_n = <v_n, u>_h of a lattice field."""
        return self.grid.spacing * (self.vectors.T @ u)

    def synthesize(self, coeffs: np.ndarray) -> np.ndarray:
        """Lattice field sum_n c_n v_n. Inverse of analyze."""
        return self.vectors @ coeffs

    def reconstruct_operator(self) -> np.ndarray:
        """Reassemble the operator as h * V diag(lambda) V^T."""
        return self.grid.spacing * (
            self.vectors @ (self.eigenvalues[:, None] * self.vectors.T)
        )


def spectral_decompose(op: np.ndarray, grid: SpatialGrid) -> SpectralBasis:
    """Diagonalize a symmetric positive lattice operator.

    Raises ValueError if the matrix is not symmetric or any eigenvalue is
    nonpositive (for the Dirichlet Laplacian that signals a broken boundary
    treatment).
    """
    op = np.asarray(op, dtype=float)
    if op.shape != (grid.num_points, grid.num_points):
        raise ValueError("operator shape does not match the grid")
    if not np.allclose(op, op.T, rtol=0.0, atol=1e-12 * max(1.0, np.abs(op).max())):
        raise ValueError("operator must be symmetric")
    evals, vecs = np.linalg.eigh(op)
    if np.any(evals <= 0.0):
        raise ValueError("operator has a nonpositive eigenvalue")
    # eigh returns unit Euclidean columns; rescale to h-weighted norm 1.
    vecs = vecs / np.sqrt(grid.spacing)
    return SpectralBasis(grid=grid, eigenvalues=evals, vectors=vecs)


def dirichlet_basis(num_points: int, length: float) -> SpectralBasis:
    """Grid + Laplacian + diagonalization in one step."""
    grid = build_grid(num_points, length)
    return spectral_decompose(laplacian(grid), grid)


def omega(eigenvalue: float | np.ndarray, mass: float) -> float | np.ndarray:
    """Dispersion omega = sqrt(lambda + m^2); rejects the zero mode."""
    lam = np.asarray(eigenvalue, dtype=float)
    if np.any(lam + mass**2 <= 0.0):
        raise ValueError("omega requires lambda + m^2 > 0")
    out = np.sqrt(lam + mass**2)
    return float(out) if out.ndim == 0 else out
