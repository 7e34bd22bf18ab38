import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kgsig.lattice import (
    build_grid,
    dirichlet_basis,
    laplacian,
    omega,
    spectral_decompose,
)


def test_grid_spacing_and_points():
    grid = build_grid(4, 5.0)
    assert grid.spacing == pytest.approx(1.0)
    grid2 = build_grid(2, 3.0)
    assert grid2.points == pytest.approx([1.0, 2.0])
    grid3 = build_grid(64, 10.0)
    assert grid3.spacing == pytest.approx(10.0 / 65.0)


def test_grid_rejects_bad_sizes():
    with pytest.raises(ValueError):
        build_grid(0, 1.0)
    with pytest.raises(ValueError):
        build_grid(4, -2.0)


def test_laplacian_stencil_n2():
    grid = build_grid(2, 3.0)  # h = 1
    expected = np.array([[2.0, -1.0], [-1.0, 2.0]])
    assert laplacian(grid) == pytest.approx(expected)


def test_eigenpairs_n2_hand_values():
    # Frozen oracle: for N=2, h=1 the eigenvalues are {1, 3} and the
    # h-normalized eigenvectors are (1, 1)/sqrt(2h) and (1, -1)/sqrt(2h).
    basis = dirichlet_basis(2, 3.0)
    assert basis.eigenvalues == pytest.approx([1.0, 3.0], abs=1e-12)
    v0 = basis.vectors[:, 0] * np.sign(basis.vectors[0, 0])
    v1 = basis.vectors[:, 1] * np.sign(basis.vectors[0, 1])
    assert v0 == pytest.approx(np.array([1.0, 1.0]) / np.sqrt(2.0), abs=1e-12)
    assert v1 == pytest.approx(np.array([1.0, -1.0]) / np.sqrt(2.0), abs=1e-12)


def test_eigenpairs_match_closed_form_sine_modes():
    # Independent oracle: analytic Dirichlet eigenpairs of the 3-point stencil.
    n, length = 16, 10.0
    basis = dirichlet_basis(n, length)
    h = basis.grid.spacing
    j = np.arange(1, n + 1)
    lam_exact = (4.0 / h**2) * np.sin(j * np.pi / (2 * (n + 1))) ** 2
    assert basis.eigenvalues == pytest.approx(lam_exact, rel=1e-13)
    for k in range(n):
        vec = np.sin((k + 1) * np.pi * j / (n + 1))
        vec /= np.sqrt(basis.grid.inner(vec, vec).real)
        got = basis.vectors[:, k]
        sign = np.sign(np.dot(vec, got))
        assert got == pytest.approx(sign * vec, abs=1e-12)


def test_orthonormality_and_completeness():
    basis = dirichlet_basis(24, 7.0)
    h = basis.grid.spacing
    gram = h * basis.vectors.T @ basis.vectors
    assert gram == pytest.approx(np.eye(24), abs=1e-12)
    rng = np.random.default_rng(7)
    u = rng.normal(size=24) + 1j * rng.normal(size=24)
    assert basis.synthesize(basis.analyze(u)) == pytest.approx(u, rel=1e-10)


def test_operator_reconstruction():
    grid = build_grid(12, 4.0)
    op = laplacian(grid)
    basis = spectral_decompose(op, grid)
    assert basis.reconstruct_operator() == pytest.approx(op, rel=1e-10)


def test_residual_per_eigenpair():
    grid = build_grid(32, 10.0)
    op = laplacian(grid)
    basis = spectral_decompose(op, grid)
    for k in range(basis.size):
        v = basis.vectors[:, k]
        res = op @ v - basis.eigenvalues[k] * v
        assert np.linalg.norm(res) <= 1e-10 * basis.eigenvalues[k] * np.linalg.norm(v)


def test_scaled_identity_decomposition():
    grid = build_grid(6, 2.0)
    basis = spectral_decompose(2.5 * np.eye(6), grid)
    assert basis.eigenvalues == pytest.approx(np.full(6, 2.5))


def test_decompose_rejects_asymmetric_and_nonpositive():
    grid = build_grid(3, 2.0)
    bad = np.array([[2.0, 1.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, 2.0]])
    with pytest.raises(ValueError, match="symmetric"):
        spectral_decompose(bad, grid)
    with pytest.raises(ValueError, match="nonpositive"):
        spectral_decompose(-np.eye(3), grid)


def test_lowest_eigenvalue_monotone_toward_continuum():
    # For fixed L the smallest eigenvalue increases with N toward (pi/L)^2.
    length = 10.0
    target = (np.pi / length) ** 2
    lows = [dirichlet_basis(n, length).eigenvalues[0] for n in (16, 32, 64, 128)]
    assert all(a < b for a, b in zip(lows, lows[1:]))
    assert all(lo < target for lo in lows)
    assert lows[-1] == pytest.approx(target, rel=1e-3)


def test_omega_values_and_zero_mode_rejection():
    assert omega(3.0, 1.0) == pytest.approx(2.0)
    assert omega(np.array([1.0, 3.0]), 0.0) == pytest.approx([1.0, np.sqrt(3.0)])
    with pytest.raises(ValueError):
        omega(0.0, 0.0)


@settings(max_examples=60, deadline=None)
@given(
    lam=st.floats(min_value=1e-6, max_value=1e4),
    m=st.floats(min_value=0.0, max_value=100.0),
)
def test_omega_dominates_mass_and_momentum(lam, m):
    w = omega(lam, m)
    assert w >= m
    assert w >= np.sqrt(lam)
    assert w == pytest.approx(np.hypot(np.sqrt(lam), m), rel=1e-12)
