"""Signature operator of the Klein-Gordon scalar product at fixed mass.

The scalar product on Cauchy data pairs a with S b through the symplectic
form, <a|b> = i sigma(a, S b), where S acts per spectral mode by the 2x2
block -pi [[0, 1/omega], [omega, 0]]. The blocks square to pi^2, so the
spectrum is {-pi, +pi} with positive/negative frequency eigenspaces, |S| is
pi times the identity, and J = i S / pi is a complex structure.

The same operator is recovered numerically from the spacetime pairing of
mass families localized by a narrow weight (a Dirac-sequence limit): the
normalized pairings of per-mode unit data solve for the blocks, and the
deviation from the analytic form is O(half_width^2).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import CauchyDatum, datum_from_modes, mode_data
from .lattice import SpectralBasis, omega
from .massfamily import (
    ConvergenceReport,
    MassFamily,
    MassInterval,
    MassWeight,
    bump_weight,
    make_family,
    spacetime_gram,
)
from .symplectic import symplectic

_FLIP = np.array([[0.0, 1.0], [1.0, 0.0]])


@dataclass(frozen=True)
class SignatureOperator:
    """Per-mode 2x2 blocks acting on (phi_n, pi_n) mode coefficients."""

    mass: float
    basis: SpectralBasis
    blocks: np.ndarray  # (N, 2, 2) real

    @property
    def frequencies(self) -> np.ndarray:
        return omega(self.basis.eigenvalues, self.mass)


def signature_analytic(mass: float, basis: SpectralBasis) -> SignatureOperator:
    """Blocks -pi [[0, 1/omega_n], [omega_n, 0]]; needs omega_n > 0."""
    if mass < 0.0:
        raise ValueError("mass must be nonnegative")
    om = omega(basis.eigenvalues, mass)
    n = basis.size
    blocks = np.zeros((n, 2, 2))
    blocks[:, 0, 1] = -np.pi / om
    blocks[:, 1, 0] = -np.pi * om
    return SignatureOperator(mass=mass, basis=basis, blocks=blocks)


def apply_signature(sig: SignatureOperator, datum: CauchyDatum) -> CauchyDatum:
    coeffs = mode_data(datum, sig.basis)
    out = np.einsum("nij,jn->in", sig.blocks, coeffs)
    return datum_from_modes(out, sig.basis)


def scalar_product(
    sig: SignatureOperator, a: CauchyDatum, b: CauchyDatum
) -> complex:
    """<a|b> = i sigma(a, S b); positive definite for the analytic blocks."""
    return 1j * symplectic(a, apply_signature(sig, b), sig.basis.grid)


def assemble(sig: SignatureOperator) -> np.ndarray:
    """Dense matrix on interleaved mode coefficients (phi_1, pi_1, ...)."""
    n = sig.basis.size
    full = np.zeros((2 * n, 2 * n))
    for k in range(n):
        full[2 * k : 2 * k + 2, 2 * k : 2 * k + 2] = sig.blocks[k]
    return full


def signature_spectrum(sig: SignatureOperator) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition in the scalar-product geometry.

    The metric diag(omega, 1/omega) per mode symmetrizes the blocks, so a
    symmetric solver applies; eigenvectors are mapped back to plain mode
    coordinates. Returns (eigenvalues (2N,), vectors (2N, 2N) columnwise),
    ordered per mode.
    """
    om = sig.frequencies
    n = sig.basis.size
    vals = np.empty(2 * n)
    vecs = np.zeros((2 * n, 2 * n))
    for k in range(n):
        scale = np.array([np.sqrt(om[k]), 1.0 / np.sqrt(om[k])])
        sym = scale[:, None] * sig.blocks[k] * (1.0 / scale)[None, :]
        w, v = np.linalg.eigh(0.5 * (sym + sym.T))
        vals[2 * k : 2 * k + 2] = w
        back = v / scale[:, None]
        vecs[2 * k : 2 * k + 2, 2 * k : 2 * k + 2] = back / np.linalg.norm(
            back, axis=0, keepdims=True
        )
    return vals, vecs


def complex_structure(sig: SignatureOperator) -> np.ndarray:
    """J = i |S|^-1 S as (N, 2, 2) complex blocks; |S| = pi Id, J^2 = -Id."""
    square = np.einsum("nij,njk->nik", sig.blocks, sig.blocks)
    ident = np.broadcast_to(np.eye(2), square.shape)
    if not np.allclose(square, np.pi**2 * ident, rtol=1e-12, atol=1e-12):
        raise ValueError("blocks do not square to pi^2; operator not invertible")
    return 1j * sig.blocks / np.pi


def projectors(j_blocks: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Complementary idempotents (1 -+ iJ)/2; the first annihilates
    positive-frequency modes (1, omega), the second the (1, -omega) ones."""
    square = np.einsum("nij,njk->nik", j_blocks, j_blocks)
    ident = np.broadcast_to(np.eye(2), square.shape)
    if not np.allclose(square, -ident, rtol=1e-12, atol=1e-12):
        raise ValueError("complex structure does not square to -Id")
    hol = 0.5 * (ident - 1j * j_blocks)
    return hol, ident - hol


def sobolev_scale(basis: SpectralBasis) -> np.ndarray:
    """Mode weights sqrt(1 + lambda_n): field component measured in the
    first Sobolev norm, momentum in the plain one. This mass-independent
    metric keeps the high-mode tail of operator differences comparable to
    the per-mode decay bounds."""
    return np.sqrt(1.0 + basis.eigenvalues)


def operator_distance(a: SignatureOperator, b: SignatureOperator) -> float:
    """Operator norm of a - b in the Sobolev-weighted mode metric."""
    return float(per_mode_distance(a, b).max())


def per_mode_distance(a: SignatureOperator, b: SignatureOperator) -> np.ndarray:
    if a.basis is not b.basis:
        raise ValueError("operators live on different bases")
    scale = sobolev_scale(a.basis)
    diff = a.blocks - b.blocks
    out = np.empty(a.basis.size)
    for k in range(a.basis.size):
        weighted = np.diag([scale[k], 1.0]) @ diff[k] @ np.diag([1.0 / scale[k], 1.0])
        out[k] = np.linalg.norm(weighted, 2)
    return out


@dataclass(frozen=True)
class MasslessTable:
    """Convergence table of ||S_m - S_0|| against the per-mode bounds."""

    masses: np.ndarray
    norms: np.ndarray  # (M,)
    bounds: np.ndarray  # (M,) max over modes of the per-mode bound
    mode_norms: np.ndarray  # (M, N)
    mode_bounds: np.ndarray  # (M, N)


def massless_bound(basis: SpectralBasis, mass: float) -> np.ndarray:
    """Per-mode bound pi m^2 max(1/(k^2 omega), 1/(k (k + omega)))."""
    k = np.sqrt(basis.eigenvalues)
    om = omega(basis.eigenvalues, mass)
    return np.pi * mass**2 * np.maximum(1.0 / (k**2 * om), 1.0 / (k * (k + om)))


def massless_limit(
    basis: SpectralBasis, masses: tuple[float, ...] = (1.0, 0.5, 0.25, 0.125)
) -> tuple[SignatureOperator, MasslessTable]:
    """Limit operator at m = 0 plus the norm-convergence table.

    Requires strictly positive spectrum (no zero mode) and a decreasing
    sequence of positive masses.
    """
    arr = np.asarray(masses, dtype=float)
    if arr.size == 0 or np.any(arr <= 0.0) or np.any(np.diff(arr) >= 0.0):
        raise ValueError("need a strictly decreasing sequence of positive masses")
    if basis.eigenvalues[0] <= 0.0:
        raise ValueError("zero mode present; massless operator undefined")
    limit = signature_analytic(0.0, basis)
    mode_norms = np.empty((arr.size, basis.size))
    mode_bounds = np.empty_like(mode_norms)
    for i, m in enumerate(arr):
        mode_norms[i] = per_mode_distance(signature_analytic(m, basis), limit)
        mode_bounds[i] = massless_bound(basis, m)
    return limit, MasslessTable(
        masses=arr,
        norms=mode_norms.max(axis=1),
        bounds=mode_bounds.max(axis=1),
        mode_norms=mode_norms,
        mode_bounds=mode_bounds,
    )


def riesz_inverse(sig: SignatureOperator) -> SignatureOperator:
    """Inverse via S^2 = pi^2: S^-1 = S / pi^2."""
    square = np.einsum("nij,njk->nik", sig.blocks, sig.blocks)
    ident = np.broadcast_to(np.eye(2), square.shape)
    if not np.allclose(square, np.pi**2 * ident, rtol=1e-12, atol=1e-12):
        raise ValueError("blocks do not square to pi^2; operator not invertible")
    return SignatureOperator(
        mass=sig.mass, basis=sig.basis, blocks=sig.blocks / np.pi**2
    )


def riesz_consistency(
    sig: SignatureOperator, a: CauchyDatum, b: CauchyDatum
) -> complex:
    """Measured ratio sigma(a, b) / <a | S^-1 b>.

    Chaining the definitions gives <a|S^-1 b> = i sigma(a, b), so the ratio
    is the constant -i; it is measured rather than assumed so the factor-i
    bookkeeping between the two pairings stays visible.
    """
    inv = riesz_inverse(sig)
    denom = scalar_product(sig, a, apply_signature(inv, b))
    return symplectic(a, b, sig.basis.grid) / denom


def mass_decomposition_pairing(fa: MassFamily, fb: MassFamily) -> complex:
    """Mass-integral side of the decomposition identity.

    Evaluates the weighted integral of the fixed-mass scalar products,
    int scale_a(m) scale_b(m) <a|b>_m m dm, on the weight's base rule. The
    spacetime pairing of the same two families converges to this value as
    the time window grows.
    """
    if fa.basis is not fb.basis:
        raise ValueError("families must share one spectral basis")
    if fa.weight is not fb.weight:
        raise ValueError("families must share one mass weight")
    wq = fa.weight
    lam = fa.basis.eigenvalues
    ca, cb = mode_data(fa.base, fa.basis), mode_data(fb.base, fb.basis)
    om = np.sqrt(lam[:, None] + wq.nodes[None, :] ** 2)
    per_mass = np.pi * (
        om.T @ (np.conj(ca[0]) * cb[0]) + (1.0 / om.T) @ (np.conj(ca[1]) * cb[1])
    )
    u = wq.quad * wq.nodes * fa.node_scale * fb.node_scale
    return complex(np.sum(u * per_mass))


@dataclass(frozen=True)
class ReconstructionReport:
    hermiticity_defect: float
    imag_defect: float
    normalization: float
    convergence: ConvergenceReport


def signature_reconstruct(
    mass: float,
    basis: SpectralBasis,
    half_width: float,
    tol: float = 1e-3,
    interval: MassInterval | None = None,
    num_nodes: int = 200,
    dt: float = 0.05,
    t_max: float = 200.0,
    t_ceiling: float = 51200.0,
) -> tuple[SignatureOperator, ReconstructionReport]:
    """Recover the signature blocks from the spacetime pairing.

    Builds, for every mode, the two unit data (v_n, 0) and (0, v_n) smeared
    by a weight of the given half_width centered at the mass, pairs them
    over spacetime, divides by the weight normalization int w^2 m' dm', and
    solves i sigma(e_i, S e_j) = P_ij for the blocks. The deviation from the
    analytic operator is O(half_width^2) once the adaptive time window has
    converged; the internal window tolerance is scaled below the requested
    block tolerance so truncation stays subdominant to localization.
    """
    if not mass - half_width > 0.0:
        raise ValueError("weight support must stay at positive mass")
    if (half_width / mass) ** 2 > 25.0 * tol:
        raise ValueError("half-width too large for the requested tolerance")
    if interval is None:
        interval = MassInterval(0.5 * (mass - half_width), mass + 2.0 * half_width)
    weight = bump_weight(mass, half_width, num_nodes)
    norm2 = weight.mass_moment(power=1, squared=True)

    n = basis.size
    families = []
    for k in range(n):
        v = basis.vectors[:, k]
        zero = np.zeros_like(v)
        families.append(
            make_family(CauchyDatum(phi=v, pi=zero), basis, weight, interval)
        )
        families.append(
            make_family(CauchyDatum(phi=zero, pi=v), basis, weight, interval)
        )
    gram, report = spacetime_gram(
        families,
        dt=dt,
        t_max=t_max,
        tol=tol * norm2 * 1e-2,
        t_ceiling=t_ceiling,
    )

    blocks = np.empty((n, 2, 2))
    herm_defect = 0.0
    imag_defect = 0.0
    for k in range(n):
        pair = gram[2 * k : 2 * k + 2, 2 * k : 2 * k + 2] / norm2
        herm_defect = max(herm_defect, float(np.abs(pair - pair.conj().T).max()))
        block = -_FLIP @ (0.5 * (pair + pair.conj().T))
        imag_defect = max(imag_defect, float(np.abs(block.imag).max()))
        blocks[k] = block.real
    return (
        SignatureOperator(mass=mass, basis=basis, blocks=blocks),
        ReconstructionReport(
            hermiticity_defect=herm_defect,
            imag_defect=imag_defect,
            normalization=norm2,
            convergence=report,
        ),
    )
