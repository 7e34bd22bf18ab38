"""Hamiltonian Klein-Gordon dynamics on the lattice.

State variables are pairs Phi = (phi, pi) with pi = i * dphi/dt, evolving by
i dPhi/dt = H Phi. Per spectral mode the propagator is the exact 2x2 rotation

    U_n(t) = [[cos(w t), -i sin(w t)/w], [-i w sin(w t), cos(w t)]],

with w = sqrt(lambda_n + m^2), so there is no time-stepping error anywhere in
the homogeneous evolution. Retarded/advanced Green's operators integrate the
Duhamel formula mode-wise with composite Simpson quadrature in time.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .lattice import SpectralBasis, omega

DT_DEFAULT = 0.05


@dataclass(frozen=True)
class CauchyDatum:
    """Instantaneous field data (phi, pi) on the lattice, pi = i*dphi/dt."""

    phi: np.ndarray
    pi: np.ndarray

    def __post_init__(self) -> None:
        phi = np.asarray(self.phi, dtype=complex)
        pi = np.asarray(self.pi, dtype=complex)
        if phi.shape != pi.shape or phi.ndim != 1:
            raise ValueError("phi and pi must be 1-d arrays of equal length")
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "pi", pi)

    def __add__(self, other: "CauchyDatum") -> "CauchyDatum":
        return CauchyDatum(self.phi + other.phi, self.pi + other.pi)

    def __sub__(self, other: "CauchyDatum") -> "CauchyDatum":
        return CauchyDatum(self.phi - other.phi, self.pi - other.pi)

    def __mul__(self, c: complex) -> "CauchyDatum":
        return CauchyDatum(c * self.phi, c * self.pi)

    __rmul__ = __mul__


def mode_data(datum: CauchyDatum, basis: SpectralBasis) -> np.ndarray:
    """Stack of mode coefficients, shape (2, N): rows are (phi_n, pi_n)."""
    return np.stack([basis.analyze(datum.phi), basis.analyze(datum.pi)])


def datum_from_modes(coeffs: np.ndarray, basis: SpectralBasis) -> CauchyDatum:
    return CauchyDatum(basis.synthesize(coeffs[0]), basis.synthesize(coeffs[1]))


def propagate(
    datum: CauchyDatum, t: float, mass: float, basis: SpectralBasis
) -> CauchyDatum:
    """Evolve Cauchy data by the exact spectral propagator."""
    w = omega(basis.eigenvalues, mass)  # rejects a zero mode
    c = mode_data(datum, basis)
    cos, sin = np.cos(w * t), np.sin(w * t)
    out = np.empty_like(c)
    out[0] = cos * c[0] - 1j * (sin / w) * c[1]
    out[1] = -1j * (w * sin) * c[0] + cos * c[1]
    return datum_from_modes(out, basis)


def time_window(t_min: float, t_max: float, dt: float = DT_DEFAULT) -> np.ndarray:
    """Uniform time nodes covering [t_min, t_max].

    The node count is forced odd (even interval count) so composite Simpson
    applies cleanly; dt is shrunk slightly if needed to fit.
    """
    if not t_max > t_min:
        raise ValueError("empty time window")
    steps = int(np.ceil((t_max - t_min) / dt))
    if steps % 2 == 1:
        steps += 1
    steps = max(steps, 2)
    return np.linspace(t_min, t_max, steps + 1)


def simpson_weights(times: np.ndarray) -> np.ndarray:
    """Composite Simpson weights for an odd-length uniform node set."""
    n = times.size
    if n < 3 or n % 2 == 0:
        raise ValueError("Simpson weights need an odd number of nodes (>= 3)")
    dt = times[1] - times[0]
    if not np.allclose(np.diff(times), dt, rtol=1e-9, atol=0.0):
        raise ValueError("time nodes must be uniform")
    w = np.ones(n)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w * (dt / 3.0)


@dataclass(frozen=True)
class SpacetimeField:
    """Complex scalar field sampled on (time node) x (lattice point)."""

    times: np.ndarray
    values: np.ndarray  # (J, N)
    basis: SpectralBasis

    def __post_init__(self) -> None:
        times = np.asarray(self.times, dtype=float)
        values = np.asarray(self.values, dtype=complex)
        if values.shape != (times.size, self.basis.size):
            raise ValueError("values must have shape (num_times, num_points)")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)

    @property
    def dt(self) -> float:
        return float(self.times[1] - self.times[0])

    def mode_values(self) -> np.ndarray:
        """Coefficients against the spectral basis, shape (J, N)."""
        return self.basis.grid.spacing * (self.values @ self.basis.vectors)

    def __mul__(self, c: complex) -> "SpacetimeField":
        return replace(self, values=self.values * c)

    __rmul__ = __mul__


@dataclass(frozen=True)
class SpacetimeTestFunction(SpacetimeField):
    """Smooth source supported strictly inside its time window.

    The first and last time node must carry (numerically) vanishing values;
    `support` flags the nodes where the function may be nonzero.
    """

    support: np.ndarray = None  # type: ignore[assignment]

    def __post_init__(self) -> None:
        super().__post_init__()
        simpson_weights(self.times)  # validates uniform odd-length node set
        scale = max(1.0, float(np.abs(self.values).max()))
        if (
            np.abs(self.values[0]).max() > 1e-12 * scale
            or np.abs(self.values[-1]).max() > 1e-12 * scale
        ):
            raise ValueError("window too small to contain the support of f")
        support = self.support
        if support is None:
            support = np.abs(self.values).max(axis=1) > 0.0
        support = np.asarray(support, dtype=bool)
        if support.shape != self.times.shape:
            raise ValueError("support mask must have one flag per time node")
        object.__setattr__(self, "support", support)


def cumulative_simpson_nodes(y: np.ndarray, dt: float) -> np.ndarray:
    """Running composite Simpson integral along axis 0 (odd node count).

    Even-indexed nodes accumulate full Simpson pairs; odd-indexed nodes add
    the exact integral of the local interpolating parabola over the trailing
    subinterval. Complex-safe (scipy's cumulative_simpson is not).
    """
    j = y.shape[0]
    if j < 3 or j % 2 == 0:
        raise ValueError("cumulative Simpson needs an odd number of nodes (>= 3)")
    out = np.zeros_like(y)
    pairs = (dt / 3.0) * (y[0:-2:2] + 4.0 * y[1:-1:2] + y[2::2])
    out[2::2] = np.cumsum(pairs, axis=0)
    out[1] = (dt / 12.0) * (5.0 * y[0] + 8.0 * y[1] - y[2])
    if j > 3:
        out[3::2] = out[2:-1:2] + (dt / 12.0) * (
            -y[1:-2:2] + 8.0 * y[2:-1:2] + 5.0 * y[3::2]
        )
    return out


def _oscillator_moments(
    f: SpacetimeTestFunction, mass: float
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Full-window Simpson integrals C_n = int cos(w t) f_n, S_n likewise."""
    basis = f.basis
    w = omega(basis.eigenvalues, mass)
    coeffs = f.mode_values()  # (J, N)
    phase = w[None, :] * f.times[:, None]
    quad = simpson_weights(f.times)
    cos_int = np.sum(quad[:, None] * np.cos(phase) * coeffs, axis=0)
    sin_int = np.sum(quad[:, None] * np.sin(phase) * coeffs, axis=0)
    return w, cos_int, sin_int


def _duhamel(
    f: SpacetimeTestFunction, mass: float, retarded: bool
) -> SpacetimeField:
    # sin(w(t - t')) = sin(wt)cos(wt') - cos(wt)sin(wt'): the running Duhamel
    # integrals reduce to cumulative Simpson of cos/sin-weighted coefficients.
    basis = f.basis
    w = omega(basis.eigenvalues, mass)
    coeffs = f.mode_values()
    phase = w[None, :] * f.times[:, None]
    cos_p, sin_p = np.cos(phase), np.sin(phase)
    dt = f.dt
    if retarded:
        ccum = cumulative_simpson_nodes(cos_p * coeffs, dt)
        scum = cumulative_simpson_nodes(sin_p * coeffs, dt)
        sol = (sin_p * ccum - cos_p * scum) / w[None, :]
    else:
        # integral over t' >= t of sin(w(t'-t))/w f(t'): anchored at the
        # future end of the window, so the cumulative pass runs backward.
        crev = cumulative_simpson_nodes((cos_p * coeffs)[::-1], dt)[::-1]
        srev = cumulative_simpson_nodes((sin_p * coeffs)[::-1], dt)[::-1]
        sol = (cos_p * srev - sin_p * crev) / w[None, :]
    values = sol @ basis.vectors.T
    return SpacetimeField(times=f.times, values=values, basis=basis)


def retarded_green(f: SpacetimeTestFunction, mass: float) -> SpacetimeField:
    """Solution of (d_t^2 - Lap + m^2) u = f supported toward the future."""
    return _duhamel(f, mass, retarded=True)


def advanced_green(f: SpacetimeTestFunction, mass: float) -> SpacetimeField:
    """Solution of the same equation supported toward the past."""
    return _duhamel(f, mass, retarded=False)


def causal_fundamental(f: SpacetimeTestFunction, mass: float) -> CauchyDatum:
    """Cauchy data at t = 0 of (retarded - advanced) applied to f.

    The difference is a homogeneous solution, so it is fixed by its t = 0
    data; those data have the closed mode-wise form
        phi_n(0) = -S_n / w_n,   pi_n(0) = i C_n,
    with C_n, S_n the full-window cos/sin moments of f. This route shares no
    quadrature with the cumulative Duhamel fields.
    """
    w, cos_int, sin_int = _oscillator_moments(f, mass)
    coeffs = np.stack([-sin_int / w, 1j * cos_int])
    return datum_from_modes(coeffs, f.basis)


def causal_field(f: SpacetimeTestFunction, mass: float) -> SpacetimeField:
    """Spacetime field of (retarded - advanced) f over f's window."""
    ret = retarded_green(f, mass)
    adv = advanced_green(f, mass)
    return SpacetimeField(times=f.times, values=ret.values - adv.values, basis=f.basis)


def kg_residual(u: SpacetimeField, f: SpacetimeTestFunction, mass: float) -> float:
    """Max norm of (D_t^2 - Lap + m^2) u - f over interior time nodes.

    D_t^2 is the central second difference; the Laplacian acts spectrally
    (lambda_n per mode), which is exact for the lattice operator.
    """
    coeffs = u.mode_values()
    src = f.mode_values()
    dt = u.dt
    d2 = (coeffs[2:] - 2.0 * coeffs[1:-1] + coeffs[:-2]) / dt**2
    w2 = u.basis.eigenvalues + mass**2
    res = d2 + w2[None, :] * coeffs[1:-1] - src[1:-1]
    # mode coefficients carry the h-weighted norm already (Parseval)
    return float(np.sqrt(np.sum(np.abs(res) ** 2, axis=1)).max())
