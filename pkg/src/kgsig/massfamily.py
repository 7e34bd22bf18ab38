"""Mass families of lattice solutions and the spacetime pairing over masses.

A family assigns to each mass node m_q the homogeneous solution with Cauchy
data (node scalar) * (base datum), where the node scalars are the values of a
smooth compactly supported mass weight (times m_q^k after k applications of
the mass operator T). The map p integrates the scalar field of the family
over mass against the measure m dm (Gauss-Legendre nodes), and the physical
inner product pairs p-images in L^2 over spacetime: Simpson in time on
[-T, T] with T doubled until the increment falls below tolerance.

Two quadrature choices matter and are deliberate:

* Mass nodes live on the support of the weight. The integrand vanishes
  identically outside the support, so this equals the integral over any
  enclosing mass interval, and it is the only placement that stays accurate
  when the weight is a narrow localization bump.
* Tail stages of the adaptive time loop refresh the Gauss-Legendre rule with
  a node count proportional to (omega spread) * T. A fixed rule aliases the
  mass oscillation exp(i omega(m) t) once the total phase swing exceeds what
  the nodes resolve, turning increments into noise that never converges.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .dynamics import CauchyDatum, mode_data, simpson_weights, time_window
from .lattice import SpectralBasis
from .random_fields import bump

MASS_NODES_DEFAULT = 200
T_MAX_DEFAULT = 200.0
TOL_DEFAULT = 1e-6
T_CEILING_DEFAULT = 51200.0
_CHUNK_BUDGET = 4_000_000  # elements per phase-matrix block


class ConvergenceError(RuntimeError):
    """Adaptive time doubling hit the ceiling before meeting tolerance."""


@dataclass(frozen=True)
class MassInterval:
    """Open mass interval I = (m_lo, m_hi) with 0 outside its closure."""

    m_lo: float
    m_hi: float

    def __post_init__(self) -> None:
        if not self.m_lo > 0.0:
            raise ValueError(
                "mass interval must satisfy 0 ∉ Ī (need m_lo > 0)"
            )
        if not self.m_hi > self.m_lo:
            raise ValueError("mass interval needs m_lo < m_hi")


@dataclass(frozen=True)
class MassWeight:
    """Smooth bump on [center - half_width, center + half_width].

    Carries its own Gauss-Legendre rule on the support; `values` are the
    bump samples at the nodes.
    """

    center: float
    half_width: float
    nodes: np.ndarray
    quad: np.ndarray
    values: np.ndarray

    def profile(self, m: np.ndarray) -> np.ndarray:
        return bump((np.asarray(m, dtype=float) - self.center) / self.half_width)

    def refined_rule(self, num_nodes: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(nodes, quad, values) of a finer rule on the same support."""
        x, w = np.polynomial.legendre.leggauss(num_nodes)
        return self.center + self.half_width * x, self.half_width * w, bump(x)

    def mass_moment(self, power: int = 1, squared: bool = False) -> float:
        """Integral of w(m) (or w(m)^2) times m^power over the support."""
        vals = self.values**2 if squared else self.values
        return float(np.sum(self.quad * vals * self.nodes**power))


def bump_weight(
    center: float, half_width: float, num_nodes: int = MASS_NODES_DEFAULT
) -> MassWeight:
    if not half_width > 0.0 or num_nodes < 2:
        raise ValueError("weight needs positive half_width and >= 2 nodes")
    x, w = np.polynomial.legendre.leggauss(num_nodes)
    return MassWeight(
        center=center,
        half_width=half_width,
        nodes=center + half_width * x,
        quad=half_width * w,
        values=bump(x),
    )


def interval_weight(
    interval: MassInterval, num_nodes: int = MASS_NODES_DEFAULT
) -> MassWeight:
    """Bump spanning the whole mass interval."""
    center = 0.5 * (interval.m_lo + interval.m_hi)
    half_width = 0.5 * (interval.m_hi - interval.m_lo)
    return bump_weight(center, half_width, num_nodes)


@dataclass(frozen=True)
class MassFamily:
    """Base Cauchy datum smeared over a mass interval by a weight.

    node_scale holds w(m_q) * m_q^mass_power; mass_power counts applications
    of the mass multiplication operator so the scalars can be re-evaluated
    exactly on refined node sets.
    """

    base: CauchyDatum
    basis: SpectralBasis
    weight: MassWeight
    interval: MassInterval
    node_scale: np.ndarray
    mass_power: int = 0


def make_family(
    datum: CauchyDatum,
    basis: SpectralBasis,
    weight: MassWeight,
    interval: MassInterval,
) -> MassFamily:
    if datum.phi.size != basis.size:
        raise ValueError("datum does not live on the basis grid")
    lo, hi = weight.center - weight.half_width, weight.center + weight.half_width
    if lo < interval.m_lo - 1e-12 or hi > interval.m_hi + 1e-12:
        raise ValueError("weight support outside I")
    return MassFamily(
        base=datum,
        basis=basis,
        weight=weight,
        interval=interval,
        node_scale=weight.values.copy(),
    )


def apply_T(family: MassFamily) -> MassFamily:
    """Multiplication by the mass: (T phi)_m = m phi_m, exact at the nodes."""
    return replace(
        family,
        node_scale=family.node_scale * family.weight.nodes,
        mass_power=family.mass_power + 1,
    )


def integrate_p(family: MassFamily, t: float) -> np.ndarray:
    """Scalar field of the mass integral (p phi)(t, .) on the lattice."""
    lam = family.basis.eigenvalues
    om = np.sqrt(lam[:, None] + family.weight.nodes[None, :] ** 2)
    u = family.weight.quad * family.weight.nodes * family.node_scale
    coeffs = mode_data(family.base, family.basis)
    phase = om * t
    p_modes = (np.cos(phase) @ u) * coeffs[0] - 1j * ((np.sin(phase) / om) @ u) * coeffs[1]
    return family.basis.synthesize(p_modes)


@dataclass(frozen=True)
class ConvergenceReport:
    converged: bool
    final_t: float
    last_increment: float
    stages: int


def _stage_rules(
    families: list[MassFamily], t_end: float
) -> dict[int, tuple[np.ndarray, np.ndarray, np.ndarray]]:
    """Per-weight mass rule adequate for phase swings up to t_end.

    Gauss-Legendre with n nodes resolves exp(i K s) on [-1, 1] while
    K <~ 1.5 n; the swing here is half the omega spread times t_end, so
    n grows linearly in T with a safety margin.
    """
    lam_min = float(min(f.basis.eigenvalues[0] for f in families))
    rules: dict[int, tuple[np.ndarray, np.ndarray, np.ndarray]] = {}
    for fam in families:
        key = id(fam.weight)
        if key in rules:
            continue
        wgt = fam.weight
        lo = wgt.center - wgt.half_width
        hi = wgt.center + wgt.half_width
        spread = np.sqrt(lam_min + hi**2) - np.sqrt(lam_min + lo**2)
        needed = int(np.ceil(spread * t_end / 2.4)) + 32
        if needed <= wgt.nodes.size:
            rules[key] = (wgt.nodes, wgt.quad, wgt.values)
        else:
            rules[key] = wgt.refined_rule(needed)
    return rules


def _stage_gram(
    families: list[MassFamily],
    modes: list[np.ndarray],
    active: np.ndarray,
    t_lo: float,
    t_hi: float,
    dt: float,
) -> np.ndarray:
    """Simpson contribution of [t_lo, t_hi]; if t_lo > 0 the mirrored
    segment [-t_hi, -t_lo] is included as well."""
    n_fam = len(families)
    basis = families[0].basis
    lam = basis.eigenvalues
    times = time_window(t_lo, t_hi, dt)
    quad = simpson_weights(times)
    mirror = not np.isclose(t_lo, -t_hi)
    rules = _stage_rules(families, max(abs(t_lo), abs(t_hi)))
    omegas = {
        key: np.sqrt(lam[:, None] + nodes[None, :] ** 2)
        for key, (nodes, _, _) in rules.items()
    }
    u_vecs = []
    for fam in families:
        nodes, qw, vals = rules[id(fam.weight)]
        u_vecs.append(qw * nodes * vals * nodes**fam.mass_power)
    q_max = max(nodes.size for nodes, _, _ in rules.values())
    chunk = max(256, _CHUNK_BUDGET // q_max)

    out = np.zeros((n_fam, n_fam), dtype=complex)
    for n in range(basis.size):
        idx = np.flatnonzero(active[:, n])
        if idx.size == 0:
            continue
        for start in range(0, times.size, chunk):
            t_blk = times[start : start + chunk]
            q_blk = quad[start : start + chunk]
            series = np.empty((t_blk.size, idx.size), dtype=complex)
            series_m = np.empty_like(series) if mirror else None
            trig: dict[int, tuple[np.ndarray, np.ndarray]] = {}
            matvec: dict[tuple[int, int], tuple[np.ndarray, np.ndarray]] = {}
            for col, fi in enumerate(idx):
                key = id(families[fi].weight)
                mv_key = (key, families[fi].mass_power)
                if mv_key not in matvec:
                    if key not in trig:
                        om_row = omegas[key][n]
                        phase = np.outer(t_blk, om_row)
                        trig[key] = (np.cos(phase), np.sin(phase) / om_row[None, :])
                    cos_m, sin_m = trig[key]
                    matvec[mv_key] = (cos_m @ u_vecs[fi], sin_m @ u_vecs[fi])
                cos_u, sin_u = matvec[mv_key]
                phi_n, pi_n = modes[fi][0, n], modes[fi][1, n]
                series[:, col] = phi_n * cos_u - 1j * pi_n * sin_u
                if mirror:
                    series_m[:, col] = phi_n * cos_u + 1j * pi_n * sin_u
            out_idx = np.ix_(idx, idx)
            out[out_idx] += series.conj().T @ (q_blk[:, None] * series)
            if mirror:
                out[out_idx] += series_m.conj().T @ (q_blk[:, None] * series_m)
    return out


def spacetime_gram(
    families: list[MassFamily],
    dt: float = 0.05,
    t_max: float = T_MAX_DEFAULT,
    tol: float = TOL_DEFAULT,
    t_ceiling: float = T_CEILING_DEFAULT,
) -> tuple[np.ndarray, ConvergenceReport]:
    """Matrix of spacetime inner products <p a_i | p a_j> over [-T, T].

    T doubles from t_max until the largest entrywise increment drops below
    tol (absolute); exceeding t_ceiling raises ConvergenceError. The result
    is Hermitian positive semidefinite by construction.
    """
    if not families:
        raise ValueError("no families given")
    basis = families[0].basis
    for fam in families:
        if fam.basis is not basis:
            raise ValueError("families must share one spectral basis")
    modes = [mode_data(f.base, f.basis) for f in families]
    active = np.stack([np.abs(c).sum(axis=0) > 0.0 for c in modes])

    total = _stage_gram(families, modes, active, -t_max, t_max, dt)
    t_cur, stages = t_max, 1
    while True:
        inc = _stage_gram(families, modes, active, t_cur, 2 * t_cur, dt)
        total += inc
        t_cur *= 2
        stages += 1
        worst = float(np.abs(inc).max())
        if worst < tol:
            return total, ConvergenceReport(
                converged=True, final_t=t_cur, last_increment=worst, stages=stages
            )
        if 2 * t_cur > t_ceiling:
            raise ConvergenceError(
                f"spacetime pairing did not converge by T = {t_cur:g} "
                f"(last increment {worst:.3e}, tol {tol:g})"
            )


def spacetime_inner(
    a: MassFamily,
    b: MassFamily,
    dt: float = 0.05,
    t_max: float = T_MAX_DEFAULT,
    tol: float = TOL_DEFAULT,
    t_ceiling: float = T_CEILING_DEFAULT,
) -> tuple[complex, ConvergenceReport]:
    """<p a | p b> over spacetime, conjugate-linear in the first argument."""
    gram, report = spacetime_gram(
        [a, b], dt=dt, t_max=t_max, tol=tol, t_ceiling=t_ceiling
    )
    return complex(gram[0, 1]), report
