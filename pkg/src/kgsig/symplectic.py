"""Symplectic pairing of Cauchy data and the causal sesquilinear form.

sigma(a, b) = i * h * sum_x [conj(a.pi) b.phi + conj(a.phi) b.pi]

is sesquilinear (conjugate-linear on the left) and skew in the sense
sigma(a, b) = -conj(sigma(b, a)). The causal form pairs a source f against
the causally propagated field of g and, in the continuum, coincides with the
symplectic pairing of the two propagated solutions.
"""

from __future__ import annotations

import numpy as np

from .dynamics import (
    CauchyDatum,
    SpacetimeTestFunction,
    causal_field,
    causal_fundamental,
    simpson_weights,
)
from .lattice import SpatialGrid


def symplectic(a: CauchyDatum, b: CauchyDatum, grid: SpatialGrid) -> complex:
    if a.phi.size != grid.num_points or b.phi.size != grid.num_points:
        raise ValueError("data do not live on this grid")
    return 1j * grid.spacing * np.sum(np.conj(a.pi) * b.phi + np.conj(a.phi) * b.pi)


def gm_form(f: SpacetimeTestFunction, g: SpacetimeTestFunction, mass: float) -> complex:
    """Spacetime quadrature of conj(f) * (causal field of g).

    Evaluated with the cumulative-Duhamel spacetime field, so it shares no
    quadrature route with `causal_fundamental`; comparing against
    symplectic(causal_fundamental(f), causal_fundamental(g)) is a genuine
    two-sided consistency check.
    """
    if f.basis is not g.basis and f.basis.size != g.basis.size:
        raise ValueError("sources must share a basis")
    if f.times.shape != g.times.shape or not np.allclose(f.times, g.times):
        raise ValueError("sources must share a time window")
    u = causal_field(g, mass)
    quad = simpson_weights(f.times)
    h = f.basis.grid.spacing
    per_node = h * np.sum(np.conj(f.values) * u.values, axis=1)
    return complex(np.sum(quad * per_node))


def gm_symplectic_side(
    f: SpacetimeTestFunction, g: SpacetimeTestFunction, mass: float
) -> complex:
    """sigma(G f, G g) evaluated on the t = 0 causal data."""
    a = causal_fundamental(f, mass)
    b = causal_fundamental(g, mass)
    return symplectic(a, b, f.basis.grid)
