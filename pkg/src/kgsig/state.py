"""Projector state of the quantized field: two-point function and Wick rule.

The two-point function pairs causal solutions through the holomorphic
projector, omega2(f, g) = i sigma(G f, chi_hol G g). Its real part is a
positive semi-definite Gram form on test functions; the imaginary part is
half the symplectic pairing of the causal solutions, which encodes the
canonical commutation relations. Higher correlation functions follow from
the quasi-free (Wick) combinatorics: a sum over perfect matchings.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import (
    CauchyDatum,
    SpacetimeTestFunction,
    causal_fundamental,
    datum_from_modes,
    mode_data,
    time_window,
)
from .lattice import SpectralBasis
from .random_fields import random_test_function
from .signature import complex_structure, projectors, signature_analytic
from .symplectic import symplectic


@dataclass(frozen=True)
class TwoPointEvaluator:
    """Immutable bundle of the mass, basis, and holomorphic projector."""

    mass: float
    basis: SpectralBasis
    hol_blocks: np.ndarray  # (N, 2, 2) complex


def build_state(mass: float, basis: SpectralBasis) -> TwoPointEvaluator:
    sig = signature_analytic(mass, basis)
    hol, _ = projectors(complex_structure(sig))
    return TwoPointEvaluator(mass=mass, basis=basis, hol_blocks=hol)


def _project_hol(state: TwoPointEvaluator, datum: CauchyDatum) -> CauchyDatum:
    coeffs = mode_data(datum, state.basis)
    return datum_from_modes(
        np.einsum("nij,jn->in", state.hol_blocks, coeffs), state.basis
    )


def two_point(
    state: TwoPointEvaluator, f: SpacetimeTestFunction, g: SpacetimeTestFunction
) -> complex:
    """omega2(f, g) = i sigma(G f, chi_hol G g) evaluated at time zero."""
    if f.basis is not state.basis or g.basis is not state.basis:
        raise ValueError("test functions live on a different basis")
    gf = causal_fundamental(f, state.mass)
    gg = causal_fundamental(g, state.mass)
    return 1j * symplectic(gf, _project_hol(state, gg), state.basis.grid)


def pair_matchings(count: int) -> list[list[tuple[int, int]]]:
    """Perfect matchings of range(count) in canonical order.

    The smallest unmatched index opens each pair, so every matching lists
    pairs (i, j) with i < j and increasing first members; there are
    (count - 1)!! of them.
    """
    if count == 0:
        return [[]]
    if count % 2:
        raise ValueError("perfect matchings need an even count")
    items = list(range(count))

    def recurse(rest: list[int]) -> list[list[tuple[int, int]]]:
        if not rest:
            return [[]]
        first, tail = rest[0], rest[1:]
        out = []
        for k, partner in enumerate(tail):
            for sub in recurse(tail[:k] + tail[k + 1 :]):
                out.append([(first, partner)] + sub)
        return out

    return recurse(items)


def wick_n_point(
    state: TwoPointEvaluator, fs: list[SpacetimeTestFunction]
) -> complex:
    """Quasi-free n-point function: sum over pairings of two-point factors.

    Odd argument counts vanish identically and return exactly 0; more than
    eight arguments (105 pairings) are rejected.
    """
    if len(fs) % 2:
        return 0j
    n = len(fs) // 2
    if n > 4:
        raise ValueError("more than 8 arguments; pairing count grows as (2n-1)!!")
    if n == 0:
        return 1 + 0j
    cache: dict[tuple[int, int], complex] = {}

    def pair_value(i: int, j: int) -> complex:
        if (i, j) not in cache:
            cache[(i, j)] = two_point(state, fs[i], fs[j])
        return cache[(i, j)]

    total = 0j
    for matching in pair_matchings(len(fs)):
        term = 1 + 0j
        for i, j in matching:
            term *= pair_value(i, j)
        total += term
    return total


@dataclass(frozen=True)
class PositivityReport:
    gram: np.ndarray
    min_eigenvalue: float
    hermiticity_defect: float
    diag_imag_max: float


def state_positivity_suite(
    state: TwoPointEvaluator,
    seed: int = 0,
    trials: int = 20,
    t_span: float = 6.0,
    dt: float = 0.05,
) -> PositivityReport:
    """Gram matrix of omega2 over random real test functions.

    Positive semi-definiteness of the Gram is the one-particle content of
    state positivity: for a = sum c_i f_i the expectation of a* a is
    c^dagger Gram c.
    """
    rng = np.random.default_rng(seed)
    times = time_window(-t_span / 2, t_span / 2, dt)
    funcs = [
        random_test_function(rng, state.basis, times, real=True)
        for _ in range(trials)
    ]
    gram = np.empty((trials, trials), dtype=complex)
    for i in range(trials):
        for j in range(i, trials):
            gram[i, j] = two_point(state, funcs[i], funcs[j])
            if j > i:
                gram[j, i] = two_point(state, funcs[j], funcs[i])
    defect = float(np.abs(gram - gram.conj().T).max())
    eigs = np.linalg.eigvalsh(0.5 * (gram + gram.conj().T))
    return PositivityReport(
        gram=gram,
        min_eigenvalue=float(eigs.min()),
        hermiticity_defect=defect,
        diag_imag_max=float(np.abs(np.diag(gram).imag).max()),
    )
