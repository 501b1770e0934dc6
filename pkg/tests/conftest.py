"""Shared builders and exact pairing oracles for the test suite."""

from __future__ import annotations

import math

import numpy as np
import pytest

from lawruk import (BoundaryOperator, DiskProblem, InteriorCollarOperator,
                    ModeSequence, PointSymbolProblem, compose)

TWO_PI = 2.0 * math.pi


def disk_model(band_limit: int = 64) -> DiskProblem:
    """The worked model: d_nu u + v = g1, d_nu^2 u + d_G v = g2."""
    return DiskProblem(
        kappa=1,
        B=(BoundaryOperator.from_partial({(1, 0): 1.0}),
           BoundaryOperator.from_partial({(2, 0): 1.0})),
        C=((BoundaryOperator.from_partial({(0, 0): 1.0}),),
           (BoundaryOperator.from_partial({(0, 1): 1.0}),)),
        m_orders=(1, 2),
        r_orders=(-1,),
        band_limit=band_limit,
    )


def minus_i_zeta_power(n: int) -> list[complex]:
    """Ascending coefficients of (-i zeta)^n."""
    coeffs = [0j] * (n + 1)
    coeffs[n] = (-1j) ** n
    return coeffs


def second_order_point_problem(p: int, orientation: int,
                               tau: float = 1.0) -> PointSymbolProblem:
    """Frozen symbols of the second-order model with one extra unknown:
    interior zeta^2 + tau^2, rows (-i zeta)^p and (-i zeta)^(p+1), extra
    column (1, -i * orientation * tau)."""
    a = [tau * tau, 0.0, 1.0]
    b = [minus_i_zeta_power(p), minus_i_zeta_power(p + 1)]
    c = [[1.0 + 0j], [-1j * orientation * tau]]
    return PointSymbolProblem(a, b, c, q=1, kappa=1)


def fourth_order_point_problem(p: int = 0) -> PointSymbolProblem:
    """Frozen symbols of the fourth-order model with two extra unknowns
    at a unit tangential covector: interior zeta^4 + gamma^2 with
    gamma = -1 (the tangential Laplacian symbol), four rows
    (-i zeta)^(p+j-1), extra columns pairing row 1 with unknown 1,
    row 2 with unknown 2, and gamma on rows 3 and 4."""
    gamma = -1.0
    a = [gamma * gamma, 0.0, 0.0, 0.0, 1.0]
    b = [minus_i_zeta_power(p + j) for j in range(4)]
    c = [[1.0, 0.0], [0.0, 1.0], [gamma, 0.0], [0.0, gamma]]
    return PointSymbolProblem(a, b, c, q=2, kappa=2)


def random_boundary_operator(rng: np.random.Generator, max_order: int,
                             tangential: bool = False) -> BoundaryOperator:
    """Random constant-coefficient operator of order <= max_order."""
    if max_order < 0:
        return BoundaryOperator.zero()
    terms = {}
    count = int(rng.integers(1, 4))
    for _ in range(count):
        total = int(rng.integers(0, max_order + 1))
        a = 0 if tangential else int(rng.integers(0, total + 1))
        b = total - a
        terms[(a, b)] = complex(*rng.standard_normal(2))
    return BoundaryOperator.from_partial(terms)


def random_disk_problem(rng: np.random.Generator, kappa_max: int = 3,
                        m_max: int = 6, band_limit: int = 32) -> DiskProblem:
    """Random admissible problem data (q = 1, declared orders consistent)."""
    kappa = int(rng.integers(1, kappa_max + 1))
    rows = 1 + kappa
    while True:
        m_orders = [int(x) for x in rng.integers(0, m_max + 1, size=rows)]
        if max(m_orders) >= 2:
            break
    m = max(m_orders)
    r_orders = [int(rng.integers(-min(m, 3), 3)) for _ in range(kappa)]
    B = tuple(random_boundary_operator(rng, mj) for mj in m_orders)
    C = tuple(
        tuple(random_boundary_operator(rng, m_orders[j] + r_orders[k], tangential=True)
              for k in range(kappa))
        for j in range(rows))
    return DiskProblem(kappa=kappa, B=B, C=C, m_orders=tuple(m_orders),
                       r_orders=tuple(r_orders), band_limit=band_limit)


def random_mode_sequence(rng: np.random.Generator, band: int,
                         count: int = 6) -> ModeSequence:
    ks = rng.integers(-band, band + 1, size=count)
    return ModeSequence({int(k): complex(*rng.standard_normal(2)) for k in ks}, band)


# ---------------------------------------------------------------------------
# exact oracles for pairings of mode data on the disk and its boundary
# ---------------------------------------------------------------------------

def pair_boundary(f: dict[int, complex], g: dict[int, complex]) -> complex:
    """(f, g) on the circle as a mode sum: 2 pi sum_k f_k conj(g_k)."""
    return TWO_PI * sum(c * g.get(k, 0j).conjugate() for k, c in f.items())


def pair_disk_monomials(terms1: list[tuple[int, float, complex]],
                        terms2: list[tuple[int, float, complex]]) -> complex:
    """(u1, u2) on the unit disk for sums of rho^sigma e^{ik theta} terms."""
    total = 0j
    for k1, s1, a1 in terms1:
        for k2, s2, a2 in terms2:
            if k1 == k2:
                total += TWO_PI * a1 * a2.conjugate() / (s1 + s2 + 2.0)
    return total


def normal_derivative_trace(a: int, sigma: float) -> complex:
    """Boundary value of D_nu^a applied to rho^sigma e^{ik theta}."""
    ff = 1.0
    for i in range(a):
        ff *= sigma - i
    return (-1j) ** a * ff


def interior_action_on_monomial(op: InteriorCollarOperator, sigma: float,
                                k: int) -> list[tuple[int, float, complex]]:
    """Image terms (mode, degree, coeff) of rho^sigma e^{ik theta}."""
    return [(k, deg, coeff) for deg, coeff in op.apply_to_monomial(sigma, k).items()]


def dnu_power_operator(j: int) -> InteriorCollarOperator:
    """D_nu^j = (-i d_rho)^j as a collar operator."""
    out = InteriorCollarOperator({(0, 0, 0): 1.0})
    step = InteriorCollarOperator({(0, 1, 0): -1j})
    for _ in range(j):
        out = compose(step, out)
    return out


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)
