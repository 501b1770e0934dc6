"""Tests of root splitting, the covering matrix and the aggregate check."""

import cmath
import math

import numpy as np
import pytest

from lawruk import (ImproperRootSplitError, PointSymbolProblem, RealRootError,
                    build_lopatinskii_matrix, check_covering,
                    check_interior_ellipticity, check_lawruk_ellipticity,
                    check_proper_ellipticity, roots_with_multiplicity)
from lawruk.ellipticity import circle_directions, sphere_directions
from conftest import fourth_order_point_problem, second_order_point_problem


def _closed_form_det(p: int, orientation: int, tau: float) -> complex:
    """Hand-derived determinant of the second-order model's covering
    system: -i (-i zeta_-)^p (orientation*tau - zeta_-), zeta_- = -i tau."""
    zeta_minus = -1j * tau
    return -1j * (-1j * zeta_minus) ** p * (orientation * tau - zeta_minus)


class TestRootSplit:
    def test_quadratic(self):
        split = roots_with_multiplicity([1, 0, 1])   # zeta^2 + 1
        ((plus, mp),), ((minus, mm),) = split.plus_roots, split.minus_roots
        assert (mp, mm) == (1, 1)
        assert plus == pytest.approx(1j, abs=1e-14)
        assert minus == pytest.approx(-1j, abs=1e-14)

    def test_quartic_roots_of_minus_one(self):
        split = roots_with_multiplicity([1, 0, 0, 0, 1])   # zeta^4 + 1
        minus = [r for r, _m in split.minus_roots]
        expected = sorted([cmath.exp(5j * math.pi / 4), cmath.exp(7j * math.pi / 4)],
                          key=lambda z: z.real)
        assert len(minus) == 2
        for got, want in zip(minus, expected):
            assert got == pytest.approx(want, abs=1e-12)
        assert split.plus_multiplicity == 2

    def test_double_root_clusters(self):
        # (zeta - 2i)^2; companion eigenvalues split at the sqrt(eps)
        # scale, so multiplicity detection needs a coarser tolerance
        split = roots_with_multiplicity([-4, -4j, 1], tol=1e-6)
        assert split.minus_roots == ()
        ((root, mult),) = split.plus_roots
        assert mult == 2
        assert root == pytest.approx(2j, abs=1e-7)

    def test_real_root_rejected(self):
        with pytest.raises(RealRootError):
            roots_with_multiplicity([-1, 0, 1])   # zeta^2 - 1

    def test_multiplicity_sum(self, rng):
        # multiplicities always add up to the polynomial degree
        for _ in range(120):
            degree = int(rng.integers(2, 9))
            roots = []
            while len(roots) < degree:
                z = complex(rng.uniform(-2, 2), rng.choice([-1, 1]) * rng.uniform(0.3, 2))
                mult = min(int(rng.integers(1, 3)), degree - len(roots))
                roots += [z] * mult
            poly = np.poly(np.array(roots))[::-1]   # ascending
            split = roots_with_multiplicity(list(poly), tol=1e-5)
            assert split.total_multiplicity == degree

    def test_proper_ellipticity_counts(self):
        assert check_proper_ellipticity(roots_with_multiplicity([1, 0, 1]), 1)
        assert check_proper_ellipticity(roots_with_multiplicity([1, 0, 0, 0, 1]), 2)
        lopsided = roots_with_multiplicity(
            list(np.poly([1j, 2j])[::-1]))   # both roots above the axis
        assert not check_proper_ellipticity(lopsided, 1)


class TestLopatinskiiMatrix:
    def test_second_order_model_matrix(self):
        problem = second_order_point_problem(p=0, orientation=1)
        split = roots_with_multiplicity(problem.a_poly)
        matrix = build_lopatinskii_matrix(problem, split)
        expected = np.array([[1, 1], [-1, -1j]], dtype=complex)
        assert np.allclose(matrix, expected, atol=1e-12)
        assert np.linalg.det(matrix) == pytest.approx(1 - 1j, abs=1e-12)

    def test_vandermonde_structure_without_extra_unknowns(self):
        # B_j = zeta^(j-1) with simple decaying roots and a zero C block
        # (padded by an extra column unknown) gives Vandermonde columns
        a = list(np.poly([1j, 2j, -1j, -2j])[::-1])
        b = [[1], [0, 1], [0, 0, 1]]
        c = [[0.0], [0.0], [1.0]]   # one extra column to keep the system square
        problem = PointSymbolProblem(a, b, c, q=2, kappa=1)
        split = roots_with_multiplicity(problem.a_poly)
        matrix = build_lopatinskii_matrix(problem, split)
        minus = [r for r, _m in split.minus_roots]
        for col, root in enumerate(minus):
            assert matrix[0, col] == pytest.approx(1.0, abs=1e-10)
            assert matrix[1, col] == pytest.approx(root, abs=1e-10)
            assert matrix[2, col] == pytest.approx(root**2, abs=1e-10)

    def test_multiple_root_columns_match_monomial_oracle(self, rng):
        # entry for B = zeta^n over a root of multiplicity >= l+1 equals
        # i^n C(n,l) l! (-i zeta)^(n-l), the direct derivative of
        # t^l e^{-i zeta t} at t = 0 computed monomial by monomial
        a = list(np.poly([2j, 2j, -1j - 0.5, -1j + 0.5])[::-1])
        b = [[0, 0, 1], [0, 0, 0, 1], [1]]   # zeta^2, zeta^3, 1
        c = [[1.0], [0.0], [0.5]]
        problem = PointSymbolProblem(a, b, c, q=2, kappa=1)
        split = roots_with_multiplicity(problem.a_poly, tol=1e-6)
        matrix = build_lopatinskii_matrix(problem, split)
        minus = [r for r, _m in split.minus_roots]
        col = 0
        for root, mult in split.minus_roots:
            for l in range(mult):
                for j, power in enumerate([2, 3, 0]):
                    if l > power:
                        expected = 0j
                    else:
                        expected = ((1j**power) * math.comb(power, l)
                                    * math.factorial(l) * (-1j * root) ** (power - l))
                    assert matrix[j, col] == pytest.approx(expected, abs=1e-8)
                col += 1

    def test_improper_split_rejected(self):
        problem = second_order_point_problem(p=0, orientation=1)
        lopsided = roots_with_multiplicity(list(np.poly([1j, 2j])[::-1]))
        with pytest.raises(ImproperRootSplitError):
            build_lopatinskii_matrix(problem, lopsided)


class TestCheckCovering:
    @pytest.mark.parametrize("p", range(6))
    @pytest.mark.parametrize("orientation", [1, -1])
    def test_second_order_family_is_covering(self, p, orientation):
        report = check_covering(second_order_point_problem(p, orientation))
        assert report.is_covering
        closed = _closed_form_det(p, orientation, 1.0)
        assert abs(report.det - closed) / abs(closed) <= 1e-12

    @pytest.mark.parametrize("tau", [0.5, 1.0, 2.0])
    @pytest.mark.parametrize("p", range(6))
    def test_closed_form_agreement(self, p, tau):
        report = check_covering(second_order_point_problem(p, 1, tau))
        closed = _closed_form_det(p, 1, tau)
        assert abs(report.det - closed) / abs(closed) <= 1e-12

    def test_degenerate_extra_column(self):
        # C_21 = -1 makes the two rows proportional at p = 0, tau = 1
        problem = PointSymbolProblem([1.0, 0.0, 1.0], [[1], [0, -1j]],
                                     [[1.0], [-1.0]], q=1, kappa=1)
        report = check_covering(problem)
        assert not report.is_covering
        assert abs(report.det) <= 1e-12

    def test_fourth_order_model(self):
        report = check_covering(fourth_order_point_problem())
        assert report.is_covering
        # the hand reduction collapses the determinant test to
        # gamma_1 gamma_2 != 0 with gamma_j = -zeta_j^2 + 1
        split = roots_with_multiplicity([1, 0, 0, 0, 1])
        gammas = [-(z**2) + 1.0 for z, _m in split.minus_roots]
        assert gammas[0] * gammas[1] == pytest.approx(2.0, abs=1e-12)

    def test_row_scaling_invariance(self, rng):
        for _ in range(100):
            p = int(rng.integers(0, 4))
            problem = second_order_point_problem(p, 1)
            base = check_covering(problem).is_covering
            scale_row = int(rng.integers(0, 2))
            factor = complex(*rng.standard_normal(2))
            while abs(factor) < 1e-3:
                factor = complex(*rng.standard_normal(2))
            b = [list(row) for row in problem.b_polys]
            c = [list(row) for row in problem.c_values]
            b[scale_row] = [factor * x for x in b[scale_row]]
            c[scale_row] = [factor * x for x in c[scale_row]]
            scaled = PointSymbolProblem(problem.a_poly, b, c, q=1, kappa=1)
            assert check_covering(scaled).is_covering == base

    def test_interior_scaling_invariance(self, rng):
        for _ in range(50):
            factor = complex(*rng.standard_normal(2))
            while abs(factor) < 1e-3:
                factor = complex(*rng.standard_normal(2))
            problem = second_order_point_problem(int(rng.integers(0, 4)), -1)
            scaled = PointSymbolProblem([factor * x for x in problem.a_poly],
                                        problem.b_polys, problem.c_values,
                                        q=1, kappa=1)
            assert check_covering(scaled).is_covering

    def test_homogeneity_across_tau_magnitudes(self):
        for p in range(4):
            assert (check_covering(second_order_point_problem(p, 1, 1.0)).is_covering
                    == check_covering(second_order_point_problem(p, 1, 2.0)).is_covering)

    def test_orientation_flip_preserves_verdict(self):
        for p in range(4):
            assert (check_covering(second_order_point_problem(p, 1)).is_covering
                    == check_covering(second_order_point_problem(p, -1)).is_covering)


class TestInteriorEllipticity:
    def test_laplacian_symbol(self):
        assert check_interior_ellipticity({(2, 0): 1.0, (0, 2): 1.0},
                                          circle_directions())

    def test_wave_symbol_fails(self):
        # vanishes along the diagonal direction, which the uniform grid hits
        assert not check_interior_ellipticity({(2, 0): 1.0, (0, 2): -1.0},
                                              circle_directions())

    def test_bilaplacian_symbol(self):
        assert check_interior_ellipticity({(4, 0): 1.0, (2, 2): 2.0, (0, 4): 1.0},
                                          circle_directions())

    def test_higher_dimensional_grid(self):
        grid = sphere_directions(3, count=512)
        assert check_interior_ellipticity({(2, 0, 0): 1.0, (0, 2, 0): 1.0,
                                           (0, 0, 2): 1.0}, grid)

    def test_empty_grid_rejected(self):
        with pytest.raises(ValueError):
            check_interior_ellipticity({(2, 0): 1.0}, np.zeros((0, 2)))


class TestLawrukAggregate:
    def test_second_order_model_elliptic(self):
        frozen = [("tau=+1", second_order_point_problem(0, 1)),
                  ("tau=-1", second_order_point_problem(0, -1))]
        report = check_lawruk_ellipticity({(2, 0): 1.0, (0, 2): 1.0}, frozen)
        assert report.is_elliptic
        assert report.first_failure is None

    def test_fourth_order_model_elliptic(self):
        frozen = [("tau=+1", fourth_order_point_problem())]
        report = check_lawruk_ellipticity({(4, 0): 1.0, (0, 4): 1.0}, frozen)
        assert report.is_elliptic

    def test_degenerate_variant_records_witness(self):
        degenerate = PointSymbolProblem([1.0, 0.0, 1.0], [[1], [0, -1j]],
                                        [[1.0], [-1.0]], q=1, kappa=1)
        frozen = [("tau=+1", second_order_point_problem(0, 1)),
                  ("tau=-1", degenerate)]
        report = check_lawruk_ellipticity({(2, 0): 1.0, (0, 2): 1.0}, frozen)
        assert not report.is_elliptic
        assert report.first_failure == {"condition": "covering", "witness": "tau=-1"}

    def test_proper_ellipticity_failure_recorded(self):
        bad_interior = PointSymbolProblem(list(np.poly([1j, 2j])[::-1]),
                                          [[1], [0, 1]], [[1.0], [0.0]],
                                          q=1, kappa=1)
        report = check_lawruk_ellipticity({(2, 0): 1.0, (0, 2): 1.0},
                                          [("tau=+1", bad_interior)])
        assert not report.is_elliptic
        assert report.first_failure["condition"] == "proper-ellipticity"
