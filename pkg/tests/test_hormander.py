"""Tests of mode-sequence norms and function-parameter interpolation."""

import math

import numpy as np
import pytest

from lawruk import (HormanderSpec, InterpolationParameter, LogPowerPhi,
                    ModeSequence, bracket, check_embedding_chain, eval_phi,
                    hnorm, interpolation_norm, make_psi)
from conftest import random_mode_sequence


class TestBracket:
    @pytest.mark.parametrize("k,expected", [(0, 1.0), (1, math.sqrt(2)),
                                            (-3, math.sqrt(10)), (3, math.sqrt(10))])
    def test_values(self, k, expected):
        assert bracket(k) == pytest.approx(expected, rel=1e-15)


class TestHnorm:
    def test_single_mode(self):
        seq = ModeSequence({5: 1.0}, 8)
        assert hnorm(seq, HormanderSpec(2.0)) == pytest.approx(26.0, rel=1e-14)

    def test_pythagorean(self):
        seq = ModeSequence({0: 3.0, 2: 4.0}, 4)
        assert hnorm(seq, HormanderSpec(0.0)) == pytest.approx(5.0, rel=1e-14)

    def test_trivial_phi_is_sobolev(self, rng):
        for _ in range(20):
            seq = random_mode_sequence(rng, 32)
            s = float(rng.uniform(-3, 6))
            explicit = math.sqrt(sum(bracket(k) ** (2 * s) * abs(c) ** 2
                                     for k, c in seq.coefficients.items()))
            assert hnorm(seq, HormanderSpec(s)) == pytest.approx(explicit, rel=1e-12)

    def test_zero_sequence(self):
        assert hnorm(ModeSequence({}, 0), HormanderSpec(3.0, LogPowerPhi([1]))) == 0.0

    def test_homogeneity_and_triangle(self, rng):
        spec = HormanderSpec(1.5, LogPowerPhi([0.5, 0.7]))
        for _ in range(100):
            x = random_mode_sequence(rng, 24)
            y = random_mode_sequence(rng, 24)
            lam = complex(*rng.standard_normal(2))
            assert hnorm(lam * x, spec) == pytest.approx(abs(lam) * hnorm(x, spec),
                                                         rel=1e-12)
            assert hnorm(x + y, spec) <= hnorm(x, spec) + hnorm(y, spec) + 1e-12

    def test_monotone_in_s(self, rng):
        phi = LogPowerPhi([2, -1])
        for _ in range(100):
            seq = random_mode_sequence(rng, 40)
            s = float(rng.uniform(-3, 6))
            sp = s + float(rng.uniform(0, 3))
            assert hnorm(seq, HormanderSpec(s, phi)) <= hnorm(
                seq, HormanderSpec(sp, phi)) * (1 + 1e-13)

    def test_parity(self, rng):
        spec = HormanderSpec(2.5, LogPowerPhi([1]))
        for _ in range(50):
            seq = random_mode_sequence(rng, 24)
            reflected = ModeSequence({-k: c for k, c in seq.coefficients.items()},
                                     seq.band_limit)
            assert hnorm(seq, spec) == pytest.approx(hnorm(reflected, spec), rel=1e-14)

    def test_large_band_accumulation(self):
        # compensated summation keeps wide flat sums exact
        K = 100_000
        seq = ModeSequence({k: 1.0 for k in range(-K, K + 1)}, K)
        value = hnorm(seq, HormanderSpec(0.0))
        assert value == pytest.approx(math.sqrt(2 * K + 1), rel=1e-14)


class TestPsi:
    def test_trivial_phi_gives_square_root(self):
        psi = make_psi(InterpolationParameter(eps=0.7))
        for t in (1.0, 2.0, 10.0, 1e8):
            assert psi(t) == pytest.approx(math.sqrt(t), rel=1e-15)

    def test_value_at_one(self):
        for phi in (LogPowerPhi(), LogPowerPhi([1]), LogPowerPhi([2, -1])):
            psi = make_psi(InterpolationParameter(eps=0.3, phi=phi))
            assert psi(1.0) == 1.0

    def test_half_eps_value(self):
        psi = make_psi(InterpolationParameter(eps=0.5, phi=LogPowerPhi([1])))
        t = math.e**2
        assert psi(t) == pytest.approx(math.e * 3.0, rel=1e-14)

    def test_below_one_is_constant(self):
        psi = make_psi(InterpolationParameter(eps=1.0, phi=LogPowerPhi([2])))
        assert psi(0.5) == eval_phi(LogPowerPhi([2]), 1.0)

    def test_eps_must_be_positive(self):
        with pytest.raises(ValueError):
            InterpolationParameter(eps=0.0)


class TestInterpolationNorm:
    def test_square_root_parameter_recovers_sobolev(self, rng):
        for _ in range(50):
            seq = random_mode_sequence(rng, 64)
            s = float(rng.uniform(-2, 5))
            eps = float(rng.uniform(0.1, 2.0))
            value = interpolation_norm(seq, s - eps, s + eps, math.sqrt)
            assert value == pytest.approx(hnorm(seq, HormanderSpec(s)), rel=1e-13)

    def test_identity_with_function_parameter(self, rng):
        # the computational heart of the Fredholm proof: with
        # psi(t) = sqrt(t) phi(t^(1/(2 eps))) the interpolated couple
        # norm equals the (s, phi) norm mode by mode
        for phi in (LogPowerPhi(), LogPowerPhi([1]), LogPowerPhi([0.5, 0.7]),
                    LogPowerPhi([2, -1])):
            for _ in range(25):
                seq = random_mode_sequence(rng, 128)
                s = float(rng.uniform(-3, 8))
                eps = float(rng.choice([0.25, 1.0, 2.0]))
                psi = make_psi(InterpolationParameter(eps=eps, phi=phi))
                value = interpolation_norm(seq, s - eps, s + eps, psi)
                assert value == pytest.approx(hnorm(seq, HormanderSpec(s, phi)),
                                              rel=1e-13)

    def test_zero_sequence(self):
        psi = make_psi(InterpolationParameter(eps=1.0))
        assert interpolation_norm(ModeSequence({}, 0), 0.0, 2.0, psi) == 0.0

    def test_order_violation(self):
        with pytest.raises(ValueError):
            interpolation_norm(ModeSequence({1: 1.0}, 2), 2.0, 1.0, math.sqrt)


class TestEmbeddingChain:
    def test_trivial_phi_middle_matches(self, rng):
        for _ in range(20):
            seq = random_mode_sequence(rng, 32)
            upper, middle, lower = check_embedding_chain(seq, 1.5, 0.5, LogPowerPhi())
            assert middle == pytest.approx(hnorm(seq, HormanderSpec(1.5)), rel=1e-14)
            assert lower <= middle * (1 + 1e-13)
            assert middle <= upper * (1 + 1e-13)

    def test_single_mode_values(self):
        seq = ModeSequence({7: 1.0}, 7)
        phi = LogPowerPhi([1])
        s, eps = 2.0, 0.5
        upper, middle, lower = check_embedding_chain(seq, s, eps, phi)
        b = bracket(7)
        assert upper == pytest.approx(b ** (s + eps), rel=1e-14)
        assert middle == pytest.approx(b**s * eval_phi(phi, b), rel=1e-14)
        assert lower == pytest.approx(b ** (s - eps), rel=1e-14)

    def test_log_over_power_ratio_decreases(self):
        # <k>**(-eps) phi(<k>) for phi = [1], eps = 0.1: bounded, and
        # decreasing from k ~ e^(1/eps) on (the log loses to any power)
        phi = LogPowerPhi([1])
        eps = 0.1

        def ratio(k: int) -> float:
            upper, middle, _ = check_embedding_chain(ModeSequence({k: 1.0}, k),
                                                     2.0, eps, phi)
            return middle / upper

        r5, r6 = ratio(10**5), ratio(10**6)
        assert r6 == pytest.approx(eval_phi(phi, bracket(10**6)) * bracket(10**6) ** -eps,
                                   rel=1e-12)
        assert r6 < r5 < ratio(30000) + 1e-9

    def test_sandwich_with_explicit_mode_constants(self, rng):
        # middle <= C_up * upper and lower <= C_down * middle with the
        # constants read off the occurring mode weights
        phi = LogPowerPhi([0.8, -0.3])
        for _ in range(40):
            seq = random_mode_sequence(rng, 48)
            s, eps = float(rng.uniform(-2, 4)), float(rng.uniform(0.2, 1.5))
            upper, middle, lower = check_embedding_chain(seq, s, eps, phi)
            brackets = [bracket(k) for k in seq.coefficients]
            c_up = max(b**-eps * eval_phi(phi, b) for b in brackets)
            c_down = max(b**-eps / eval_phi(phi, b) for b in brackets)
            assert middle <= c_up * upper * (1 + 1e-12)
            assert lower <= c_down * middle * (1 + 1e-12)

    def test_weight_ratio_bounded_for_log_power_phi(self, rng):
        phi = LogPowerPhi([1.5])
        eps = 0.25
        values = [bracket(k) ** -eps * eval_phi(phi, bracket(k))
                  for k in range(0, 10**6, 9973)]
        peak = max(values)
        assert peak < 12.0  # analytic max of (1+ln b)^1.5 b^-0.25 is ~8.2
        assert values[-1] < peak
