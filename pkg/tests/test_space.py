import math

import numpy as np
import pytest
from conftest import unit_space, zeta_oracle

from korobox.errors import DomainError, KoroboxError
from korobox.space import (
    SpaceDescriptor,
    WeightSchedule,
    algebra_constant,
    cosine_series,
    cosine_series_grid,
    kernel_diag,
    kernel_eval,
    shifted_norm_bound,
    sum_exponent,
    sup_norm_bound,
    weight_factor,
    weight_product,
    zeta,
)


class TestWeightSchedule:
    def test_explicit_valid(self):
        w = WeightSchedule.explicit([1.0, 0.5, 0.5, 0.1])
        assert np.allclose(w.gammas(4), [1.0, 0.5, 0.5, 0.1])

    def test_rejects_increasing(self):
        with pytest.raises(DomainError):
            WeightSchedule.explicit([0.5, 0.9])

    def test_rejects_above_one(self):
        with pytest.raises(DomainError):
            WeightSchedule.explicit([1.5, 0.5])

    def test_rejects_zero_weight(self):
        with pytest.raises(DomainError):
            WeightSchedule.explicit([1.0, 0.0])

    def test_polynomial_values(self):
        w = WeightSchedule.polynomial(0.5, 2.0)
        assert np.allclose(w.gammas(3), [0.5, 0.125, 0.5 / 9])

    def test_polynomial_kappa_zero_is_constant(self):
        w = WeightSchedule.polynomial(0.7, 0.0)
        assert np.allclose(w.gammas(4), [0.7] * 4)

    def test_polynomial_validation(self):
        with pytest.raises(DomainError):
            WeightSchedule.polynomial(0.0, 1.0)
        with pytest.raises(DomainError):
            WeightSchedule.polynomial(1.2, 1.0)
        with pytest.raises(DomainError):
            WeightSchedule.polynomial(1.0, -0.5)

    def test_roundtrip_dict(self):
        for w in (WeightSchedule.explicit([1.0, 0.25]), WeightSchedule.polynomial(0.9, 1.5)):
            assert WeightSchedule.from_dict(w.to_dict()) == w


class TestSpaceDescriptor:
    def test_validation(self):
        with pytest.raises(DomainError):
            SpaceDescriptor(d=0, alpha=2.0, weights=WeightSchedule.explicit([1.0]))
        with pytest.raises(DomainError):
            SpaceDescriptor(d=1, alpha=-1.0, weights=WeightSchedule.explicit([1.0]))
        with pytest.raises(DomainError):
            SpaceDescriptor(d=3, alpha=2.0, weights=WeightSchedule.explicit([1.0]))

    def test_kernel_requires_smoothness(self):
        s = unit_space(alpha=1.0)
        with pytest.raises(DomainError):
            kernel_diag(s)


class TestWeightFactor:
    def test_direct_substitution(self):
        s = unit_space(gammas=[0.5])
        assert weight_factor(s, 1, 3) == pytest.approx(18.0)

    def test_zero_frequency(self):
        s = unit_space(gammas=[0.5])
        assert weight_factor(s, 1, 0) == 1.0

    def test_alpha_zero_always_one(self):
        s = SpaceDescriptor(d=1, alpha=0.0, weights=WeightSchedule.explicit([0.5]))
        assert weight_factor(s, 1, 7) == 1.0

    def test_index_bounds(self):
        s = unit_space(d=2, gammas=[1.0, 0.5])
        with pytest.raises(DomainError):
            weight_factor(s, 3, 1)


class TestWeightProduct:
    def test_unweighted(self):
        s = unit_space(d=2, gammas=[1.0, 1.0])
        assert weight_product(s, (2, 3)) == pytest.approx(36.0)

    def test_zero_vector(self):
        for alpha in (0.0, 1.0, 3.5):
            s = SpaceDescriptor(d=2, alpha=alpha, weights=WeightSchedule.explicit([1.0, 0.3]))
            assert weight_product(s, (0, 0)) == 1.0

    def test_mixed_weights(self):
        s = unit_space(d=2, gammas=[1.0, 0.25])
        assert weight_product(s, (1, 1)) == pytest.approx(4.0)

    def test_at_least_one_and_minimum_at_zero(self, rng):
        s = unit_space(d=3, gammas=[0.9, 0.5, 0.2])
        for _ in range(200):
            h = rng.integers(-6, 7, size=3)
            r = weight_product(s, h)
            assert r >= 1.0
            if np.any(h != 0):
                assert r > 1.0

    def test_negation_symmetry(self, rng):
        s = SpaceDescriptor(d=3, alpha=1.7, weights=WeightSchedule.explicit([1.0, 0.6, 0.3]))
        for _ in range(100):
            h = rng.integers(-5, 6, size=3)
            assert weight_product(s, h) == weight_product(s, -h)


class TestZeta:
    def test_pi_squared_over_six(self):
        assert zeta(2.0) == pytest.approx(math.pi**2 / 6.0, rel=1e-12)

    def test_pi_fourth_over_ninety(self):
        assert zeta(4.0) == pytest.approx(math.pi**4 / 90.0, rel=1e-12)

    @pytest.mark.parametrize("alpha", [1.2, 1.5, 2.0, 3.0, 4.0, 7.3])
    def test_against_tail_sum_oracle(self, alpha):
        assert zeta(alpha) == pytest.approx(zeta_oracle(alpha), rel=1e-11)

    def test_divergence(self):
        with pytest.raises(DomainError):
            zeta(1.0)
        with pytest.raises(DomainError):
            zeta(0.5)


class TestCosineSeries:
    @pytest.mark.parametrize("alpha", [2, 4, 6])
    def test_closed_form_matches_direct_sum(self, alpha, rng):
        # even-integer closed form against plain truncated summation
        for x in rng.random(10):
            h = np.arange(1, 200_000, dtype=float)
            direct = float(np.sum(np.cos(2 * np.pi * h * x) / h**alpha))
            assert cosine_series(alpha, x) == pytest.approx(direct, abs=1e-8)

    @pytest.mark.parametrize("alpha", [1.5, 2.6, 3.0])
    def test_noninteger_and_odd_paths(self, alpha, rng):
        for x in 0.05 + 0.9 * rng.random(5):
            h = np.arange(1, 2_000_000, dtype=float)
            direct = float(np.sum(np.cos(2 * np.pi * h * x) / h**alpha))
            assert cosine_series(alpha, x) == pytest.approx(direct, abs=5e-9)

    def test_at_zero_is_zeta(self):
        assert cosine_series(2.0, 0.0) == pytest.approx(zeta(2.0), rel=1e-12)
        assert cosine_series(1.5, 0.0) == pytest.approx(zeta(1.5), rel=1e-12)

    @pytest.mark.parametrize("alpha", [2.0, 1.7, 3.0])
    def test_grid_matches_scalar(self, alpha):
        n = 31
        grid = cosine_series_grid(alpha, n)
        scalar = np.asarray([cosine_series(alpha, k / n) for k in range(n)])
        assert np.max(np.abs(grid - scalar)) < 1e-9


class TestKernel:
    def test_diagonal_value(self):
        s = unit_space()
        assert kernel_eval(s, [0.3], [0.3]) == pytest.approx(1 + 2 * zeta(2.0), rel=1e-12)

    def test_half_shift_value(self):
        s = unit_space()
        expected = 1 + 2 * math.pi**2 * (0.25 - 0.5 + 1.0 / 6.0)
        assert kernel_eval(s, [0.5], [0.0]) == pytest.approx(expected, rel=1e-10)
        assert expected == pytest.approx(-0.644934066848, abs=1e-9)

    def test_product_over_coordinates(self):
        s = unit_space(d=2, gammas=[1.0, 1.0])
        assert kernel_eval(s, [0.1, 0.7], [0.1, 0.7]) == pytest.approx(
            (1 + 2 * zeta(2.0)) ** 2, rel=1e-10
        )

    def test_translation_invariance(self, rng):
        s = SpaceDescriptor(d=3, alpha=2.0, weights=WeightSchedule.explicit([1.0, 0.5, 0.2]))
        for _ in range(20):
            x, y, t = rng.random(3), rng.random(3), rng.random(3)
            assert kernel_eval(s, x, y) == pytest.approx(
                kernel_eval(s, (x + t) % 1.0, (y + t) % 1.0), abs=1e-8
            )

    def test_diag_matches_eval(self, rng):
        s = SpaceDescriptor(d=2, alpha=4.0, weights=WeightSchedule.explicit([0.8, 0.4]))
        kd = kernel_diag(s)
        for _ in range(10):
            y = rng.random(2)
            assert kernel_eval(s, y, y) == pytest.approx(kd, abs=1e-8)

    def test_diag_with_decaying_weights(self):
        s = SpaceDescriptor(
            d=3, alpha=2.0, weights=WeightSchedule.explicit([1.0, 0.25, 1.0 / 9.0])
        )
        z = zeta(2.0)
        expected = (1 + 2 * z) * (1 + 2 * z / 4) * (1 + 2 * z / 9)
        assert kernel_diag(s) == pytest.approx(expected, rel=1e-12)
        assert expected == pytest.approx(4.289868 * 1.822467 * 1.365541, rel=1e-5)


class TestBounds:
    def test_sup_norm_exponential_form(self):
        s = unit_space()
        assert sup_norm_bound(s) == pytest.approx(math.exp(zeta(2.0)), rel=1e-12)
        assert sup_norm_bound(s) == pytest.approx(5.1810, abs=5e-4)

    def test_sup_norm_sharp_form(self):
        s = unit_space()
        assert sup_norm_bound(s, sharp=True) == pytest.approx(math.sqrt(4.289868), abs=1e-5)
        assert sup_norm_bound(s, sharp=True) <= sup_norm_bound(s)

    def test_sup_norm_vanishing_weights(self):
        s = SpaceDescriptor(d=2, alpha=2.0, weights=WeightSchedule.explicit([1e-14, 1e-14]))
        assert sup_norm_bound(s) == pytest.approx(1.0, abs=1e-10)

    def test_algebra_constant_values(self):
        s = unit_space()
        assert algebra_constant(s) == pytest.approx(2 * math.sqrt(1 + 2 * zeta(2.0)), rel=1e-12)
        s2 = unit_space(d=2, alpha=3.0, gammas=[1.0, 1.0])
        assert algebra_constant(s2) == pytest.approx(8 * (1 + 2 * zeta(3.0)), rel=1e-12)
        assert algebra_constant(s2) == pytest.approx(27.233, abs=5e-3)

    def test_algebra_constant_log_linear_in_d(self):
        logs = []
        for d in range(1, 6):
            s = unit_space(d=d, gammas=[1.0] * d)
            logs.append(math.log2(algebra_constant(s)))
        diffs = np.diff(logs)
        assert np.allclose(diffs, diffs[0], rtol=1e-9)

    def test_shifted_norm_bound_zero_shift(self):
        s = SpaceDescriptor(d=2, alpha=2.0, weights=WeightSchedule.explicit([1.0, 0.1]))
        expected = math.sqrt(max(1.0, 4.0) * max(1.0, 0.4))
        assert shifted_norm_bound(s, (0, 0)) == pytest.approx(expected, rel=1e-12)

    def test_shifted_norm_bound_values(self):
        s = unit_space()
        assert shifted_norm_bound(s, (1,)) == pytest.approx(2.0, rel=1e-12)
        s2 = unit_space(gammas=[0.1])
        assert shifted_norm_bound(s2, (2,)) == pytest.approx(math.sqrt(40.0), rel=1e-12)

    @pytest.mark.parametrize("gamma,h", [(1.0, 1), (0.1, 2), (0.7, 3)])
    def test_shifted_bound_dominates_ratio_maximum(self, gamma, h):
        # direct maximization of r(j)/r(h+j) over a wide window
        s = unit_space(gammas=[gamma])
        j = np.arange(-10_000, 10_001)
        r = lambda k: np.where(k == 0, 1.0, np.abs(k) ** 2.0 / gamma)  # noqa: E731
        ratio_max = float(np.max(r(j) / r(j + h)))
        assert shifted_norm_bound(s, (h,)) ** 2 >= ratio_max - 1e-9


class TestSumExponent:
    def test_values(self):
        assert sum_exponent(WeightSchedule.polynomial(1.0, 2.0)) == pytest.approx(0.5)
        assert sum_exponent(WeightSchedule.polynomial(1.0, 1.0)) == pytest.approx(1.0)
        assert sum_exponent(WeightSchedule.polynomial(0.5, 0.0)) == math.inf

    def test_monotone_in_decay(self):
        kappas = [0.25, 0.5, 1.0, 2.0, 4.0]
        vals = [sum_exponent(WeightSchedule.polynomial(1.0, k)) for k in kappas]
        assert all(a >= b for a, b in zip(vals, vals[1:]))

    def test_explicit_rejected(self):
        with pytest.raises(KoroboxError, match="finite schedules"):
            sum_exponent(WeightSchedule.explicit([1.0, 0.5]))
