"""Identities of the explicit special matrices and 1/Gamma."""

import math

import mpmath
import numpy as np
import pytest

import linflow as lf


class TestDiagPowers:
    def test_unit_argument_is_identity(self):
        assert np.array_equal(lf.diag_powers(3, 1.0), np.eye(3))

    def test_powers_of_two(self):
        assert np.array_equal(lf.diag_powers(3, 2.0), np.diag([1.0, 2.0, 4.0]))

    def test_imaginary_argument(self):
        assert np.array_equal(lf.diag_powers(2, 1j), np.diag([1.0 + 0j, 1j]))

    def test_inverse_identity(self):
        for omega in (2.0, -0.75, 0.5 + 1.5j):
            m = 4
            prod = lf.diag_powers(m, omega) @ lf.diag_powers(m, 1.0 / omega)
            assert np.allclose(prod, np.eye(m), atol=1e-13)

    def test_scaled_limit_single_corner(self):
        # omega**(1-m) D_m(omega) converges entrywise to the matrix with a
        # single 1 in the last corner; off-corner entries decay like 1/omega
        for omega in (1e3, 1e6):
            for m in range(1, 7):
                d = lf.diag_powers(m, omega) * omega ** (1 - m)
                target = np.zeros((m, m))
                target[m - 1, m - 1] = 1.0
                assert np.max(np.abs(d - target)) <= 1.0001 / omega

    def test_rejects_zero_size(self):
        with pytest.raises(ValueError):
            lf.diag_powers(0, 1.0)


class TestNilpotentBlock:
    def test_size_one(self):
        assert np.array_equal(lf.nilpotent_block(1), [[0.0]])

    def test_size_two(self):
        assert np.array_equal(lf.nilpotent_block(2), [[0, 1], [0, 0]])

    def test_nilpotency_index(self):
        j4 = lf.nilpotent_block(4)
        p = np.linalg.matrix_power
        assert np.count_nonzero(p(j4, 3)) == 1
        assert np.count_nonzero(p(j4, 4)) == 0


class TestRecipGamma:
    def test_at_one(self):
        assert abs(lf.recip_gamma(1.0) - 1.0) < 1e-14

    def test_exact_zero_at_nonpositive_integers(self):
        for k in (0.0, -1.0, -2.0, -3.0, -17.0):
            assert lf.recip_gamma(k) == 0.0
        assert lf.recip_gamma(complex(-4.0, 0.0)) == 0.0

    def test_factorial_recurrence(self):
        assert abs(lf.recip_gamma(5.0) - 1.0 / 24.0) < 1e-15

    def test_against_mpmath_on_the_contract_disk(self):
        mpmath.mp.dps = 30
        worst = 0.0
        for x in np.linspace(-29.3, 29.7, 119):
            if abs(x - round(x)) < 1e-6 and round(x) <= 0:
                continue
            ref = float(mpmath.rgamma(float(x)))
            if ref == 0.0:
                continue
            worst = max(worst, abs(lf.recip_gamma(float(x)) - ref) / abs(ref))
        for z in (1 + 2j, -3.4 + 0.2j, 10 - 4j, -20 + 7j, 0.5j, -29 + 0.5j):
            ref = complex(mpmath.rgamma(z))
            worst = max(
                worst, abs(lf.recip_gamma(z) - ref) / max(abs(ref), 1e-300)
            )
        assert worst <= 1e-10

    def test_entire_no_errors_near_poles_of_gamma(self):
        for k in range(0, -6, -1):
            val = lf.recip_gamma(k + 1e-9)
            assert np.isfinite(val)
            # 1/Gamma has slope (-1)^k k! at -k
            expected = (-1.0) ** (-k) * math.factorial(-k) * 1e-9
            assert abs(val - expected) <= 1e-6 * abs(expected) + 1e-22


class TestDeltaMatrix:
    def test_one_by_one(self):
        assert np.allclose(lf.delta_matrix(1, 1, 0.0), [[1.0]])

    def test_two_by_two_at_zero(self):
        assert np.allclose(lf.delta_matrix(2, 2, 0.0), [[1, 1], [0, 1]], atol=1e-14)

    def test_determinant_two_by_two(self):
        assert abs(np.linalg.det(lf.delta_matrix(2, 2, 1.0)) - 0.5) < 1e-12

    def test_determinant_product_formula(self):
        for m in range(1, 7):
            for omega in (0.5, 1.0, 2.25, 7.0, -0.5):
                det = float(np.linalg.det(lf.delta_matrix(m, m, omega)))
                expected = 1.0
                for j in range(1, m + 1):
                    expected *= math.gamma(j) / math.gamma(omega + j)
                assert abs(det - expected) <= 1e-8 * abs(expected), (m, omega)

    def test_singular_exactly_at_negative_integers(self):
        for m in range(1, 7):
            for omega in (-1.0, -2.0, -3.0):
                assert abs(np.linalg.det(lf.delta_matrix(m, m, omega))) <= 1e-12

    def test_upper_triangular_iff_nonpositive_integer_parameter(self):
        for m, n in ((3, 4), (4, 3), (5, 5)):
            for omega in (0.0, -1.0, -2.0):
                d = lf.delta_matrix(m, n, omega)
                assert np.allclose(np.tril(d, -1), 0.0, atol=0)
            for omega in (0.5, -1.5, 2.0):
                assert np.any(np.tril(lf.delta_matrix(m, n, omega), -1) != 0.0)

    def test_zero_matrix_iff_parameter_at_most_minus_n(self):
        for m, n in ((3, 3), (2, 4)):
            assert np.count_nonzero(lf.delta_matrix(m, n, float(-n))) == 0
            assert np.count_nonzero(lf.delta_matrix(m, n, float(-n - 2))) == 0
            assert np.count_nonzero(lf.delta_matrix(m, n, float(-n + 1))) > 0

    def test_spec_dataclass_form(self):
        spec = lf.DeltaSpec(2, 3, 0.5)
        assert np.allclose(lf.delta_matrix(spec), lf.delta_matrix(2, 3, 0.5))
        with pytest.raises(ValueError):
            lf.DeltaSpec(0, 1, 0.0)


class TestExpBlockPartition:
    def test_two_by_two(self):
        assert np.allclose(lf.exp_block_partition(2, 1, 1.0), [[1, 1], [0, 1]])

    def test_three_by_three_entries(self):
        e = lf.exp_block_partition(3, 2, 2.0)
        assert np.allclose(e, [[1, 2, 2], [0, 1, 2], [0, 0, 1]], atol=1e-12)

    def test_matches_matexp_on_the_full_grid(self):
        worst = 0.0
        for m in range(1, 8):
            refs = {
                t: lf.matexp(lf.nilpotent_block(m), t)
                for t in (-10.0, -1.0, -0.5, 0.5, 1.0, 10.0)
            }
            for j in range(1, m + 1):
                for t, ref in refs.items():
                    dev = np.max(np.abs(lf.exp_block_partition(m, j, t) - ref))
                    worst = max(worst, float(dev))
        assert worst <= 1e-9

    def test_rejects_t_zero(self):
        with pytest.raises(ValueError):
            lf.exp_block_partition(3, 1, 0.0)

    def test_rejects_bad_split(self):
        with pytest.raises(ValueError):
            lf.exp_block_partition(3, 4, 1.0)


class TestLowerBoundNu:
    def test_identity_flow(self):
        assert lf.lower_bound_nu(1) == 1.0

    def test_positive_for_all_sizes(self):
        for m in (2, 3, 4):
            assert lf.lower_bound_nu(m) > 0.0

    def test_two_digit_stability_under_grid_refinement(self):
        coarse = lf.lower_bound_nu(2)
        fine = lf.lower_bound_nu(2, t_points=241, sphere_points=400)
        assert abs(coarse - fine) <= 1e-2 * coarse
