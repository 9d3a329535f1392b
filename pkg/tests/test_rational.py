"""Rational classes, best rational approximation, periods, and periodic
subspace dimensions."""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import linflow as lf
from linflow.linalg import frobenius
from linflow.rational import TWO_PI, best_rational

from conftest import haar_orthogonal, rotations


def brute_force_period(members, base_period_steps=4096):
    """Oracle: the least multiple of 2*pi/s1 that is a period of every
    member frequency."""
    s1 = min(members)
    for k in range(1, base_period_steps):
        t = k * TWO_PI / s1
        if all(abs(t * s / TWO_PI - round(t * s / TWO_PI)) < 1e-9 for s in members):
            return t
    raise AssertionError("no common period found")


class TestBestRational:
    @given(
        p=st.integers(min_value=0, max_value=64),
        q=st.integers(min_value=1, max_value=64),
    )
    @settings(max_examples=200, deadline=None)
    def test_recovers_exact_fractions(self, p, q):
        frac = Fraction(p, q)
        got = best_rational(p / q, 64)
        assert abs(float(got) - p / q) <= abs(float(frac) - p / q) + 1e-15
        if q <= 64:
            assert got == frac or abs(float(got) - p / q) < 1e-12

    def test_pi_has_no_good_small_denominator(self):
        got = best_rational(math.pi, 64)
        assert got.denominator <= 64
        assert abs(math.pi - float(got)) > 1e-5

    def test_denominator_bound_respected(self, rng):
        for _ in range(100):
            x = float(rng.uniform(0, 10))
            got = best_rational(x, 17)
            assert 1 <= got.denominator <= 17

    def test_best_among_bounded(self, rng):
        # exhaustive oracle over all fractions with denominator <= qmax
        for _ in range(25):
            x = float(rng.uniform(0, 3))
            qmax = 12
            got = best_rational(x, qmax)
            best = min(
                (abs(x - p / q) for q in range(1, qmax + 1)
                 for p in range(0, int(3 * q) + 2)),
            )
            assert abs(x - float(got)) <= best + 1e-12


class TestRationalPartition:
    def test_integer_multiples_single_class(self):
        part = lf.rational_partition(rotations(1.0, 2.0, 3.0))
        assert part.class_count == 1
        cls = part.classes[0]
        assert cls.members == (1.0, 2.0, 3.0)
        assert cls.ratios == ((1, 1), (2, 1), (3, 1))

    def test_pi_is_independent(self):
        part = lf.rational_partition(rotations(1.0, math.pi))
        assert part.class_count == 2

    def test_exact_rational_ratio_joins(self):
        part = lf.rational_partition(rotations(1.0, 1.5))
        assert part.class_count == 1
        assert part.classes[0].ratios == ((1, 1), (3, 2))

    def test_membership_margins_reported(self):
        # a nearly-rational member: the decision margin is surfaced
        part = lf.rational_partition(
            rotations(1.0, 1.5 + 2e-9), tol=lf.Tolerance(eig_cluster_rel=1e-7)
        )
        assert part.class_count == 1
        cls = part.classes[0]
        assert cls.ratios == ((1, 1), (3, 2))
        assert cls.ratio_residuals[0] == 0.0
        assert 1e-10 < cls.ratio_residuals[1] < 1e-8

    def test_class_ordering_by_largest_member(self):
        part = lf.rational_partition(rotations(1.0, 1.5, math.pi))
        assert part.class_count == 2
        assert part.classes[0].members == (math.pi,)
        assert part.classes[1].members == (1.0, 1.5)

    def test_fixed_dimension_counted(self):
        a = np.zeros((4, 4))
        a[2:, 2:] = rotations(2.0)
        part = lf.rational_partition(a)
        assert part.fixed_dim == 2
        assert part.classes[0].member_dims == (1,)

    def test_rejects_real_spectrum(self):
        with pytest.raises(lf.NotBoundedError):
            lf.rational_partition(np.diag([1.0, -1.0]))

    def test_rejects_defective_imaginary(self):
        with pytest.raises(lf.NotBoundedError):
            lf.rational_partition(lf.nilpotent_block(2))

    def test_similarity_invariance(self, rng):
        a = rotations(1.0, 1.5, 2.5, math.pi)
        pa = lf.rational_partition(a)
        for _ in range(10):
            q = haar_orthogonal(a.shape[0], rng)
            pb = lf.rational_partition(q @ a @ q.T)
            assert pb.class_count == pa.class_count
            for ca, cb in zip(pa.classes, pb.classes):
                assert ca.ratios == cb.ratios
                assert abs(ca.period - cb.period) <= 1e-8 * ca.period
                assert np.allclose(ca.members, cb.members, rtol=1e-8)

    def test_every_frequency_in_exactly_one_class(self, rng):
        freqs = (1.0, 2.0, 2.5, math.pi, 2 * math.pi)
        part = lf.rational_partition(rotations(*freqs))
        seen = sorted(s for c in part.classes for s in c.members)
        assert np.allclose(seen, sorted(freqs), rtol=1e-9)


class TestClassPeriod:
    def test_single_frequency(self):
        part = lf.rational_partition(rotations(1.0))
        assert abs(part.classes[0].period - TWO_PI) < 1e-12
        assert abs(lf.class_period(part.classes[0]) - TWO_PI) < 1e-12

    def test_half_ratio_doubles_period(self):
        part = lf.rational_partition(rotations(1.0, 1.5))
        cls = part.classes[0]
        assert abs(cls.period - 4 * math.pi) < 1e-12
        assert abs(cls.period - brute_force_period(cls.members)) < 1e-10

    def test_two_three_example(self):
        part = lf.rational_partition(rotations(2.0, 3.0))
        cls = part.classes[0]
        assert abs(cls.period - brute_force_period([2.0, 3.0])) < 1e-10
        assert abs(cls.period - TWO_PI) < 1e-12

    def test_brute_force_oracle_on_random_rational_families(self, rng):
        for _ in range(20):
            s1 = float(rng.uniform(0.5, 3.0))
            ratios = sorted(
                {Fraction(int(rng.integers(1, 9)), int(rng.integers(1, 9)))
                 for _ in range(int(rng.integers(1, 4)))}
            )
            members = [s1] + [s1 * float(f) for f in ratios if f != 1]
            part = lf.rational_partition(rotations(*members))
            assert part.class_count == 1
            cls = part.classes[0]
            assert abs(cls.period - brute_force_period(cls.members)) <= 1e-8

    def test_period_is_genuine_and_minimal(self, rng):
        for freqs in [(1.0, 1.5), (2.0, 3.0), (1.0, 2.0, 3.0)]:
            a = rotations(*freqs)
            part = lf.rational_partition(a)
            cls = part.classes[0]
            # restriction to the class subspace is identity at T
            e = lf.matexp(a, cls.period)
            assert frobenius(e - np.eye(a.shape[0])) <= 1e-8
            # and not identity at any earlier grid point
            for t in np.linspace(cls.period / 100, cls.period * 0.99, 100):
                if frobenius(lf.matexp(a, t) - np.eye(a.shape[0])) <= 1e-6:
                    raise AssertionError(f"premature period at {t}")

    def test_lcm_overflow_reported(self):
        cls = lf.RationalClass(
            members=(1.0,) * 3,
            generator=1.0,
            ratios=((1, 2**40), (1, 3**30), (1, 5**20)),
            period=0.0,
            member_dims=(1, 1, 1),
        )
        with pytest.raises(lf.LinflowError):
            lf.class_period(cls)


class TestPeriodicDim:
    def test_rotation_full_period(self):
        assert lf.periodic_dim(rotations(1.0), TWO_PI) == 2

    def test_rotation_half_period(self):
        assert lf.periodic_dim(rotations(1.0), math.pi) == 0

    def test_two_frequencies(self):
        assert lf.periodic_dim(rotations(1.0, 2.0), TWO_PI) == 4
        assert lf.periodic_dim(rotations(1.0, 2.0), math.pi) == 2

    def test_fixed_space_always_periodic(self):
        a = np.zeros((3, 3))
        a[:2, :2] = rotations(1.0)
        assert lf.periodic_dim(a, 1.0) == 1
        assert lf.periodic_dim(a, TWO_PI) == 3

    def test_rejects_nonpositive_period(self):
        with pytest.raises(ValueError):
            lf.periodic_dim(rotations(1.0), 0.0)
