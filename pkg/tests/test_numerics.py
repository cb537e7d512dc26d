import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fockbell.errors import DomainError
from fockbell.numerics import (
    SignedLogValue,
    inv_factorial_or_zero,
    log_factorial,
    periodic_trapezoid,
    periodic_trapezoid_nd,
    signed_log_sum,
)


class TestLogFactorial:
    def test_small_values(self):
        assert log_factorial(0) == 0.0
        assert log_factorial(1) == 0.0

    def test_ten_against_big_integer(self):
        # 10! = 3628800 exactly
        assert math.factorial(10) == 3628800
        assert log_factorial(10) == pytest.approx(math.log(3628800), rel=1e-15)
        assert log_factorial(10) == pytest.approx(15.104412573075516, rel=1e-15)

    def test_negative_raises(self):
        with pytest.raises(DomainError):
            log_factorial(-1)

    def test_recurrence_over_exact_table(self):
        # above ln(n!) ~ 4096 one ulp already exceeds 1e-12
        for n in range(1, 2001):
            tol = max(1e-12, 2 * math.ulp(log_factorial(n)))
            assert abs(log_factorial(n) - log_factorial(n - 1) - math.log(n)) <= tol

    @pytest.mark.parametrize("n", [2001, 2500, 10**4, 10**5, 10**6])
    def test_stirling_branch_matches_lgamma(self, n):
        assert log_factorial(n) == pytest.approx(math.lgamma(n + 1), rel=1e-14)

    def test_branch_seam_is_continuous(self):
        step = log_factorial(2001) - log_factorial(2000)
        assert step == pytest.approx(math.log(2001), abs=2 * math.ulp(log_factorial(2001)))


class TestSignedLogValue:
    def test_zero_ignores_magnitude(self):
        assert SignedLogValue(0, 123.0).to_real() == 0.0

    @given(st.floats(min_value=1e-300, max_value=1e300) | st.floats(min_value=-1e300, max_value=-1e-300))
    def test_round_trip(self, x):
        assert SignedLogValue.from_real(x).to_real() == pytest.approx(x, rel=1e-12)

    def test_bad_sign(self):
        with pytest.raises(DomainError):
            SignedLogValue(2, 0.0)

    def test_power_of_negative(self):
        v = SignedLogValue.from_real(-2.0)
        assert (v**3).to_real() == pytest.approx(-8.0)
        assert (v**0).to_real() == 1.0


class TestInvFactorial:
    def test_values(self):
        assert inv_factorial_or_zero(3).to_real() == pytest.approx(1 / 6, rel=1e-15)
        assert inv_factorial_or_zero(0).to_real() == 1.0
        assert inv_factorial_or_zero(-1).is_zero
        assert inv_factorial_or_zero(-7).is_zero


class TestSignedLogSum:
    def test_cancellation(self):
        assert signed_log_sum([SignedLogValue(1, 0.0), SignedLogValue(-1, 0.0)]) == 0.0

    def test_no_overflow(self):
        total = signed_log_sum([SignedLogValue(1, 700.0)] * 2)
        assert math.isfinite(total)
        assert total == pytest.approx(2 * math.exp(700.0), rel=1e-14)

    def test_empty(self):
        assert signed_log_sum([]) == 0.0

    def test_binomial_parity_term(self):
        # 4!/(2^4 2!^2) = 3/8 by exact rationals
        expected = Fraction(math.factorial(4), 2**4 * math.factorial(2) ** 2)
        assert expected == Fraction(3, 8)
        assert signed_log_sum([SignedLogValue(1, math.log(3) - math.log(8))]) == pytest.approx(0.375, rel=1e-15)

    def test_permutation_stability_across_many_decades(self):
        rng = random.Random(1234)
        terms = [
            SignedLogValue(rng.choice((-1, 1)), rng.uniform(-690.0, 690.0)) for _ in range(10_000)
        ]
        reference = signed_log_sum(terms)
        for _ in range(5):
            rng.shuffle(terms)
            assert signed_log_sum(terms) == pytest.approx(reference, rel=1e-12)


class TestPeriodicTrapezoid:
    def test_examples(self):
        assert abs(periodic_trapezoid(lambda p: np.exp(1j * p), 1)) < 1e-15
        assert periodic_trapezoid(lambda p: np.ones_like(p), 0) == pytest.approx(1.0)
        f = lambda p: np.exp(3j * p) * np.exp(-3j * p)
        assert periodic_trapezoid(f, 6) == pytest.approx(1.0, abs=1e-15)

    def test_negative_degree(self):
        with pytest.raises(DomainError):
            periodic_trapezoid(lambda p: p, -1)

    @pytest.mark.parametrize("bound", [0, 1, 5, 20, 60])
    def test_exact_on_every_harmonic_up_to_bound(self, bound):
        for k in range(-bound, bound + 1):
            value = periodic_trapezoid(lambda p: np.exp(1j * k * p), bound)
            if k == 0:
                assert value == pytest.approx(1.0, abs=1e-15)
            else:
                assert abs(value) < 1e-14

    @settings(max_examples=50)
    @given(st.lists(st.complex_numbers(max_magnitude=10, allow_nan=False), min_size=1, max_size=9))
    def test_extracts_constant_coefficient(self, coeffs):
        # random trig polynomial sum_k c_k e^{ik phi}, k = -d..d
        d = len(coeffs) // 2
        ks = range(-d, len(coeffs) - d)
        f = lambda p: sum(c * np.exp(1j * k * p) for c, k in zip(coeffs, ks))
        assert periodic_trapezoid(f, d + 1) == pytest.approx(coeffs[d], abs=1e-12)

    def test_two_dimensional(self):
        f = lambda a, b: (np.exp(1j * a) + 2) * (np.exp(-2j * b) + 3)
        assert periodic_trapezoid_nd(f, (1, 2)) == pytest.approx(6.0, abs=1e-14)
