"""
Tests for log-domain special functions

테스트 목적:
1. ln(I_ν(x)e^{-x})를 고정밀(mpmath) 기준값과 비교
2. 작은 x 급수 / 반정수 닫힌 형식 / scipy 경로의 경계 연속성
3. 점화식과 단조성 성질 (hypothesis)
4. 정의역 오류
"""

import math
import unittest

import mpmath
import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from src.domain.calculations.specfun import (
    HALF_INTEGER_SWITCH,
    SERIES_SWITCH,
    log_bessel_i_scaled,
    log_gamma,
)
from src.domain.errors import DomainError

mpmath.mp.dps = 40


def _reference(nu: float, x: float) -> float:
    """mpmath 기준값 I_ν(x)·e^{-x}"""
    return float(mpmath.besseli(nu, x) * mpmath.exp(-x))


class TestLogBesselAgainstReference(unittest.TestCase):
    """mpmath 기준값 비교"""

    def test_orders_used_by_dimensions_two_to_eight(self):
        """ν ∈ {0, 1/2, 1, 3/2, 2, 3}, x ∈ [1e-3, 1e6] 상대 오차 1e-10 이내"""
        for nu in (0.0, 0.5, 1.0, 1.5, 2.0, 3.0):
            for x in np.logspace(-3, 6, 37):
                expected = _reference(nu, float(x))
                got = math.exp(log_bessel_i_scaled(nu, float(x)))
                self.assertLessEqual(abs(got - expected) / expected, 1e-10, msg=f"nu={nu}, x={x}")

    def test_values_around_switch_points(self):
        """급수/닫힌 형식 전환점 양쪽에서 기준값과 일치"""
        for switch in (SERIES_SWITCH, HALF_INTEGER_SWITCH):
            for x in (switch * (1 - 1e-9), switch, switch * (1 + 1e-9)):
                for nu in (0.0, 0.5, 1.5):
                    expected = _reference(nu, x)
                    got = math.exp(log_bessel_i_scaled(nu, x))
                    self.assertLessEqual(abs(got - expected) / expected, 1e-10)

    def test_known_closed_form(self):
        """ν = 1/2: I·e^{-x} = √(2/(πx))·sinh(x)·e^{-x}"""
        expected = math.log(math.sqrt(1.0 / math.pi) * math.sinh(2.0) * math.exp(-2.0))
        self.assertAlmostEqual(log_bessel_i_scaled(0.5, 2.0), expected, delta=1e-12)
        self.assertAlmostEqual(expected, -1.2839976, places=6)

    def test_large_argument_asymptote(self):
        """x ≥ 1e4에서 I_ν(x)e^{-x}·√(2πx) → 1"""
        for nu in (0.0, 1.0, 1.5):
            for x in (1e4, 1e5, 1e6):
                scaled = math.exp(log_bessel_i_scaled(nu, x)) * math.sqrt(2 * math.pi * x)
                self.assertAlmostEqual(scaled, 1.0, delta=1e-3)


class TestLogBesselEdges(unittest.TestCase):
    """경계값과 배열 입력"""

    def test_zero_argument(self):
        """x = 0: ν = 0이면 0, ν > 0이면 -inf"""
        self.assertEqual(log_bessel_i_scaled(0.0, 0.0), 0.0)
        self.assertEqual(log_bessel_i_scaled(1.0, 0.0), -math.inf)
        self.assertEqual(log_bessel_i_scaled(0.5, 0.0), -math.inf)

    def test_array_shape_preserved(self):
        """배열 입력은 같은 모양으로 반환"""
        x = np.array([[0.0, 1.0], [10.0, 1e5]])
        out = log_bessel_i_scaled(1.0, x)
        self.assertEqual(out.shape, (2, 2))
        self.assertTrue(np.all(np.isfinite(out[:, 1])))

    def test_no_overflow_at_high_snr(self):
        """x = 1e6에서도 유한한 값"""
        self.assertTrue(math.isfinite(log_bessel_i_scaled(0.0, 1e6)))

    def test_domain_errors(self):
        """음수/비유한 입력은 DomainError"""
        with self.assertRaises(DomainError):
            log_bessel_i_scaled(0.0, -1.0)
        with self.assertRaises(DomainError):
            log_bessel_i_scaled(-0.5, 1.0)
        with self.assertRaises(DomainError):
            log_bessel_i_scaled(0.0, math.nan)
        with self.assertRaises(DomainError):
            log_bessel_i_scaled(0.0, np.array([1.0, math.inf]))

    def test_domain_error_is_value_error(self):
        """DomainError는 ValueError 하위 클래스"""
        with self.assertRaises(ValueError):
            log_bessel_i_scaled(0.0, -1.0)


class TestLogBesselProperties(unittest.TestCase):
    """hypothesis 성질 테스트"""

    @settings(max_examples=200, deadline=None)
    @given(
        nu=st.sampled_from([1.0, 1.5, 2.0, 2.5]),
        x=st.floats(min_value=0.1, max_value=100.0),
    )
    def test_recurrence(self, nu, x):
        """I_{ν+1}(x) = I_{ν-1}(x) − (2ν/x)·I_ν(x) (지수 스케일 동일)"""
        lower = math.exp(log_bessel_i_scaled(nu - 1.0, x))
        mid = math.exp(log_bessel_i_scaled(nu, x))
        upper = math.exp(log_bessel_i_scaled(nu + 1.0, x))
        self.assertLessEqual(abs(upper - (lower - 2.0 * nu / x * mid)), 1e-8 * upper + 1e-300)

    @settings(max_examples=200, deadline=None)
    @given(
        nu=st.floats(min_value=0.0, max_value=5.0),
        step=st.floats(min_value=0.25, max_value=2.0),
        x=st.floats(min_value=1e-3, max_value=1e4),
    )
    def test_decreasing_in_order(self, nu, step, x):
        """x > 0 고정 시 ν에 대해 감소"""
        self.assertLessEqual(log_bessel_i_scaled(nu + step, x), log_bessel_i_scaled(nu, x) + 1e-12)


class TestLogGamma(unittest.TestCase):
    """log_gamma 테스트"""

    def test_known_values(self):
        """Γ(1) = 1, Γ(1/2) = √π, Γ(5) = 24"""
        self.assertEqual(log_gamma(1.0), 0.0)
        self.assertAlmostEqual(log_gamma(0.5), 0.5 * math.log(math.pi), places=12)
        self.assertAlmostEqual(log_gamma(5.0), math.log(24.0), places=12)

    def test_recurrence(self):
        """ln Γ(x+1) = ln Γ(x) + ln x"""
        for x in (0.3, 1.7, 12.5, 250.0):
            self.assertAlmostEqual(log_gamma(x + 1.0), log_gamma(x) + math.log(x), delta=1e-10 * max(1.0, log_gamma(x)))

    def test_invalid_arguments(self):
        """x ≤ 0 또는 비유한 입력은 DomainError"""
        for x in (0.0, -1.0, math.inf, math.nan):
            with self.assertRaises(DomainError):
                log_gamma(x)


if __name__ == "__main__":
    unittest.main()
