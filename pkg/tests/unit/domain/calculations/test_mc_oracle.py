"""
Tests for Monte Carlo mutual information oracles

테스트 목적:
1. 초구 표본 생성과 층화 표본 수
2. 재현성 (같은 시드 → 같은 값, worker 수 무관)
3. 적분 엔진 / 가우시안 용량 / 두 추정기 간 일치
4. 고정 직교 회전에 대한 불변성
"""

import math
import unittest

import numpy as np
from scipy import linalg

from src.domain.calculations.information import awgn_capacity, mi_multisphere
from src.domain.calculations.mc_oracle import (
    BLOCK_SIZE,
    block_generator,
    mc_mi_gaussian,
    mc_mi_radial,
    mc_mi_vector,
    sample_on_sphere,
    stratum_counts,
)
from src.domain.calculations.radial import uniform_sphere_set
from src.domain.errors import DomainError
from src.domain.models import ChannelParams


def _params(dims: int, snr_db: float) -> ChannelParams:
    return ChannelParams.from_snr_db(dims, snr_db)


class TestSampling(unittest.TestCase):
    """sample_on_sphere / stratum_counts 테스트"""

    def test_points_lie_on_sphere(self):
        """모든 표본의 노름 = 반지름"""
        rng = np.random.default_rng(1)
        points = sample_on_sphere(3.0, 4, rng, 1000)
        self.assertEqual(points.shape, (1000, 4))
        np.testing.assert_allclose(np.linalg.norm(points, axis=1), 3.0, rtol=1e-12)

    def test_one_dimension_gives_both_signs(self):
        """N=1: ±radius"""
        points = sample_on_sphere(2.0, 1, np.random.default_rng(2), 200)
        self.assertEqual(set(np.round(points[:, 0], 12)), {-2.0, 2.0})

    def test_uniform_mean_is_zero(self):
        """표본 평균 ≈ 0 (4σ 이내)"""
        points = sample_on_sphere(1.0, 2, np.random.default_rng(3), 100_000)
        tolerance = 4.0 / math.sqrt(2 * 100_000)
        self.assertLess(float(np.max(np.abs(points.mean(axis=0)))), tolerance)

    def test_invalid_radius(self):
        """반지름 ≤ 0은 DomainError"""
        with self.assertRaises(DomainError):
            sample_on_sphere(0.0, 2, np.random.default_rng(0))

    def test_stratum_counts(self):
        """최대 잉여 분배, 층마다 최소 2개"""
        self.assertEqual(stratum_counts((0.5, 0.25, 0.25), 1001), [501, 250, 250])
        self.assertEqual(sum(stratum_counts((0.3, 0.7), 1000)), 1000)
        self.assertEqual(stratum_counts((0.999, 0.001), 1000)[1], 2)

    def test_block_generators_are_distinct(self):
        """블록/태그가 다르면 다른 스트림"""
        a = block_generator(7, 1, 0).standard_normal(4)
        b = block_generator(7, 1, 1).standard_normal(4)
        c = block_generator(7, 2, 0).standard_normal(4)
        again = block_generator(7, 1, 0).standard_normal(4)
        self.assertFalse(np.array_equal(a, b))
        self.assertFalse(np.array_equal(a, c))
        np.testing.assert_array_equal(a, again)


class TestReproducibility(unittest.TestCase):
    """결정성 테스트"""

    def test_same_seed_same_estimate(self):
        """같은 입력과 시드 → 비트 단위로 같은 값"""
        params = _params(2, 10.0)
        sphere_set = uniform_sphere_set(2, params)
        first = mc_mi_vector(sphere_set, params, 5000, 123)
        second = mc_mi_vector(sphere_set, params, 5000, 123)
        self.assertEqual(first, second)

    def test_worker_count_does_not_matter(self):
        """여러 블록에서 workers=1과 workers=3 결과 동일"""
        params = _params(4, 10.0)
        sphere_set = uniform_sphere_set(2, params)
        samples = 2 * BLOCK_SIZE + 20_000
        serial = mc_mi_vector(sphere_set, params, samples, 9, workers=1)
        threaded = mc_mi_vector(sphere_set, params, samples, 9, workers=3)
        self.assertEqual(serial.estimate, threaded.estimate)
        self.assertEqual(serial.stderr, threaded.stderr)
        radial_serial = mc_mi_radial(sphere_set, params, samples, 9, workers=1)
        radial_threaded = mc_mi_radial(sphere_set, params, samples, 9, workers=3)
        self.assertEqual(radial_serial.estimate, radial_threaded.estimate)

    def test_different_seeds_differ(self):
        """시드가 다르면 값도 다름"""
        params = _params(2, 10.0)
        sphere_set = uniform_sphere_set(2, params)
        self.assertNotEqual(
            mc_mi_vector(sphere_set, params, 5000, 1).estimate,
            mc_mi_vector(sphere_set, params, 5000, 2).estimate,
        )


class TestAgreement(unittest.TestCase):
    """적분 엔진 / 닫힌 형식과의 일치"""

    def test_vector_oracle_matches_quadrature(self):
        """N=2, K=4, 10 dB: |MI − 추정| ≤ max(4σ, 5e-3)"""
        params = _params(2, 10.0)
        sphere_set = uniform_sphere_set(4, params)
        mi = mi_multisphere(sphere_set, params).bits_per_nd_use
        estimate = mc_mi_vector(sphere_set, params, 200_000, 42)
        self.assertLessEqual(abs(mi - estimate.estimate), max(4.0 * estimate.stderr, 5e-3))

    def test_single_ring_against_quadrature(self):
        """K=1, N=2, 0~30 dB"""
        for snr_db in (0.0, 10.0, 20.0, 30.0):
            params = _params(2, snr_db)
            sphere_set = uniform_sphere_set(1, params)
            mi = mi_multisphere(sphere_set, params).bits_per_nd_use
            estimate = mc_mi_vector(sphere_set, params, 100_000, 5)
            self.assertLessEqual(abs(mi - estimate.estimate), max(4.0 * estimate.stderr, 5e-3), msg=f"{snr_db} dB")

    def test_two_oracles_agree(self):
        """N=4, K=4, 15 dB: 벡터 vs 반지름 추정 (결합 4σ)"""
        params = _params(4, 15.0)
        sphere_set = uniform_sphere_set(4, params)
        vector = mc_mi_vector(sphere_set, params, 200_000, 11)
        radial = mc_mi_radial(sphere_set, params, 200_000, 11)
        combined = math.hypot(vector.stderr, radial.stderr)
        self.assertLessEqual(abs(vector.estimate - radial.estimate), 4.0 * combined)

    def test_gaussian_input_matches_capacity(self):
        """가우시안 입력 (N=4, A=5) → 용량"""
        params = ChannelParams(dims=4, sigma=1.0, snr=5.0)
        estimate = mc_mi_gaussian(params, 100_000, 3)
        self.assertLessEqual(abs(estimate.estimate - awgn_capacity(4, 5.0)), 4.0 * estimate.stderr)

    def test_vanishing_snr(self):
        """A = 1e-6: 추정값은 0 근처 (4σ 이내)"""
        params = ChannelParams(dims=2, sigma=1.0, snr=1e-6)
        estimate = mc_mi_vector(uniform_sphere_set(1, params), params, 10_000, 8)
        self.assertLessEqual(abs(estimate.estimate), 4.0 * estimate.stderr + 1e-5)

    def test_stderr_scales_with_samples(self):
        """표본 4배 → 표준오차 절반 (20% 이내)"""
        params = _params(2, 10.0)
        sphere_set = uniform_sphere_set(2, params)
        small = mc_mi_vector(sphere_set, params, 20_000, 4)
        large = mc_mi_vector(sphere_set, params, 80_000, 4)
        self.assertAlmostEqual(large.stderr / small.stderr, 0.5, delta=0.1)


class TestRotation(unittest.TestCase):
    """고정 직교 회전 테스트"""

    def test_rotation_leaves_estimate_unchanged(self):
        """X와 N 모두에 Q 적용 → 같은 추정값"""
        params = _params(4, 10.0)
        sphere_set = uniform_sphere_set(2, params)
        q, _ = linalg.qr(np.random.default_rng(5).standard_normal((4, 4)))
        plain = mc_mi_vector(sphere_set, params, 20_000, 17)
        rotated = mc_mi_vector(sphere_set, params, 20_000, 17, rotation=q)
        self.assertAlmostEqual(plain.estimate, rotated.estimate, delta=1e-10)

    def test_rejects_non_orthogonal(self):
        """직교가 아니거나 크기가 다르면 DomainError"""
        params = _params(2, 10.0)
        sphere_set = uniform_sphere_set(1, params)
        with self.assertRaises(DomainError):
            mc_mi_vector(sphere_set, params, 2000, 1, rotation=np.array([[1.0, 1.0], [0.0, 1.0]]))
        with self.assertRaises(DomainError):
            mc_mi_vector(sphere_set, params, 2000, 1, rotation=np.eye(3))


class TestValidation(unittest.TestCase):
    """입력 검증"""

    def test_too_few_samples(self):
        """표본 < 1000은 DomainError"""
        params = _params(2, 10.0)
        with self.assertRaises(DomainError):
            mc_mi_vector(uniform_sphere_set(1, params), params, 999, 1)
        with self.assertRaises(DomainError):
            mc_mi_gaussian(params, 10, 1)

    def test_seed_range(self):
        """시드는 64비트 부호 없는 정수"""
        params = _params(2, 10.0)
        with self.assertRaises(DomainError):
            mc_mi_radial(uniform_sphere_set(1, params), params, 1000, -1)
        with self.assertRaises(DomainError):
            mc_mi_radial(uniform_sphere_set(1, params), params, 1000, 2**64)


if __name__ == "__main__":
    unittest.main()
