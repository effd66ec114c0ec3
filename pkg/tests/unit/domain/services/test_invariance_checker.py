"""
Tests for InvarianceChecker

테스트 목적:
1. 입력 앙상블 생성 (크기, 길이, 평균 전력)
2. 항등/Haar 유니터리 검정
3. 리포트 출력 형식
"""

import unittest

import numpy as np

from src.domain.calculations.manakov import pointwise_norm
from src.domain.models import JonesUnitary, ManakovCheckConfig
from src.domain.services.invariance_checker import InvarianceChecker

SMALL = ManakovCheckConfig(
    beta2=-2.17e-26, gamma=1.3e-3, length=1e5, steps=4, noise_psd=1e-21,
    samples=128, dt=1e-11, trials=100, seed=42, power=1e-3, rings=2, ensemble_size=4,
)


class TestInvarianceChecker(unittest.TestCase):
    """InvarianceChecker 테스트"""

    def setUp(self):
        self.checker = InvarianceChecker(verbose=False)

    def test_build_ensemble(self):
        """ensemble_size개 필드, 평균 심볼 전력 ≈ power"""
        ensemble = self.checker.build_ensemble(SMALL)
        self.assertEqual(len(ensemble), 4)
        self.assertTrue(all(f.samples == 128 for f in ensemble))
        power = float(np.mean([np.mean(pointwise_norm(f) ** 2) for f in ensemble]))
        self.assertAlmostEqual(power, SMALL.power, delta=0.3 * SMALL.power)
        self.assertFalse(np.array_equal(ensemble[0].ex, ensemble[1].ex))

    def test_unitary_choice(self):
        """identity 플래그와 시드 결정성"""
        self.assertTrue(np.array_equal(self.checker.unitary(SMALL, identity=True).u, np.eye(2)))
        first = self.checker.unitary(SMALL)
        second = self.checker.unitary(SMALL)
        self.assertTrue(np.array_equal(first.u, second.u))
        self.assertIsInstance(first, JonesUnitary)

    def test_identity_check_passes(self):
        """항등 유니터리 → 통과, 모든 z = 0"""
        report = self.checker.check(SMALL, identity=True)
        self.assertTrue(report.passed)
        self.assertTrue(all(c.z_score == 0.0 for c in report.rotated))

    def test_haar_check_passes(self):
        """Haar 유니터리 → 통과"""
        self.assertTrue(self.checker.check(SMALL).passed)

    def test_format_report(self):
        """통계량 5개 × 2 + 잔차 2줄 + 결과 1줄"""
        lines = self.checker.format_report(self.checker.check(SMALL, identity=True))
        self.assertEqual(len(lines), 13)
        self.assertTrue(lines[0].startswith("rotated"))
        self.assertEqual(lines[-1], "result: PASS over 100 trials")


if __name__ == "__main__":
    unittest.main()
