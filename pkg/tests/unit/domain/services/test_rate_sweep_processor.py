"""
Tests for RateSweepProcessor

테스트 목적:
1. 스윕 실행 순서와 행 내용
2. worker 수와 무관한 결정적 CSV
3. oracle 교차 검증과 2-D/4-D 비교
"""

import io
import unittest
from contextlib import redirect_stdout

from src.domain.calculations.information import awgn_capacity
from src.domain.models import QuadratureConfig, SphereSet, SweepSpec
from src.domain.services.rate_sweep_processor import RateSweepProcessor


class TestRateSweepProcessor(unittest.TestCase):
    """RateSweepProcessor 테스트"""

    def setUp(self):
        self.processor = RateSweepProcessor(QuadratureConfig(), verbose=False)
        self.spec = SweepSpec(dims_list=(2, 4), rings_list=(1, 2), snr_db_start=0, snr_db_stop=10, snr_db_step=5)

    def test_run_rows(self):
        """격자 순서의 행, 모두 ok, MI ≤ 용량"""
        rows = self.processor.run(self.spec)
        self.assertEqual(len(rows), 12)
        self.assertEqual([(r.dims, r.rings, r.snr_db) for r in rows[:3]], [(2, 1, 0.0), (2, 1, 5.0), (2, 1, 10.0)])
        for row in rows:
            self.assertEqual(row.status, "ok")
            self.assertLessEqual(row.mi_bits, row.capacity_bits + 1e-9)

    def test_csv_is_worker_independent(self):
        """workers=1과 workers=2의 CSV 텍스트가 동일"""
        serial = self.processor.to_csv(self.processor.run(self.spec))
        parallel = RateSweepProcessor(QuadratureConfig(), workers=2, verbose=False)
        self.assertEqual(parallel.to_csv(parallel.run(self.spec)), serial)

    def test_normalized_csv_header(self):
        """정규화 CSV는 4-D 열 이름"""
        text = self.processor.to_csv(self.processor.run(self.spec), normalize_4d=True)
        self.assertTrue(text.startswith("snr4d_db,dims,rings,rate_bits_per_4d_use"))

    def test_custom_set(self):
        """사용자 지정 집합 → K = 집합 크기"""
        custom = SphereSet(radii=(1.0, 3.0), probs=(0.5, 0.5))
        spec = SweepSpec(dims_list=(2,), snr_db_start=10, snr_db_stop=10, custom_set=custom)
        rows = self.processor.run(spec)
        self.assertEqual([r.rings for r in rows], [2])

    def test_capacity_table(self):
        """용량 표 값"""
        table = self.processor.capacity_table([2], [0.0, 10.0])
        self.assertAlmostEqual(table.loc[1, "capacity_bits_per_nd_use"], awgn_capacity(2, 10.0), places=12)

    def test_oracle_point(self):
        """세 추정이 모두 일치"""
        report = self.processor.oracle_point(2, 2, 10.0, 50_000, 42)
        self.assertEqual(report.rings, 2)
        self.assertLessEqual(abs(report.mi_bits - report.vector.estimate), max(4 * report.vector.stderr, 5e-3))
        self.assertLessEqual(abs(report.mi_bits - report.radial.estimate), max(4 * report.radial.stderr, 5e-3))

    def test_crossover(self):
        """K=1, 25 dB → 4-D 우세"""
        self.assertFalse(self.processor.crossover(25.0, 1).two_2d_better)

    def test_verbose_logging(self):
        """verbose=True면 태그가 붙은 진행 로그 출력"""
        buffer = io.StringIO()
        with redirect_stdout(buffer):
            RateSweepProcessor(QuadratureConfig()).run(
                SweepSpec(dims_list=(2,), snr_db_start=0, snr_db_stop=0)
            )
        self.assertIn("[RateSweepProcessor] Evaluating 1 grid points", buffer.getvalue())


if __name__ == "__main__":
    unittest.main()
