"""
Tests for data transformation pure functions

테스트 목적:
1. 4/N 정규화
2. SweepRow → DataFrame 열 순서와 dtype
3. 결정적 CSV 텍스트 (12 유효숫자, 빈 결측, LF)
"""

import math
import unittest

import pandas as pd

from src.domain.calculations.transformations import (
    CAPACITY_COLUMNS,
    NORMALIZED_COLUMNS,
    RAW_COLUMNS,
    capacity_table,
    dataframe_to_csv_text,
    normalize_row_4d,
    rows_to_dataframe,
)
from src.domain.models import SweepRow


def _row(**overrides) -> SweepRow:
    values = dict(snr_db=10.0, dims=2, rings=1, mi_bits=1.5, capacity_bits=2.0, quad_error_bits=1e-10)
    values.update(overrides)
    return SweepRow(**values)


class TestNormalizeRow4d(unittest.TestCase):
    """normalize_row_4d 테스트"""

    def test_two_dimensions(self):
        """N=2: 전송률 ×2, SNR + 10·log₁₀2 dB"""
        row = normalize_row_4d(_row(oracle_mi=1.4, oracle_stderr=0.01))
        self.assertEqual(row.mi_bits, 3.0)
        self.assertEqual(row.capacity_bits, 4.0)
        self.assertAlmostEqual(row.snr_db, 10.0 + 10.0 * math.log10(2.0), places=12)
        self.assertAlmostEqual(row.oracle_mi, 2.8, places=12)
        self.assertAlmostEqual(row.oracle_stderr, 0.02, places=12)

    def test_four_dimensions_unchanged(self):
        """N=4: 그대로"""
        row = _row(dims=4)
        self.assertEqual(normalize_row_4d(row), row)

    def test_missing_values_stay_missing(self):
        """None 값은 None 유지"""
        row = normalize_row_4d(_row(mi_bits=None, quad_error_bits=None, status="error: x"))
        self.assertIsNone(row.mi_bits)
        self.assertIsNone(row.oracle_mi)
        self.assertEqual(row.status, "error: x")


class TestRowsToDataframe(unittest.TestCase):
    """rows_to_dataframe 테스트"""

    def test_raw_columns(self):
        """정규화 전 열 순서, oracle 열은 항상 존재"""
        df = rows_to_dataframe([_row(), _row(snr_db=11.0)])
        self.assertEqual(list(df.columns), RAW_COLUMNS)
        self.assertEqual(len(df), 2)
        self.assertTrue(df["oracle_mi"].isna().all())
        self.assertEqual(df["dims"].dtype, "int64")

    def test_normalized_columns(self):
        """정규화 열 이름과 값"""
        df = rows_to_dataframe([_row()], normalize_4d=True)
        self.assertEqual(list(df.columns), NORMALIZED_COLUMNS)
        self.assertEqual(df.loc[0, "rate_bits_per_4d_use"], 3.0)

    def test_normalized_header_replaces_only_snr_and_rate(self):
        """정규화 헤더는 첫 열과 전송률 열만 바뀜, 용량 값은 같은 정규화"""
        raw = rows_to_dataframe([_row()])
        df = rows_to_dataframe([_row()], normalize_4d=True)
        changed = [(a, b) for a, b in zip(RAW_COLUMNS, NORMALIZED_COLUMNS) if a != b]
        self.assertEqual(changed, [("snr_db", "snr4d_db"), ("mi_bits_per_nd_use", "rate_bits_per_4d_use")])
        self.assertEqual(df.loc[0, "capacity_bits_per_nd_use"], 2 * raw.loc[0, "capacity_bits_per_nd_use"])
        self.assertLessEqual(df.loc[0, "rate_bits_per_4d_use"], df.loc[0, "capacity_bits_per_nd_use"])

    def test_empty_rows(self):
        """빈 입력 → 열만 있는 DataFrame"""
        df = rows_to_dataframe([])
        self.assertTrue(df.empty)
        self.assertEqual(list(df.columns), RAW_COLUMNS)


class TestCapacityAndCsv(unittest.TestCase):
    """capacity_table / dataframe_to_csv_text 테스트"""

    def test_capacity_table(self):
        """(N/2)log₂(1 + 2A/N)"""
        table = capacity_table([2, 4], [0.0, 10.0])
        self.assertEqual(list(table.columns), CAPACITY_COLUMNS)
        self.assertEqual(len(table), 4)
        self.assertEqual(table.loc[0, "capacity_bits_per_nd_use"], 1.0)
        self.assertAlmostEqual(table.loc[3, "capacity_bits_per_nd_use"], 2.0 * math.log2(6.0), places=12)

    def test_csv_text_format(self):
        """12 유효숫자, 빈 결측, LF 줄바꿈, 인덱스 없음"""
        text = dataframe_to_csv_text(rows_to_dataframe([_row(mi_bits=1.0 / 3.0)]))
        lines = text.split("\n")
        self.assertEqual(lines[0], ",".join(RAW_COLUMNS))
        self.assertEqual(lines[1], "10,2,1,0.333333333333,2,1e-10,,,ok")
        self.assertTrue(text.endswith("\n"))
        self.assertNotIn("\r", text)

    def test_csv_text_is_deterministic(self):
        """같은 표 → 같은 텍스트"""
        df = pd.DataFrame({"a": [0.1 + 0.2, 1e-20], "b": [1, 2]})
        self.assertEqual(dataframe_to_csv_text(df), dataframe_to_csv_text(df.copy()))
        self.assertIn("0.3,1", dataframe_to_csv_text(df))


if __name__ == "__main__":
    unittest.main()
