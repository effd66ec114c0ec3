"""
Data transformation pure functions

SweepRow ↔ DataFrame 변환, 4/N 정규화, CSV 텍스트
순수 함수: 입력 행을 변환하여 새로운 형태로 반환
"""

import math
from typing import List, Sequence

import pandas as pd

from src.domain.calculations.information import awgn_capacity
from src.domain.models import SweepRow

RAW_COLUMNS = [
    "snr_db",
    "dims",
    "rings",
    "mi_bits_per_nd_use",
    "capacity_bits_per_nd_use",
    "quad_error_bits",
    "oracle_mi",
    "oracle_stderr",
    "status",
]

NORMALIZED_COLUMNS = [
    "snr4d_db",
    "dims",
    "rings",
    "rate_bits_per_4d_use",
    "capacity_bits_per_nd_use",
    "quad_error_bits",
    "oracle_mi",
    "oracle_stderr",
    "status",
]

CAPACITY_COLUMNS = ["snr_db", "dims", "capacity_bits_per_nd_use"]

# 소수점 '.' 고정, 유효숫자 12자리
FLOAT_FORMAT = "%.12g"


def _scale(value, factor: float):
    return None if value is None else value * factor


def normalize_row_4d(row: SweepRow) -> SweepRow:
    """
    두 축을 4/N로 정규화한 행

    rate·(4/N), 4-D SNR = A·(4/N) (dB로는 + 10·log₁₀(4/N)).
    오차 추정과 oracle 값도 같은 비율로 조정합니다.

    Examples:
        >>> row = SweepRow(snr_db=10.0, dims=2, rings=1, mi_bits=1.5, capacity_bits=2.0)
        >>> normalize_row_4d(row).mi_bits
        3.0
    """
    factor = 4.0 / row.dims
    return SweepRow(
        snr_db=row.snr_db + 10.0 * math.log10(factor) if row.dims != 4 else row.snr_db,
        dims=row.dims,
        rings=row.rings,
        mi_bits=_scale(row.mi_bits, factor),
        capacity_bits=row.capacity_bits * factor,
        quad_error_bits=_scale(row.quad_error_bits, factor),
        oracle_mi=_scale(row.oracle_mi, factor),
        oracle_stderr=_scale(row.oracle_stderr, factor),
        status=row.status,
    )


def rows_to_dataframe(rows: Sequence[SweepRow], normalize_4d: bool = False) -> pd.DataFrame:
    """
    SweepRow 리스트를 CSV 열 순서의 DataFrame으로 변환

    Args:
        rows: 스윕 행 (정규화 전)
        normalize_4d: True면 4/N 정규화 열 이름/값 사용

    Returns:
        RAW_COLUMNS 또는 NORMALIZED_COLUMNS 순서의 DataFrame
        (oracle 열은 생략 시에도 빈 값으로 존재)
    """
    columns = NORMALIZED_COLUMNS if normalize_4d else RAW_COLUMNS
    if not rows:
        return pd.DataFrame(columns=columns)

    source = [normalize_row_4d(r) for r in rows] if normalize_4d else list(rows)
    records = [
        [r.snr_db, r.dims, r.rings, r.mi_bits, r.capacity_bits,
         r.quad_error_bits, r.oracle_mi, r.oracle_stderr, r.status]
        for r in source
    ]
    df = pd.DataFrame(records, columns=columns)
    numeric = {c: "float64" for c in columns if c not in ("dims", "rings", "status")}
    return df.astype({**numeric, "dims": "int64", "rings": "int64"})


def capacity_table(dims_list: Sequence[int], snr_db_values: Sequence[float]) -> pd.DataFrame:
    """
    AWGN 용량 표 (N, SNR dB)

    Examples:
        >>> capacity_table([2], [0.0])['capacity_bits_per_nd_use'].tolist()
        [1.0]
    """
    records: List[list] = [
        [snr_db, dims, awgn_capacity(dims, 10.0 ** (snr_db / 10.0))]
        for dims in dims_list
        for snr_db in snr_db_values
    ]
    return pd.DataFrame(records, columns=CAPACITY_COLUMNS)


def dataframe_to_csv_text(df: pd.DataFrame) -> str:
    """
    결정적 CSV 텍스트 (로케일 무관, 12 유효숫자, 결측은 빈 칸, LF 줄바꿈)
    """
    return df.to_csv(index=False, float_format=FLOAT_FORMAT, na_rep="", lineterminator="\n")
