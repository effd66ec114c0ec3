"""
CSV report writer

ReportWriterPort 구현: 결정적 CSV 텍스트와 부속 스크립트를 파일로 저장
"""

from pathlib import Path

import pandas as pd
from returns.result import safe

from src.domain.calculations.transformations import dataframe_to_csv_text
from src.domain.ports.report_writer_port import ReportWriterPort


class CsvWriterAdapter(ReportWriterPort):
    """
    CSV/텍스트 파일 작성기

    상위 디렉토리가 없으면 만들고, 항상 UTF-8과 LF 줄바꿈으로 저장합니다.

    Examples:
        >>> writer = CsvWriterAdapter()
        >>> writer.write_table(df, "reports/rates.csv")
        '/abs/path/reports/rates.csv'
    """

    def __init__(self, verbose: bool = True):
        self.verbose = verbose

    def _write(self, text: str, path: str) -> str:
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        with open(target, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        if self.verbose:
            print(f"[CsvWriterAdapter] Saved {target}")
        return str(target.resolve())

    def write_table(self, df: pd.DataFrame, path: str) -> str:
        return self._write(dataframe_to_csv_text(df), path)

    def write_text(self, text: str, path: str) -> str:
        return self._write(text, path)

    @safe
    def write_table_safe(self, df: pd.DataFrame, path: str) -> str:
        """
        write_table의 Result 버전

        Returns:
            Result[str, Exception] - 저장된 절대 경로 또는 I/O 오류
        """
        return self.write_table(df, path)
