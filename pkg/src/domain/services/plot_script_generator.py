"""
PlotScriptGenerator - 스윕 CSV용 gnuplot 스크립트 생성

이미지를 직접 렌더링하지 않고 CSV 옆에 둘 평문 스크립트를 만듭니다.
"""

from pathlib import Path
from typing import List, Sequence


class PlotScriptGenerator:
    """
    rates CSV를 그리는 gnuplot 스크립트 생성기

    (N, K) 조합마다 전송률 곡선 하나, N마다 용량 곡선 하나를 그립니다.

    Examples:
        >>> script = PlotScriptGenerator().generate("rates.csv", [2, 4], [1, 8], normalize_4d=True)
        >>> "bits per 4-D channel use" in script
        True
    """

    def generate(
        self,
        csv_path: str,
        dims_list: Sequence[int],
        rings_list: Sequence[int],
        normalize_4d: bool = False,
    ) -> str:
        """
        Args:
            csv_path: 스크립트 기준 CSV 경로
            dims_list: 그릴 차원 목록
            rings_list: 그릴 초구 수 목록
            normalize_4d: 4/N 정규화 CSV 여부 (축 이름만 달라짐)

        Returns:
            gnuplot 스크립트 텍스트
        """
        if normalize_4d:
            xlabel, ylabel = "4-D SNR [dB]", "bits per 4-D channel use"
        else:
            xlabel, ylabel = "SNR [dB]", "bits per N-D channel use"

        data = Path(csv_path).name
        curves: List[str] = []
        for n in dims_list:
            for k in rings_list:
                curves.append(
                    f"'{data}' using 1:(($2=={n} && $3=={k}) ? $4 : NaN) "
                    f"with linespoints title 'N={n}, K={k}'"
                )
            curves.append(
                f"'{data}' using 1:($2=={n} ? $5 : NaN) with lines dashtype 2 title 'capacity N={n}'"
            )

        lines = [
            "set datafile separator ','",
            "set datafile missing ''",
            "set key top left",
            "set grid",
            f"set xlabel '{xlabel}'",
            f"set ylabel '{ylabel}'",
            "set terminal pngcairo size 900,600",
            f"set output '{Path(data).with_suffix('.png').name}'",
            "plot \\",
            ",\\\n".join(f"  {c}" for c in curves),
        ]
        return "\n".join(lines) + "\n"
