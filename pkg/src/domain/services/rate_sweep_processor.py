"""
RateSweepProcessor - (N, K, SNR) 격자 스윕 실행 서비스

순수 계산 함수(domain.calculations)를 조합하여 스윕, 용량 표,
oracle 교차 검증, 2-D/4-D 비교를 수행합니다.
"""

from concurrent.futures import ProcessPoolExecutor
from functools import partial
from typing import List, Optional, Sequence

import pandas as pd

from src.domain.calculations.information import mi_multisphere
from src.domain.calculations.mc_oracle import mc_mi_radial, mc_mi_vector
from src.domain.calculations.pipeline import (
    crossover_report,
    evaluate_point,
    pipe,
    sphere_set_for,
    sweep_points,
)
from src.domain.calculations.transformations import (
    capacity_table,
    dataframe_to_csv_text,
    rows_to_dataframe,
)
from src.domain.models import (
    ChannelParams,
    CrossoverReport,
    OracleReport,
    QuadratureConfig,
    SphereSet,
    SweepPoint,
    SweepRow,
    SweepSpec,
)


class RateSweepProcessor:
    """
    멀티스피어 달성 전송률 스윕 프로세서

    격자 점은 workers > 1이면 프로세스 풀에서 동시에 평가되지만,
    결과 행은 항상 (N, K, SNR) 순서로 반환됩니다.

    Examples:
        >>> processor = RateSweepProcessor(QuadratureConfig(), workers=1)
        >>> spec = SweepSpec(dims_list=(2,), rings_list=(1,), snr_db_start=0, snr_db_stop=0)
        >>> rows = processor.run(spec)
        >>> rows[0].capacity_bits
        1.0
    """

    def __init__(self, cfg: QuadratureConfig = QuadratureConfig(), workers: int = 1, verbose: bool = True):
        self.cfg = cfg
        self.workers = max(1, workers)
        self.verbose = verbose

    def _log(self, message: str) -> None:
        if self.verbose:
            print(f"[RateSweepProcessor] {message}")

    def run(self, spec: SweepSpec) -> List[SweepRow]:
        """
        스윕 실행

        Args:
            spec: 스윕 설정

        Returns:
            격자 순서의 SweepRow 리스트 (실패한 점은 status로 표시)
        """
        points = sweep_points(spec)
        self._log(f"Evaluating {len(points)} grid points with {self.workers} worker(s)")

        evaluate = partial(evaluate_point, spec=spec, cfg=self.cfg)
        if self.workers == 1:
            rows = [evaluate(p) for p in points]
        else:
            with ProcessPoolExecutor(max_workers=self.workers) as pool:
                rows = list(pool.map(evaluate, points))

        for row in rows:
            mi = "n/a" if row.mi_bits is None else f"{row.mi_bits:.6f}"
            self._log(f"N={row.dims} K={row.rings} snr_db={row.snr_db:g} -> {mi} bits ({row.status})")

        failed = sum(1 for r in rows if r.status != "ok")
        if failed:
            self._log(f"{failed} row(s) did not complete cleanly")
        return rows

    @staticmethod
    def to_csv(rows: Sequence[SweepRow], normalize_4d: bool = False) -> str:
        """행 리스트 → CSV 텍스트"""
        return pipe(rows, lambda r: rows_to_dataframe(r, normalize_4d), dataframe_to_csv_text)

    def capacity_table(self, dims_list: Sequence[int], snr_db_values: Sequence[float]) -> pd.DataFrame:
        """AWGN 용량 표"""
        table = capacity_table(dims_list, snr_db_values)
        self._log(f"Capacity table: {len(table)} rows")
        return table

    def oracle_point(
        self,
        dims: int,
        rings: int,
        snr_db: float,
        samples: int,
        seed: int,
        custom_set: Optional[SphereSet] = None,
    ) -> OracleReport:
        """
        한 점에서 적분 엔진과 두 Monte Carlo 추정기를 비교

        Raises:
            QuadratureError: MI 적분 미수렴
            DomainError: 잘못된 표본 수 또는 시드
        """
        point = SweepPoint(dims=dims, rings=custom_set.rings if custom_set else rings, snr_db=snr_db)
        params = ChannelParams.from_snr_db(dims, snr_db)
        sphere_set = sphere_set_for(point, params, custom_set)

        mi = mi_multisphere(sphere_set, params, self.cfg)
        vector = mc_mi_vector(sphere_set, params, samples, seed, workers=self.workers)
        radial = mc_mi_radial(sphere_set, params, samples, seed, workers=self.workers)
        report = OracleReport(
            dims=dims,
            rings=point.rings,
            snr_db=snr_db,
            mi_bits=mi.bits_per_nd_use,
            quad_error_bits=mi.error_estimate,
            vector=vector,
            radial=radial,
        )
        self._log(
            f"N={dims} K={point.rings} snr_db={snr_db:g}: quadrature {mi.bits_per_nd_use:.6f}, "
            f"vector {vector.estimate:.6f}±{vector.stderr:.1e}, radial {radial.estimate:.6f}±{radial.stderr:.1e}"
        )
        return report

    def crossover(self, snr4d_db: float, rings: int) -> CrossoverReport:
        """두 개의 2-D 멀티링 vs 하나의 4-D 멀티스피어"""
        report = crossover_report(snr4d_db, rings, self.cfg)
        winner = "two 2-D" if report.two_2d_better else "one 4-D"
        self._log(
            f"snr4d_db={snr4d_db:g} K={rings}: R2={report.rate_two_2d:.6f}, "
            f"R4={report.rate_one_4d:.6f} -> {winner} better"
        )
        return report
