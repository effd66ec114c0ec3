"""
Pipeline utilities for functional composition

스윕 격자 생성과 한 점 평가를 순수 함수로 조합합니다.
"""

import math
from typing import Callable, List, Optional, TypeVar

from src.domain.calculations.information import awgn_capacity, mi_multisphere
from src.domain.calculations.radial import average_power, uniform_sphere_set
from src.domain.calculations.result_transformations import (
    mc_mi_vector_safe,
    mi_multisphere_safe,
    sweep_row_from_result,
)
from src.domain.models import (
    ChannelParams,
    CrossoverReport,
    QuadratureConfig,
    SphereSet,
    SweepPoint,
    SweepRow,
    SweepSpec,
)

T = TypeVar("T")


def pipe(data: T, *funcs: Callable) -> T:
    """
    간단한 파이프라인 함수

    데이터를 여러 함수에 순차적으로 통과시킵니다.

    Examples:
        >>> def add_one(x): return x + 1
        >>> def double(x): return x * 2
        >>> pipe(5, add_one, double)
        12
    """
    result = data
    for func in funcs:
        result = func(result)
    return result


def db_to_linear(snr_db: float) -> float:
    """10^{dB/10}"""
    return 10.0 ** (snr_db / 10.0)


def sweep_points(spec: SweepSpec) -> List[SweepPoint]:
    """
    (N, K, SNR) 격자를 결정적 순서로 나열

    custom_set이 있으면 K는 그 집합의 초구 수 하나뿐입니다.

    Examples:
        >>> spec = SweepSpec(dims_list=(2, 4), rings_list=(1,), snr_db_start=0, snr_db_stop=1)
        >>> [(p.dims, p.snr_db) for p in sweep_points(spec)]
        [(2, 0.0), (2, 1.0), (4, 0.0), (4, 1.0)]
    """
    rings_list = (spec.custom_set.rings,) if spec.custom_set is not None else spec.rings_list
    return [
        SweepPoint(dims=dims, rings=rings, snr_db=snr_db)
        for dims in spec.dims_list
        for rings in rings_list
        for snr_db in spec.snr_db_values()
    ]


def scale_to_power(sphere_set: SphereSet, params: ChannelParams) -> SphereSet:
    """
    반지름 비율과 확률은 유지하고 평균 전력이 2σ²A가 되도록 반지름을 조정

    Examples:
        >>> params = ChannelParams(dims=2, sigma=1.0, snr=5.0)
        >>> scale_to_power(SphereSet(radii=(1.0, 2.0), probs=(0.5, 0.5)), params).radii
        (2.0, 4.0)
    """
    factor = math.sqrt(params.signal_energy / average_power(sphere_set))
    return SphereSet(radii=tuple(s * factor for s in sphere_set.radii), probs=sphere_set.probs)


def sphere_set_for(point: SweepPoint, params: ChannelParams, custom_set: Optional[SphereSet] = None) -> SphereSet:
    """격자 점의 입력 집합 (사용자 지정 또는 균등 간격)"""
    if custom_set is not None:
        return scale_to_power(custom_set, params)
    return uniform_sphere_set(point.rings, params)


def evaluate_point(point: SweepPoint, spec: SweepSpec, cfg: QuadratureConfig, workers: int = 1) -> SweepRow:
    """
    한 격자 점의 MI / 용량 / (선택) oracle 계산

    실패는 예외 대신 행의 status로 기록됩니다.
    """
    params = ChannelParams.from_snr_db(point.dims, point.snr_db)
    sphere_set = sphere_set_for(point, params, spec.custom_set)
    capacity = awgn_capacity(point.dims, params.snr)
    oracle = (
        mc_mi_vector_safe(sphere_set, params, spec.oracle_samples, spec.seed, workers)
        if spec.oracle_samples > 0
        else None
    )
    return sweep_row_from_result(point, capacity, mi_multisphere_safe(sphere_set, params, cfg), oracle)


def crossover_report(snr4d_db: float, rings: int, cfg: QuadratureConfig) -> CrossoverReport:
    """
    두 개의 독립 2-D 멀티링 vs 하나의 4-D 멀티스피어

    R₂ = 2·MI(N=2, K, A₄d/2), R₄ = MI(N=4, K, A₄d) (선형 SNR,
    각 2-D 분포가 4-D 에너지의 절반을 가짐).

    Raises:
        QuadratureError: 두 적분 중 하나라도 미수렴
    """
    snr4d = db_to_linear(snr4d_db)
    two_d = ChannelParams(dims=2, sigma=1.0, snr=snr4d / 2.0)
    four_d = ChannelParams(dims=4, sigma=1.0, snr=snr4d)
    mi_2d = mi_multisphere(uniform_sphere_set(rings, two_d), two_d, cfg)
    mi_4d = mi_multisphere(uniform_sphere_set(rings, four_d), four_d, cfg)
    return CrossoverReport(
        snr4d_db=snr4d_db,
        rings=rings,
        rate_two_2d=2.0 * mi_2d.bits_per_nd_use,
        rate_one_4d=mi_4d.bits_per_nd_use,
        error_bound=2.0 * mi_2d.error_estimate + mi_4d.error_estimate,
    )
