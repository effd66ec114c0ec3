"""
Result-based transformations using returns library

returns 라이브러리를 활용한 안전한 수치 계산
스윕 중 한 점의 실패가 전체 실행을 중단시키지 않도록 Result로 감쌉니다.
"""

from typing import Optional

from returns.result import Failure, Result, Success, safe

from src.domain.calculations.information import mi_multisphere
from src.domain.calculations.mc_oracle import mc_mi_vector
from src.domain.errors import QuadratureError
from src.domain.models import (
    ChannelParams,
    MCEstimate,
    MIResult,
    QuadratureConfig,
    SphereSet,
    SweepPoint,
    SweepRow,
)

STATUS_OK = "ok"
STATUS_NONCONVERGED = "nonconverged"


@safe
def mi_multisphere_safe(
    sphere_set: SphereSet,
    params: ChannelParams,
    cfg: QuadratureConfig,
) -> MIResult:
    """
    mi_multisphere를 Result로 감싼 버전

    Returns:
        Result[MIResult, Exception]
        - Success: 수렴한 결과
        - Failure: QuadratureError (best 첨부) 또는 DomainError
    """
    return mi_multisphere(sphere_set, params, cfg)


@safe
def mc_mi_vector_safe(
    sphere_set: SphereSet,
    params: ChannelParams,
    samples: int,
    seed: int,
    workers: int = 1,
) -> MCEstimate:
    """mc_mi_vector를 Result로 감싼 버전"""
    return mc_mi_vector(sphere_set, params, samples, seed, workers=workers)


def sweep_row_from_result(
    point: SweepPoint,
    capacity: float,
    mi_result: Result[MIResult, Exception],
    oracle: Optional[Result[MCEstimate, Exception]] = None,
) -> SweepRow:
    """
    계산 결과를 스윕 행으로 변환

    - Success → status "ok"
    - QuadratureError → status "nonconverged", 최선 추정값 기록
    - 그 외 예외 → status "error: ..." (MI 열은 비움)

    Examples:
        >>> point = SweepPoint(dims=2, rings=1, snr_db=0.0)
        >>> mi = Success(MIResult(bits_per_nd_use=0.5, error_estimate=1e-12, evaluations=10))
        >>> sweep_row_from_result(point, 1.0, mi).status
        'ok'
    """
    mi_bits: Optional[float] = None
    error: Optional[float] = None

    if isinstance(mi_result, Success):
        value = mi_result.unwrap()
        mi_bits, error, status = value.bits_per_nd_use, value.error_estimate, STATUS_OK
    else:
        exc = mi_result.failure()
        if isinstance(exc, QuadratureError) and isinstance(exc.best, MIResult):
            mi_bits, error = exc.best.bits_per_nd_use, exc.best.error_estimate
            status = STATUS_NONCONVERGED
        elif isinstance(exc, QuadratureError):
            status = STATUS_NONCONVERGED
        else:
            status = f"error: {exc}"

    oracle_mi: Optional[float] = None
    oracle_stderr: Optional[float] = None
    if oracle is not None:
        if isinstance(oracle, Failure):
            status = f"error: oracle failed ({oracle.failure()})"
        else:
            estimate = oracle.unwrap()
            oracle_mi, oracle_stderr = estimate.estimate, estimate.stderr

    return SweepRow(
        snr_db=point.snr_db,
        dims=point.dims,
        rings=point.rings,
        mi_bits=mi_bits,
        capacity_bits=capacity,
        quad_error_bits=error,
        oracle_mi=oracle_mi,
        oracle_stderr=oracle_stderr,
        status=status,
    )
