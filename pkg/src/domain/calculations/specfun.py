"""
Special functions in the log domain

지수 스케일 제1종 변형 Bessel 함수와 로그 감마 함수
- ln(I_ν(x)·e^{-x}) 형태로 저장하여 고 SNR 인자(~10⁶)에서도 overflow 없음
- 반환값 -inf는 log 0을 뜻하며, 이후의 로그 연산에서 흡수원으로 취급

순수 함수: 상태 없음, 재진입 가능
"""

import math
from typing import Union

import numpy as np
from scipy import special

from src.domain.errors import DomainError

ArrayLike = Union[float, np.ndarray]

# 이 값 이하의 x에서는 로그 멱급수를 사용 (scipy.ive가 작은 x, 큰 ν에서 underflow)
SERIES_SWITCH = 1e-2
SERIES_TERMS = 8

# 반정수 차수 닫힌 형식은 상쇄 오차가 없는 구간에서만 사용
HALF_INTEGER_SWITCH = 1.0


def _check_order(nu: float) -> None:
    if not math.isfinite(nu) or nu < 0:
        raise DomainError(f"Bessel order must be finite and nonnegative, got {nu!r}")


def _log_series(nu: float, x: np.ndarray) -> np.ndarray:
    """작은 x에서의 ln(I_ν(x)e^{-x}) 멱급수 (x > 0)"""
    q = 0.25 * x * x
    term = np.ones_like(x)
    total = np.ones_like(x)
    for k in range(1, SERIES_TERMS):
        term = term * q / (k * (nu + k))
        total = total + term
    return nu * np.log(0.5 * x) - special.gammaln(nu + 1.0) + np.log(total) - x


def _log_half_integer(nu: float, x: np.ndarray) -> np.ndarray:
    """ν ∈ {1/2, 3/2}의 쌍곡선 닫힌 형식 (x ≥ HALF_INTEGER_SWITCH)"""
    e2 = np.exp(-2.0 * x)
    prefactor = 0.5 * np.log(2.0 / (np.pi * x))
    if nu == 0.5:
        # sinh(x)·e^{-x} = (1 - e^{-2x})/2
        return prefactor + np.log(-np.expm1(-2.0 * x)) - math.log(2.0)
    # (cosh x - sinh x / x)·e^{-x}
    return prefactor + np.log(0.5 * (1.0 + e2) - 0.5 * (1.0 - e2) / x)


def log_ive_unchecked(nu: float, x: np.ndarray) -> np.ndarray:
    """
    검증 없는 벡터화 ln(I_ν(x)e^{-x})

    내부 적분 루프용. x는 0 이상의 유한 배열, nu는 0 이상이라고 가정합니다.
    """
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)

    zero = x == 0.0
    small = (~zero) & (x <= SERIES_SWITCH)
    large = x > SERIES_SWITCH

    out[zero] = 0.0 if nu == 0 else -np.inf
    if np.any(small):
        out[small] = _log_series(nu, x[small])
    if np.any(large):
        xl = x[large]
        if nu in (0.5, 1.5):
            closed = xl >= HALF_INTEGER_SWITCH
            vals = np.empty_like(xl)
            vals[closed] = _log_half_integer(nu, xl[closed])
            with np.errstate(divide="ignore"):
                vals[~closed] = np.log(special.ive(nu, xl[~closed]))
            out[large] = vals
        else:
            with np.errstate(divide="ignore"):
                out[large] = np.log(special.ive(nu, xl))
    return out


def log_bessel_i_scaled(nu: float, x: ArrayLike) -> ArrayLike:
    """
    ln(I_ν(x)·e^{-x}) 계산

    작은 x는 로그 멱급수, 그 외는 scipy.special.ive (Amos 알고리즘),
    ν = 1/2, 3/2은 쌍곡선 닫힌 형식을 사용합니다.

    Args:
        nu: Bessel 차수 ν ≥ 0
        x: 인자 x ≥ 0 (스칼라 또는 배열)

    Returns:
        ln(I_ν(x)e^{-x}); x = 0, ν > 0이면 -inf

    Raises:
        DomainError: x < 0, ν < 0 또는 비유한 입력

    Examples:
        >>> log_bessel_i_scaled(0.0, 0.0)
        0.0
        >>> closed = math.log(math.sqrt(1 / math.pi) * math.sinh(2.0) * math.exp(-2.0))
        >>> bool(abs(log_bessel_i_scaled(0.5, 2.0) - closed) < 1e-12)
        True
        >>> round(closed, 6)
        -1.283998
    """
    _check_order(nu)
    arr = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr < 0):
        raise DomainError(f"Bessel argument must be finite and nonnegative, got {x!r}")
    result = log_ive_unchecked(float(nu), np.atleast_1d(arr))
    if arr.ndim == 0:
        return float(result[0])
    return result.reshape(arr.shape)


def log_gamma(x: float) -> float:
    """
    ln Γ(x) 계산 (x > 0)

    Raises:
        DomainError: x ≤ 0 또는 비유한 입력

    Examples:
        >>> log_gamma(1.0)
        0.0
        >>> round(log_gamma(0.5), 7)
        0.5723649
    """
    if not math.isfinite(x) or x <= 0:
        raise DomainError(f"log_gamma needs a finite positive argument, got {x!r}")
    return float(special.gammaln(x))
