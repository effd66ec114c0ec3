"""
Peak-aware composite Gauss–Legendre quadrature

멀티스피어 출력 밀도는 고 SNR에서 r̃ ≈ s_k/σ 근처에 날카로운 봉우리를 가집니다.
- build_grid: 봉우리마다 촘촘한 패널, 나머지는 거친 패널로 구간 분할
- adaptive_integrate: 모든 패널을 이분하며 추정값 변화가 허용 오차 아래가 될 때까지 반복

순수 함수: 입력 격자/함수만으로 결과가 결정됩니다.
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence, Tuple

import numpy as np

from src.domain.models import ChannelParams, QuadratureConfig, SphereSet

# 봉우리 창 안의 패널 폭 상한 = peak_halfwidth / DENSE_DIVISOR
DENSE_DIVISOR = 16
# 가장 바깥 봉우리 뒤로 최소 이만큼(r̃ 단위) 적분 (꼬리 질량 < 1e-30)
TAIL_SAFETY = 12.0
# 세분 중단 기준 (노드 수)
MAX_NODES = 2**24


@dataclass(frozen=True)
class Integral:
    """적분 추정값 (value, 오차 추정, 평가 횟수, 세분 횟수, 수렴 여부)"""
    value: float
    error: float
    evaluations: int
    refinements: int
    converged: bool


@lru_cache(maxsize=16)
def _gauss_legendre(order: int) -> Tuple[np.ndarray, np.ndarray]:
    nodes, weights = np.polynomial.legendre.leggauss(order)
    return nodes, weights


def _merge_windows(windows: Sequence[Tuple[float, float]]) -> list:
    merged: list = []
    for lo, hi in sorted(windows):
        if merged and lo <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    return merged


def _fill(lo: float, hi: float, width: float) -> np.ndarray:
    count = max(1, int(math.ceil((hi - lo) / width - 1e-12)))
    return np.linspace(lo, hi, count + 1)


def build_grid_for_centers(
    centers: Sequence[float],
    upper: float,
    cfg: QuadratureConfig,
) -> np.ndarray:
    """
    봉우리 중심 목록에 대한 정렬된 구간 분할점

    Args:
        centers: 봉우리 위치 (r̃ 단위)
        upper: 적분 상한
        cfg: 적분 설정

    Returns:
        0에서 upper까지의 정렬된 분할점 배열
    """
    h = cfg.peak_halfwidth
    coarse = upper / cfg.base_panels
    dense = min(h / DENSE_DIVISOR, coarse)

    windows = _merge_windows([(max(c - h, 0.0), min(c + h, upper)) for c in centers if c - h < upper])
    pieces = []
    cursor = 0.0
    for lo, hi in windows:
        if lo > cursor:
            pieces.append(_fill(cursor, lo, coarse))
        pieces.append(_fill(lo, hi, dense))
        cursor = hi
    if cursor < upper:
        pieces.append(_fill(cursor, upper, coarse))
    return np.unique(np.concatenate(pieces))


def truncation_point(top_center: float, dims: int, cfg: QuadratureConfig) -> float:
    """출력 반지름 적분 상한: 가장 바깥 봉우리 + max(반폭, 12) + √N"""
    return top_center + max(cfg.peak_halfwidth, TAIL_SAFETY) + math.sqrt(dims)


def build_grid(sphere_set: SphereSet, params: ChannelParams, cfg: QuadratureConfig) -> np.ndarray:
    """
    멀티스피어 출력 밀도 적분용 격자

    [s_k/σ − h, s_k/σ + h] 창 안은 폭 h/16 이하의 패널, 바깥은 거친 패널.
    상한은 가장 바깥 초구 뒤로 가우시안 꼬리 질량이 1e-14 아래가 되도록 잡습니다.

    Examples:
        >>> params = ChannelParams(dims=2, sigma=1.0, snr=50.0)
        >>> grid = build_grid(SphereSet(radii=(10.0,), probs=(1.0,)), params, QuadratureConfig())
        >>> grid[0], grid[-1] >= 18.0
        (0.0, True)
    """
    centers = [s / params.sigma for s in sphere_set.radii]
    upper = truncation_point(centers[-1], params.dims, cfg)
    return build_grid_for_centers(centers, upper, cfg)


def refine(breakpoints: np.ndarray) -> np.ndarray:
    """모든 패널을 이분 (패널 수 두 배)"""
    mids = 0.5 * (breakpoints[:-1] + breakpoints[1:])
    out = np.empty(breakpoints.size + mids.size)
    out[0::2] = breakpoints
    out[1::2] = mids
    return out


def composite_nodes(breakpoints: np.ndarray, order: int) -> Tuple[np.ndarray, np.ndarray]:
    """분할점 위의 합성 Gauss–Legendre 노드와 가중치"""
    x, w = _gauss_legendre(order)
    a, b = breakpoints[:-1, None], breakpoints[1:, None]
    half = 0.5 * (b - a)
    nodes = (a + b) * 0.5 + half * x[None, :]
    weights = half * w[None, :]
    return nodes.reshape(-1), weights.reshape(-1)


def integrate_composite(fn: Callable[[np.ndarray], np.ndarray], breakpoints: np.ndarray, order: int) -> Tuple[float, int]:
    """단일 격자 합성 적분 (값, 평가 횟수)"""
    nodes, weights = composite_nodes(breakpoints, order)
    values = fn(nodes)
    return float(np.dot(weights, values)), int(nodes.size)


def adaptive_integrate(
    fn: Callable[[np.ndarray], np.ndarray],
    breakpoints: np.ndarray,
    cfg: QuadratureConfig,
    abs_tol: float,
) -> Integral:
    """
    이분 세분 반복 적분

    이전 격자와 세분 격자의 추정값 차이를 오차 추정으로 사용하고,
    차이가 max(abs_tol, rel_tol·|I|) 이하가 되면 세분 격자 값을 반환합니다.

    Args:
        fn: 벡터화된 피적분 함수
        breakpoints: 초기 분할점
        cfg: 적분 설정 (rel_tol, max_refinements, gauss_order)
        abs_tol: 피적분 함수 단위의 절대 허용 오차

    Returns:
        Integral (max_refinements 안에 수렴하지 못하면 converged=False)
    """
    grid = np.asarray(breakpoints, dtype=float)
    previous, evaluations = integrate_composite(fn, grid, cfg.gauss_order)
    error = math.inf

    for level in range(1, cfg.max_refinements + 1):
        if 2 * grid.size * cfg.gauss_order > MAX_NODES:
            return Integral(previous, error, evaluations, level - 1, False)
        grid = refine(grid)
        current, count = integrate_composite(fn, grid, cfg.gauss_order)
        evaluations += count
        error = abs(current - previous)
        if error <= max(abs_tol, cfg.rel_tol * abs(current)):
            return Integral(current, error, evaluations, level, True)
        previous = current

    return Integral(previous, error, evaluations, cfg.max_refinements, False)
