"""
Mutual information engine

회전불변 입력의 AWGN 상호정보량
- I = −∫ f_R̃ ln(f_R̃/r̃^{N−1}) dr̃ + ln(2/Γ(N/2)) − (N/2)ln(2e)  (nats → bits)
- 멀티스피어: f_R̃는 chi 커널의 log-sum-exp 혼합
- 일반 반지름 법칙: f_R̃는 점별 수치 적분 (이중 적분)
- 반지름 엔트로피의 두 가지 형식 (‖Y‖ 영역 / ‖Y‖^N 영역)

내부 로그는 모두 자연로그이며 bits 변환은 결과 조립 시 한 번만 수행합니다.
"""

import math
from typing import Callable, Tuple

import numpy as np
from scipy import integrate

from src.domain.calculations.quadrature import (
    Integral,
    adaptive_integrate,
    build_grid,
    build_grid_for_centers,
    truncation_point,
)
from src.domain.calculations.radial import log_radial_mixture_unchecked, marginal_radial_pdf
from src.domain.calculations.specfun import log_gamma
from src.domain.errors import DomainError, QuadratureError
from src.domain.models import ChannelParams, MIResult, QuadratureConfig, RadialLaw, SphereSet

LN2 = math.log(2.0)
# ln f가 이보다 작으면 피적분 함수를 0으로 둠 (0·log 0 := 0)
LOG_FLOOR = -700.0
# 이중 적분 경로의 바깥 상대 허용 오차
ROTINV_REL_TOL = 1e-6

LogDensityFn = Callable[[np.ndarray], np.ndarray]


# ============= 닫힌 형식 =============

def awgn_capacity(dims: int, snr: float) -> float:
    """
    AWGN 채널 용량 (bits per N-D use)

    C = (N/2)·log₂(1 + 2A/N)

    Raises:
        DomainError: N < 1 또는 A < 0

    Examples:
        >>> awgn_capacity(2, 1.0)
        1.0
        >>> awgn_capacity(4, 2.0)
        2.0
    """
    if int(dims) != dims or dims < 1:
        raise DomainError(f"dimension must be a positive integer, got {dims!r}")
    if not math.isfinite(snr) or snr < 0:
        raise DomainError(f"snr must be finite and nonnegative, got {snr!r}")
    return 0.5 * dims * math.log2(1.0 + 2.0 * snr / dims)


def conditional_entropy(params: ChannelParams) -> float:
    """
    h(Y|X) = h(N) = (N/2)·log₂(2πeσ²)

    Examples:
        >>> round(conditional_entropy(ChannelParams(dims=2, sigma=1.0, snr=1.0)), 6)
        4.094191
    """
    return 0.5 * params.dims * math.log2(2.0 * math.pi * math.e * params.sigma**2)


def _mi_constant(dims: int) -> float:
    """ln(2/Γ(N/2)) − (N/2)·ln(2e)"""
    return LN2 - log_gamma(0.5 * dims) - 0.5 * dims * (LN2 + 1.0)


def _log_area_constant(dims: int) -> float:
    """ln(2π^{N/2}/Γ(N/2))"""
    return LN2 + 0.5 * dims * math.log(math.pi) - log_gamma(0.5 * dims)


def _log_ball_constant(dims: int) -> float:
    """ln(π^{N/2}/Γ(N/2 + 1))"""
    return 0.5 * dims * math.log(math.pi) - log_gamma(0.5 * dims + 1.0)


# ============= 공통 적분 경로 =============

def _radial_integrand(log_density: LogDensityFn, dims: int) -> Callable[[np.ndarray], np.ndarray]:
    """−f·(ln f − (N−1)·ln r), ln f < LOG_FLOOR인 곳은 0"""
    def integrand(r: np.ndarray) -> np.ndarray:
        out = np.zeros_like(r)
        positive = r > 0
        lf = np.full_like(r, -np.inf)
        lf[positive] = log_density(r[positive])
        live = positive & (lf > LOG_FLOOR)
        if np.any(live):
            rl, fl = r[live], lf[live]
            out[live] = -np.exp(fl) * (fl - (dims - 1) * np.log(rl))
        return out

    return integrand


def _to_result(integral: Integral, dims: int) -> MIResult:
    total = (integral.value + _mi_constant(dims)) / LN2
    error = integral.error / LN2 if math.isfinite(integral.error) else math.inf
    return MIResult(
        bits_per_nd_use=max(total, 0.0),
        error_estimate=error,
        evaluations=integral.evaluations,
        refinements=integral.refinements,
    )


def mi_from_log_density(
    log_density: LogDensityFn,
    breakpoints: np.ndarray,
    dims: int,
    cfg: QuadratureConfig,
) -> MIResult:
    """
    정규화 출력 반지름 로그 밀도로부터 상호정보량 계산

    Args:
        log_density: r̃ > 0 배열에 대한 ln f_R̃ (벡터화)
        breakpoints: 초기 적분 분할점 (r̃ 단위)
        dims: 차원 N
        cfg: 적분 설정 (abs_tol은 bits 단위)

    Returns:
        MIResult (0 미만은 0으로 절삭)

    Raises:
        QuadratureError: max_refinements 안에 미수렴 (best에 MIResult 첨부)
    """
    integral = adaptive_integrate(
        _radial_integrand(log_density, dims),
        breakpoints,
        cfg,
        abs_tol=cfg.abs_tol * LN2,
    )
    result = _to_result(integral, dims)
    if not integral.converged:
        raise QuadratureError(
            f"MI integral did not converge after {integral.refinements} refinements "
            f"(best {result.bits_per_nd_use!r} bits)",
            best=result,
        )
    return result


# ============= 상호정보량 =============

def mi_multisphere(
    sphere_set: SphereSet,
    params: ChannelParams,
    cfg: QuadratureConfig = QuadratureConfig(),
) -> MIResult:
    """
    멀티스피어 입력의 상호정보량 (bits per N-D use)

    f_R̃(r̃) = Σ p_k χ(r̃, s_k/σ)를 봉우리 인지 격자 위에서 적분합니다.

    Examples:
        >>> params = ChannelParams(dims=2, sigma=1.0, snr=1e-6)
        >>> one = SphereSet(radii=(math.sqrt(2e-6),), probs=(1.0,))
        >>> mi_multisphere(one, params).bits_per_nd_use < 1e-5
        True
    """
    def log_density(r: np.ndarray) -> np.ndarray:
        return log_radial_mixture_unchecked(r, sphere_set, params)

    return mi_from_log_density(log_density, build_grid(sphere_set, params, cfg), params.dims, cfg)


def mi_rotinv(
    law: RadialLaw,
    params: ChannelParams,
    cfg: QuadratureConfig = QuadratureConfig(),
) -> MIResult:
    """
    일반 회전불변 입력의 상호정보량

    격자 노드마다 marginal_radial_pdf로 f_R̃를 구하는 이중 적분입니다.
    바깥 적분의 상대 허용 오차는 최소 1e-6으로 완화됩니다.

    Args:
        law: 입력 반지름 법칙 f_{‖X‖}
        params: 채널 파라미터
        cfg: 적분 설정

    Raises:
        QuadratureError: 안쪽 또는 바깥 적분 미수렴
    """
    sigma = params.sigma
    outer = cfg.model_copy(update={"rel_tol": max(cfg.rel_tol, ROTINV_REL_TOL)})

    def log_density(r: np.ndarray) -> np.ndarray:
        values = np.array([marginal_radial_pdf(law, params, float(x)) for x in r])
        with np.errstate(divide="ignore"):
            return np.log(values)

    centers = [p / sigma for p in law.points]
    upper = truncation_point(law.support_upper / sigma, params.dims, outer)
    grid = build_grid_for_centers(centers, upper, outer)
    return mi_from_log_density(log_density, grid, params.dims, outer)


# ============= 반지름 엔트로피 =============

# 각 영역을 나누는 균등 구간 수 (봉우리 힌트와 합쳐 quad의 분할점이 됨)
ENTROPY_PIECES = 8
ENTROPY_QUAD_LIMIT = 500


def _entropy_integrand(density: Callable[[float], float], weight_power: float) -> Callable[[float], float]:
    """−f ln f + weight_power·f ln x"""
    def integrand(x: float) -> float:
        f = density(x)
        if x <= 0.0 or f <= 0.0:
            return 0.0
        lf = math.log(f)
        if lf <= LOG_FLOOR:
            return 0.0
        return -f * lf + weight_power * f * math.log(x)

    return integrand


def _quad_pieces(integrand: Callable[[float], float], edges: np.ndarray, cfg: QuadratureConfig, what: str) -> float:
    """edges 사이 구간별 scipy quad 합 (끝점 특이성은 QAGS 외삽으로 처리)"""
    epsabs = cfg.abs_tol * LN2
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        value, abserr, info, *message = integrate.quad(
            integrand, float(lo), float(hi),
            epsabs=epsabs, epsrel=cfg.rel_tol, limit=ENTROPY_QUAD_LIMIT,
            full_output=1,
        )
        total += value
        if message and abserr > max(cfg.rel_tol * abs(value), 10 * epsabs):
            raise QuadratureError(
                f"{what} did not converge on [{lo:.6g}, {hi:.6g}]: {message[0]}", best=total
            )
    return total


def entropy_radial_forms(
    law: RadialLaw,
    dims: int,
    cfg: QuadratureConfig = QuadratureConfig(),
) -> Tuple[float, float]:
    """
    회전불변 벡터 Y의 미분 엔트로피를 반지름 법칙으로 두 번 계산

    - 형식 A: h(‖Y‖) + (N−1)E[log₂‖Y‖] + log₂(2π^{N/2}/Γ(N/2))  (r 영역 적분)
    - 형식 B: h(‖Y‖^N) + log₂(π^{N/2}/Γ(N/2+1))  (t = r^N 영역 적분)

    두 형식은 서로 다른 변수로 독립 적분되며, 차이는 적분 허용 오차 이내여야 합니다.
    t 영역 밀도는 t → 0에서 t^{−(N−1)/N}로 발산할 수 있어 적응형 quad로 적분합니다.

    Args:
        law: ‖Y‖의 반지름 법칙 (물리 단위)
        dims: 차원 N ≥ 1
        cfg: 적분 설정 (rel_tol, abs_tol만 사용)

    Returns:
        (형식 A, 형식 B) bits

    Raises:
        DomainError: N < 1
        QuadratureError: 적분 미수렴

    Examples:
        >>> law = gaussian_radial_law(ChannelParams(dims=2, sigma=1.0, snr=1.0))  # doctest: +SKIP
        >>> entropy_radial_forms(law, 2)  # doctest: +SKIP
        (4.0941911..., 4.0941911...)
    """
    if int(dims) != dims or dims < 1:
        raise DomainError(f"dimension must be a positive integer, got {dims!r}")

    lo, hi = law.support_lower, law.support_upper
    hints = [p for p in law.points if lo < p < hi]
    r_edges = np.union1d(np.linspace(lo, hi, ENTROPY_PIECES + 1), hints)

    def density_r(r: float) -> float:
        if r < lo or r > hi:
            return 0.0
        return float(law.density(r))

    def density_t(t: float) -> float:
        if t <= 0.0:
            return 0.0
        return density_r(t ** (1.0 / dims)) / (dims * t ** ((dims - 1.0) / dims))

    form_r = _quad_pieces(_entropy_integrand(density_r, dims - 1.0), r_edges, cfg, "radial entropy (r domain)")
    form_t = _quad_pieces(_entropy_integrand(density_t, 0.0), r_edges**dims, cfg, "radial entropy (r^N domain)")
    h_r = (form_r + _log_area_constant(dims)) / LN2
    h_t = (form_t + _log_ball_constant(dims)) / LN2
    return h_r, h_t
