"""
Radial probability laws

회전불변 입력/출력의 반지름 분포
- 잡음 정규화 출력 반지름 R̃ = ‖Y‖/σ의 조건부 밀도 (비중심 chi 커널)
- 비중심 카이제곱 조건부 밀도 (Q = ‖Y‖²)
- 균등 간격 멀티스피어 집합과 평균 전력
- 출력 반지름 혼합 밀도 (이산: log-sum-exp, 일반: 수치 적분)

모든 밀도는 로그 값으로 주고받습니다. 지수화는 log-sum-exp 또는
최종 피적분 함수 조립 단계에서만 수행합니다.
"""

import math
from typing import Union

import numpy as np
from scipy import integrate, special

from src.domain.calculations.specfun import log_ive_unchecked
from src.domain.errors import DomainError, QuadratureError
from src.domain.models import ChannelParams, RadialLaw, SphereSet

ArrayLike = Union[float, np.ndarray]

# s̃가 이보다 작으면 중심 chi 밀도로 분기 (식의 제거 가능한 특이점)
CENTRAL_SWITCH = 1e-12
MARGINAL_REL_TOL = 1e-8
MARGINAL_ABS_TOL = 1e-14


def _check_nonnegative(name: str, value: ArrayLike) -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr < 0):
        raise DomainError(f"{name} must be finite and nonnegative, got {value!r}")
    return arr


def _check_dims(dims: int) -> None:
    if int(dims) != dims or dims < 1:
        raise DomainError(f"dimension must be a positive integer, got {dims!r}")


def _as_output(arr: np.ndarray, result: np.ndarray) -> ArrayLike:
    if arr.ndim == 0:
        return float(result.reshape(-1)[0])
    return result.reshape(arr.shape)


# ============= 균등 간격 멀티스피어 =============

def uniform_sphere_set(rings: int, params: ChannelParams) -> SphereSet:
    """
    등확률·균등 간격 K개 초구 집합

    p_k = 1/K, s_k = k·σ·Δ, Δ = √(12A/(2K²+3K+1))

    Args:
        rings: 초구 수 K ≥ 1
        params: 채널 파라미터 (snr > 0)

    Returns:
        평균 전력이 2σ²A인 SphereSet

    Raises:
        DomainError: K < 1 또는 A = 0 (반지름 0인 퇴화 집합)

    Examples:
        >>> uniform_sphere_set(2, ChannelParams(dims=2, sigma=1.0, snr=5.0)).radii
        (2.0, 4.0)
    """
    if int(rings) != rings or rings < 1:
        raise DomainError(f"ring count must be a positive integer, got {rings!r}")
    if params.snr <= 0:
        raise DomainError("uniform sphere sets need snr > 0 (a zero-radius set is not defined)")

    spacing = math.sqrt(12.0 * params.snr / (2 * rings**2 + 3 * rings + 1))
    radii = tuple(k * params.sigma * spacing for k in range(1, rings + 1))
    probs = tuple(1.0 / rings for _ in range(rings))
    return SphereSet(radii=radii, probs=probs)


def average_power(sphere_set: SphereSet) -> float:
    """
    E[‖X‖²] = Σ p_k s_k²

    Examples:
        >>> average_power(SphereSet(radii=(2.0, 4.0), probs=(0.5, 0.5)))
        10.0
    """
    return math.fsum(p * s * s for p, s in zip(sphere_set.probs, sphere_set.radii))


# ============= 커널 =============

def log_sphere_area(r: ArrayLike, dims: int) -> ArrayLike:
    """반지름 r인 N차원 초구 표면적의 로그, ln(2π^{N/2} r^{N-1}/Γ(N/2))"""
    _check_dims(dims)
    arr = _check_nonnegative("radius", r)
    with np.errstate(divide="ignore"):
        result = (
            math.log(2.0) + 0.5 * dims * math.log(math.pi)
            + (dims - 1) * np.log(np.atleast_1d(arr))
            - special.gammaln(0.5 * dims)
        )
    return _as_output(arr, result)


def _log_central_chi(r: np.ndarray, dims: int) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return (
            (dims - 1) * np.log(r) - 0.5 * r * r
            + (1.0 - 0.5 * dims) * math.log(2.0) - special.gammaln(0.5 * dims)
        )


def log_chi_kernel_unchecked(r_tilde: np.ndarray, s_tilde: float, dims: int) -> np.ndarray:
    """검증 없는 벡터화 ln χ(r̃, s̃) (적분 루프용)"""
    r = np.asarray(r_tilde, dtype=float)
    if s_tilde < CENTRAL_SWITCH:
        return _log_central_chi(r, dims)
    nu = 0.5 * dims - 1.0
    with np.errstate(divide="ignore"):
        return (
            0.5 * dims * np.log(r)
            - nu * math.log(s_tilde)
            - 0.5 * (r - s_tilde) ** 2
            + log_ive_unchecked(nu, r * s_tilde)
        )


def log_chi_kernel(r_tilde: ArrayLike, s_tilde: float, dims: int) -> ArrayLike:
    """
    정규화 출력 반지름의 조건부 로그 밀도 ln χ(r̃, s̃)

    χ(r̃,s̃) = (r̃^{N/2}/s̃^{N/2-1})·exp(-(r̃²+s̃²)/2)·I_{N/2-1}(r̃s̃)
    를 (N/2)ln r̃ − (N/2−1)ln s̃ − (r̃−s̃)²/2 + ln(I·e^{-r̃s̃})로 계산하므로
    인자가 10⁶까지 커져도 overflow가 없습니다. s̃ = 0이면 중심 chi 밀도.

    Args:
        r_tilde: r̃ ≥ 0 (스칼라 또는 배열)
        s_tilde: s̃ = s/σ ≥ 0
        dims: 차원 N

    Returns:
        ln χ; r̃ = 0에서는 -inf

    Raises:
        DomainError: 음수 또는 비유한 입력

    Examples:
        >>> log_chi_kernel(1.0, 0.0, 2)
        -0.5
    """
    _check_dims(dims)
    r = _check_nonnegative("r_tilde", r_tilde)
    _check_nonnegative("s_tilde", s_tilde)
    result = log_chi_kernel_unchecked(np.atleast_1d(r), float(s_tilde), dims)
    return _as_output(r, result)


def log_noncentral_chi_square_pdf(q: float, s: float, params: ChannelParams) -> float:
    """
    Q = ‖Y‖²의 조건부 로그 밀도 ln f_{Q|‖X‖}(q|s) (자유도 N 비중심 카이제곱)

    f = (1/2σ²)(q/s²)^{N/4-1/2} exp(-(q+s²)/2σ²) I_{N/2-1}(s√q/σ²)
    지수 인자는 -(√q − s)²/2σ²로 합쳐 계산합니다. s = 0이면 중심 카이제곱.

    Examples:
        >>> params = ChannelParams(dims=2, sigma=1.0, snr=1.0)
        >>> round(log_noncentral_chi_square_pdf(2.0, 0.0, params), 6)
        -1.693147
    """
    q = float(_check_nonnegative("q", q))
    s = float(_check_nonnegative("s", s))
    n, var = params.dims, params.sigma**2
    nu = 0.5 * n - 1.0

    if s < CENTRAL_SWITCH * params.sigma:
        if q == 0.0:
            return -math.log(2.0 * var) - special.gammaln(0.5 * n) if n == 2 else -math.inf
        return float(
            nu * math.log(q) - q / (2.0 * var)
            - 0.5 * n * math.log(2.0 * var) - special.gammaln(0.5 * n)
        )

    if q == 0.0:
        # (q/s²)^{N/4-1/2}·I_ν(0): N = 2에서만 0이 아님
        return -math.log(2.0 * var) - s * s / (2.0 * var) if n == 2 else -math.inf

    root = math.sqrt(q)
    z = s * root / var
    shape = 0.5 * nu * math.log(q / (s * s)) if nu != 0 else 0.0
    return float(
        -math.log(2.0 * var) + shape
        - (root - s) ** 2 / (2.0 * var)
        + log_ive_unchecked(nu, np.array([z]))[0]
    )


# ============= 혼합 밀도 =============

def log_radial_mixture_unchecked(r_tilde: np.ndarray, sphere_set: SphereSet, params: ChannelParams) -> np.ndarray:
    """검증 없는 벡터화 ln f_R̃(r̃) = ln Σ p_k χ(r̃, s_k/σ)"""
    r = np.asarray(r_tilde, dtype=float)
    terms = np.stack([
        math.log(p) + log_chi_kernel_unchecked(r, s / params.sigma, params.dims)
        for s, p in zip(sphere_set.radii, sphere_set.probs)
    ])
    with np.errstate(divide="ignore", invalid="ignore"):
        return special.logsumexp(terms, axis=0)


def log_radial_mixture(r_tilde: ArrayLike, sphere_set: SphereSet, params: ChannelParams) -> ArrayLike:
    """
    멀티스피어 출력의 정규화 반지름 로그 밀도

    최댓값 이동 log-sum-exp로 Σ_k p_k·χ(r̃, s_k/σ)를 계산합니다.
    모든 항이 0이면 -inf.

    Examples:
        >>> params = ChannelParams(dims=2, sigma=1.0, snr=2.0)
        >>> one = SphereSet(radii=(2.0,), probs=(1.0,))
        >>> log_radial_mixture(1.5, one, params) == log_chi_kernel(1.5, 2.0, 2)
        True
    """
    r = _check_nonnegative("r_tilde", r_tilde)
    result = log_radial_mixture_unchecked(np.atleast_1d(r), sphere_set, params)
    return _as_output(r, result)


def marginal_radial_pdf(law: RadialLaw, params: ChannelParams, r_tilde: float) -> float:
    """
    일반 회전불변 입력의 정규화 출력 반지름 밀도

    f_R̃(r̃) = ∫ f_{‖X‖}(s)·χ(r̃, s/σ) ds 를 [support_lower, support_upper]에서
    상대 허용 오차 1e-8로 적분합니다.

    Args:
        law: 입력 반지름 분포
        params: 채널 파라미터
        r_tilde: r̃ ≥ 0

    Returns:
        f_R̃(r̃) (선형 값)

    Raises:
        QuadratureError: 적분 미수렴
    """
    r = float(_check_nonnegative("r_tilde", r_tilde))
    if r == 0.0:
        return 0.0
    sigma, dims = params.sigma, params.dims

    def integrand(s: float) -> float:
        density = float(law.density(s))
        if density <= 0.0:
            return 0.0
        return density * math.exp(float(log_chi_kernel_unchecked(np.array([r]), s / sigma, dims)[0]))

    lo, hi = law.support_lower, law.support_upper
    hints = sorted({p for p in law.points + (r * sigma,) if lo < p < hi})
    value, abserr, info, *message = integrate.quad(
        integrand, lo, hi,
        points=hints or None,
        epsabs=MARGINAL_ABS_TOL, epsrel=MARGINAL_REL_TOL, limit=500,
        full_output=1,
    )
    if message and abserr > max(MARGINAL_REL_TOL * abs(value), 10 * MARGINAL_ABS_TOL):
        raise QuadratureError(f"marginal radial integral did not converge at r̃={r}: {message[0]}", best=value)
    return max(value, 0.0)


# ============= 반지름 분포 생성기 =============

def _log_chi_scaled(s: np.ndarray, scale: float, dims: int) -> np.ndarray:
    """척도 scale인 중심 chi 로그 밀도"""
    with np.errstate(divide="ignore"):
        return (
            (dims - 1) * np.log(s) - 0.5 * (s / scale) ** 2
            - (0.5 * dims - 1.0) * math.log(2.0) - dims * math.log(scale)
            - special.gammaln(0.5 * dims)
        )


def gaussian_radial_law(params: ChannelParams, tail: float = 10.0) -> RadialLaw:
    """
    평균 에너지 2σ²A인 가우시안 입력의 반지름 법칙 (용량 달성 분포)

    차원당 분산 σ_x² = 2σ²A/N, ‖X‖는 척도 σ_x인 chi 분포.
    """
    if params.snr <= 0:
        raise DomainError("a Gaussian input law needs snr > 0")
    scale = math.sqrt(params.signal_energy / params.dims)
    dims = params.dims

    def density(s):
        arr = np.asarray(s, dtype=float)
        return np.exp(_log_chi_scaled(arr, scale, dims))

    upper = scale * (math.sqrt(dims) + tail)
    return RadialLaw(density=density, support_upper=upper, points=(scale * math.sqrt(dims - 1.0),), name="gaussian")


def uniform_radial_law(upper: float) -> RadialLaw:
    """[0, upper]에서 균등한 반지름 밀도"""
    if not math.isfinite(upper) or upper <= 0:
        raise DomainError(f"uniform radial law needs a positive upper bound, got {upper!r}")

    def density(s):
        arr = np.asarray(s, dtype=float)
        return np.where((arr >= 0) & (arr <= upper), 1.0 / upper, 0.0)

    return RadialLaw(density=density, support_upper=upper, name="uniform")


def bump_radial_law(center: float, width: float, tail: float = 10.0) -> RadialLaw:
    """
    center 주변 폭 width의 절단 가우시안 봉우리 (점질량 근사)

    [center − tail·width, center + tail·width] ∩ [0, ∞)에서 정규화됩니다.
    """
    if not (math.isfinite(center) and math.isfinite(width)) or center <= 0 or width <= 0:
        raise DomainError("bump law needs positive center and width")
    lo = max(center - tail * width, 0.0)
    hi = center + tail * width
    za, zb = (lo - center) / width, tail
    mass = 0.5 * (math.erf(zb / math.sqrt(2.0)) - math.erf(za / math.sqrt(2.0)))
    norm = 1.0 / (width * math.sqrt(2.0 * math.pi) * mass)

    def density(s):
        arr = np.asarray(s, dtype=float)
        inside = (arr >= lo) & (arr <= hi)
        return np.where(inside, norm * np.exp(-0.5 * ((arr - center) / width) ** 2), 0.0)

    return RadialLaw(density=density, support_lower=lo, support_upper=hi, points=(center,), name="bump")


def output_radial_law(source: Union[SphereSet, RadialLaw], params: ChannelParams) -> RadialLaw:
    """
    출력 ‖Y‖의 반지름 법칙 (물리 단위, f_R(r) = f_R̃(r/σ)/σ)

    반지름 엔트로피 형식 검증용. SphereSet은 log-sum-exp 혼합,
    RadialLaw는 점별 수치 적분으로 밀도를 계산합니다.
    """
    sigma = params.sigma
    if isinstance(source, SphereSet):
        centers = source.radii
        top = source.radii[-1]

        def density(r):
            arr = np.atleast_1d(np.asarray(r, dtype=float)) / sigma
            out = np.exp(log_radial_mixture_unchecked(arr, source, params)) / sigma
            return out if np.ndim(r) else float(out[0])

        name = f"output of {source.rings}-sphere set"
    else:
        centers = source.points
        top = source.support_upper

        def density(r):
            arr = np.atleast_1d(np.asarray(r, dtype=float))
            out = np.array([marginal_radial_pdf(source, params, x / sigma) for x in arr]) / sigma
            return out if np.ndim(r) else float(out[0])

        name = f"output of {source.name}"

    upper = top + sigma * (math.sqrt(params.dims) + 12.0)
    return RadialLaw(density=density, support_upper=upper, points=tuple(centers), name=name)


