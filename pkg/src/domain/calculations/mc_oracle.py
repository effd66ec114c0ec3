"""
Monte Carlo mutual information oracles

적분 엔진과 독립적인 두 가지 추정기 (+ 가우시안 입력 변형)
- mc_mi_vector: I = E[log₂ f_{Y|X}(Y|X)/f_Y(Y)], f_Y는 반지름 밀도/초구 면적
- mc_mi_radial: I = −E[log₂ f_R̃(R̃)/R̃^{N−1}] + 상수 (R̃ = ‖X+N‖/σ 직접 시뮬레이션)
- mc_mi_gaussian: 가우시안 입력 (용량 재현 확인용)

난수: numpy Philox (카운터 기반). 키 = seed + (oracle 태그 << 64),
블록마다 .jumped(블록 번호)로 서로소 카운터 구간을 사용하므로
결과는 worker 수와 무관하게 비트 단위로 동일합니다.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from src.domain.calculations.radial import log_radial_mixture_unchecked, log_sphere_area
from src.domain.calculations.specfun import log_gamma
from src.domain.errors import DomainError
from src.domain.models import SEED_UPPER, ChannelParams, MCEstimate, SphereSet

LN2 = math.log(2.0)
MIN_SAMPLES = 1000
BLOCK_SIZE = 2**16
# 초구 하나당 예약된 블록 수 (카운터 구간 분리)
STRATUM_BLOCKS = 2**32
ORTHOGONALITY_TOL = 1e-10

VECTOR_TAG = 1
RADIAL_TAG = 2
GAUSSIAN_TAG = 3

BlockFn = Callable[[np.random.Generator, int], np.ndarray]


# ============= 난수 =============

def _check_seed(seed: int) -> None:
    if int(seed) != seed or not 0 <= seed < SEED_UPPER:
        raise DomainError(f"seed must be a 64-bit unsigned integer, got {seed!r}")


def block_generator(seed: int, tag: int, block: int) -> np.random.Generator:
    """(seed, 추정기 태그, 블록 번호)에 대응하는 Philox 생성기"""
    bit_generator = np.random.Philox(key=int(seed) + (tag << 64))
    return np.random.Generator(bit_generator.jumped(block + 1))


def sample_on_sphere(
    radius: float,
    dims: int,
    rng: np.random.Generator,
    size: Optional[int] = None,
) -> np.ndarray:
    """
    반지름 radius인 N차원 초구 위의 균등 표본

    radius·g/‖g‖ (g는 표준정규 벡터). g = 0 표본은 다시 뽑습니다.

    Args:
        radius: 반지름 > 0
        dims: 차원 N ≥ 1
        rng: numpy Generator
        size: None이면 벡터 하나, 아니면 (size, N) 배열

    Examples:
        >>> rng = np.random.default_rng(0)
        >>> round(float(np.linalg.norm(sample_on_sphere(3.0, 4, rng))), 12)
        3.0
    """
    if not math.isfinite(radius) or radius <= 0:
        raise DomainError(f"sphere radius must be finite and positive, got {radius!r}")
    if int(dims) != dims or dims < 1:
        raise DomainError(f"dimension must be a positive integer, got {dims!r}")

    count = 1 if size is None else int(size)
    g = rng.standard_normal((count, dims))
    norms = np.linalg.norm(g, axis=1)
    while np.any(norms == 0.0):
        zero = norms == 0.0
        g[zero] = rng.standard_normal((int(zero.sum()), dims))
        norms = np.linalg.norm(g, axis=1)
    points = radius * g / norms[:, None]
    return points[0] if size is None else points


# ============= 층화 / 병합 =============

def stratum_counts(probs: Sequence[float], samples: int) -> List[int]:
    """
    최대 잉여(largest remainder) 방식의 층별 표본 수 (층마다 최소 2개)

    Examples:
        >>> stratum_counts((0.5, 0.25, 0.25), 1001)
        [501, 250, 250]
    """
    quotas = [p * samples for p in probs]
    counts = [int(math.floor(q)) for q in quotas]
    leftover = samples - sum(counts)
    order = sorted(range(len(probs)), key=lambda i: (-(quotas[i] - counts[i]), i))
    for i in order[:leftover]:
        counts[i] += 1
    return [max(c, 2) for c in counts]


def _block_sizes(count: int) -> List[int]:
    full, rest = divmod(count, BLOCK_SIZE)
    return [BLOCK_SIZE] * full + ([rest] if rest else [])


def _run_blocks(
    tasks: Sequence[Tuple[int, int, BlockFn]],
    seed: int,
    tag: int,
    workers: int,
) -> List[np.ndarray]:
    """(블록 번호, 표본 수, 함수) 작업을 순서대로 병합"""
    def run(task: Tuple[int, int, BlockFn]) -> np.ndarray:
        block, size, fn = task
        return fn(block_generator(seed, tag, block), size)

    if workers <= 1:
        return [run(t) for t in tasks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run, tasks))


def _stratified_estimate(
    per_stratum: Sequence[np.ndarray],
    probs: Sequence[float],
    seed: int,
) -> MCEstimate:
    estimate = math.fsum(p * float(np.mean(v)) for p, v in zip(probs, per_stratum))
    variance = math.fsum(
        p * p * float(np.var(v, ddof=1)) / v.size for p, v in zip(probs, per_stratum)
    )
    return MCEstimate(
        estimate=estimate / LN2,
        stderr=math.sqrt(variance) / LN2,
        samples=sum(v.size for v in per_stratum),
        seed=seed,
    )


def _stratified(
    sphere_set: SphereSet,
    samples: int,
    seed: int,
    tag: int,
    workers: int,
    make_block: Callable[[float], BlockFn],
) -> MCEstimate:
    counts = stratum_counts(sphere_set.probs, samples)
    tasks: List[Tuple[int, int, BlockFn]] = []
    owners: List[int] = []
    for k, (radius, count) in enumerate(zip(sphere_set.radii, counts)):
        fn = make_block(radius)
        for b, size in enumerate(_block_sizes(count)):
            tasks.append((k * STRATUM_BLOCKS + b, size, fn))
            owners.append(k)

    blocks = _run_blocks(tasks, seed, tag, workers)
    per_stratum = [
        np.concatenate([v for v, owner in zip(blocks, owners) if owner == k])
        for k in range(sphere_set.rings)
    ]
    return _stratified_estimate(per_stratum, sphere_set.probs, seed)


def _check_run(samples: int, seed: int, workers: int) -> None:
    if samples < MIN_SAMPLES:
        raise DomainError(f"Monte Carlo runs need at least {MIN_SAMPLES} samples, got {samples}")
    if workers < 1:
        raise DomainError(f"workers must be at least 1, got {workers}")
    _check_seed(seed)


def _check_rotation(rotation: Optional[np.ndarray], dims: int) -> Optional[np.ndarray]:
    if rotation is None:
        return None
    q = np.asarray(rotation, dtype=float)
    if q.shape != (dims, dims):
        raise DomainError(f"rotation must be {dims}x{dims}, got {q.shape}")
    if np.max(np.abs(q.T @ q - np.eye(dims))) > ORTHOGONALITY_TOL:
        raise DomainError("rotation matrix is not orthogonal")
    return q


# ============= 추정기 =============

def mc_mi_vector(
    sphere_set: SphereSet,
    params: ChannelParams,
    samples: int,
    seed: int,
    rotation: Optional[np.ndarray] = None,
    workers: int = 1,
) -> MCEstimate:
    """
    벡터 Monte Carlo 상호정보량 추정 (bits per N-D use)

    X를 초구에서, N을 가우시안에서 뽑아 Y = X + N을 만들고
    ln f_{Y|X}(Y|X) − ln f_Y(Y)를 평균합니다.
    f_Y(y) = f_R̃(‖y‖/σ) / (σ·S_{N−1}(‖y‖)).
    초구별 층화 (p_k 비례 표본 수), 추정값 = Σ p_k·평균_k.

    Args:
        sphere_set: 입력 초구 집합
        params: 채널 파라미터
        samples: 표본 수 (≥ 1000)
        seed: 64비트 시드
        rotation: X와 N 모두에 적용할 고정 직교 행렬 (선택)
        workers: 블록 병렬 스레드 수 (결과는 동일)

    Returns:
        MCEstimate
    """
    _check_run(samples, seed, workers)
    q = _check_rotation(rotation, params.dims)
    dims, sigma = params.dims, params.sigma
    log_noise_norm = -0.5 * dims * math.log(2.0 * math.pi * sigma * sigma)

    def make_block(radius: float) -> BlockFn:
        def block(rng: np.random.Generator, size: int) -> np.ndarray:
            x = sample_on_sphere(radius, dims, rng, size)
            noise = sigma * rng.standard_normal((size, dims))
            if q is not None:
                x, noise = x @ q.T, noise @ q.T
            y = x + noise
            r = np.linalg.norm(y, axis=1)
            log_conditional = log_noise_norm - 0.5 * np.sum(noise * noise, axis=1) / (sigma * sigma)
            log_output = (
                log_radial_mixture_unchecked(r / sigma, sphere_set, params)
                - math.log(sigma)
                - log_sphere_area(r, dims)
            )
            return log_conditional - log_output

        return block

    return _stratified(sphere_set, samples, seed, VECTOR_TAG, workers, make_block)


def mc_mi_radial(
    sphere_set: SphereSet,
    params: ChannelParams,
    samples: int,
    seed: int,
    workers: int = 1,
) -> MCEstimate:
    """
    반지름 Monte Carlo 상호정보량 추정

    R̃ = ‖X + N‖/σ를 직접 시뮬레이션하고
    −ln(f_R̃(R̃)/R̃^{N−1}) + ln(2/Γ(N/2)) − (N/2)ln(2e)를 평균합니다.
    벡터 추정기와 다른 난수 스트림을 사용합니다.
    """
    _check_run(samples, seed, workers)
    dims, sigma = params.dims, params.sigma
    constant = math.log(2.0) - log_gamma(0.5 * dims) - 0.5 * dims * (math.log(2.0) + 1.0)

    def make_block(radius: float) -> BlockFn:
        def block(rng: np.random.Generator, size: int) -> np.ndarray:
            x = sample_on_sphere(radius, dims, rng, size)
            y = x + sigma * rng.standard_normal((size, dims))
            r_tilde = np.linalg.norm(y, axis=1) / sigma
            lf = log_radial_mixture_unchecked(r_tilde, sphere_set, params)
            return constant - (lf - (dims - 1) * np.log(r_tilde))

        return block

    return _stratified(sphere_set, samples, seed, RADIAL_TAG, workers, make_block)


def mc_mi_gaussian(params: ChannelParams, samples: int, seed: int, workers: int = 1) -> MCEstimate:
    """
    가우시안 입력 (차원당 분산 2σ²A/N)의 Monte Carlo 상호정보량

    awgn_capacity(N, A)를 재현해야 합니다.
    """
    _check_run(samples, seed, workers)
    dims, sigma = params.dims, params.sigma
    var_n = sigma * sigma
    var_y = var_n + params.signal_energy / dims
    log_ratio_const = 0.5 * dims * math.log(var_y / var_n)

    def block(rng: np.random.Generator, size: int) -> np.ndarray:
        x = math.sqrt(var_y - var_n) * rng.standard_normal((size, dims))
        noise = sigma * rng.standard_normal((size, dims))
        y = x + noise
        return (
            log_ratio_const
            - 0.5 * np.sum(noise * noise, axis=1) / var_n
            + 0.5 * np.sum(y * y, axis=1) / var_y
        )

    tasks = [(b, size, block) for b, size in enumerate(_block_sizes(samples))]
    values = np.concatenate(_run_blocks(tasks, seed, GAUSSIAN_TAG, workers))
    return MCEstimate(
        estimate=float(np.mean(values)) / LN2,
        stderr=float(np.std(values, ddof=1)) / math.sqrt(values.size) / LN2,
        samples=int(values.size),
        seed=seed,
    )
