"""
Split-step Manakov propagation and rotational invariance

∂E/∂z + i(β₂/2)∂²E/∂t² − iγ(8/9)‖E‖²E = iN(z,t) 를 대칭 split-step으로 적분합니다.
- 분산: 주파수 영역, 구간당 반 스텝 × 2, 각 bin에 exp(i(β₂/2)ω²·h/2)
- Kerr: 시간 영역, 두 편광 공동 위상 exp(iγ(8/9)(|E_x|²+|E_y|²)h)
- 잡음: 구간마다 편광·직교성분당 분산 noise_psd·h/dt의 원형 가우시안

주파수 격자 ω = 2π·fftfreq(M, dt) (wrap-around 순서, t 방향 주기 경계).
"""

import math
from concurrent.futures import ThreadPoolExecutor
from typing import List, Sequence, Tuple

import numpy as np
from numpy.fft import fft, fftfreq, ifft
from scipy import linalg

from src.domain.calculations.mc_oracle import sample_on_sphere
from src.domain.errors import DomainError
from src.domain.models import (
    SEED_UPPER,
    FiberParams,
    FieldGrid,
    InvarianceReport,
    JonesUnitary,
    MomentComparison,
    SphereSet,
)

KERR_FACTOR = 8.0 / 9.0
MIN_TRIALS = 100
# 쌍 비교에서 반올림 오차로 간주하는 상대 평균 차이
PAIRED_RESOLUTION = 1e-12
STATISTICS = ("energy", "moment_1", "moment_2", "moment_3", "moment_4")


def _check_seed(seed: int) -> None:
    if int(seed) != seed or not 0 <= seed < SEED_UPPER:
        raise DomainError(f"seed must be a 64-bit unsigned integer, got {seed!r}")


def _generator(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=int(seed)))


def _check_field(field: FieldGrid) -> None:
    m = field.samples
    if m & (m - 1):
        raise DomainError(f"field grid length must be a power of two, got {m}")
    if not (np.all(np.isfinite(field.ex)) and np.all(np.isfinite(field.ey))):
        raise DomainError("field samples must be finite")


def _stack(field: FieldGrid) -> np.ndarray:
    return np.vstack([field.ex, field.ey])


def _grid(stacked: np.ndarray, dt: float) -> FieldGrid:
    return FieldGrid(ex=stacked[0], ey=stacked[1], dt=dt)


# ============= 전파 =============

def split_step_propagate(field: FieldGrid, fiber: FiberParams, seed: int) -> FieldGrid:
    """
    대칭 split-step Fourier 방식의 Manakov 전파

    β₂ = 0이면 분산 단계를, γ = 0이면 Kerr 단계를, noise_psd = 0이면
    잡음 주입을 건너뜁니다 (이 경우 출력은 입력과 비트 단위로 동일).

    Args:
        field: 입력 필드 (길이는 2의 거듭제곱)
        fiber: 광섬유 파라미터
        seed: 잡음 시드

    Returns:
        z = length에서의 필드

    Raises:
        DomainError: 길이가 2의 거듭제곱이 아니거나 비유한 샘플
    """
    _check_field(field)
    _check_seed(seed)
    h = fiber.length / fiber.steps
    e = _stack(field).copy()

    omega = 2.0 * np.pi * fftfreq(field.samples, d=field.dt)
    half_dispersion = np.exp(1j * (fiber.beta2 / 2.0) * omega**2 * (h / 2.0))
    kerr = fiber.gamma * KERR_FACTOR * h
    noise_std = math.sqrt(fiber.noise_psd * h / field.dt)
    rng = _generator(seed) if fiber.noise_psd > 0 else None

    for _ in range(fiber.steps):
        if fiber.beta2 != 0:
            e = ifft(fft(e, axis=1) * half_dispersion, axis=1)
        if fiber.gamma != 0:
            power = np.sum(np.abs(e) ** 2, axis=0)
            e = e * np.exp(1j * kerr * power)
        if fiber.beta2 != 0:
            e = ifft(fft(e, axis=1) * half_dispersion, axis=1)
        if rng is not None:
            e = e + noise_std * (
                rng.standard_normal(e.shape) + 1j * rng.standard_normal(e.shape)
            )
    return _grid(e, field.dt)


def apply_jones_unitary(field: FieldGrid, u: JonesUnitary) -> FieldGrid:
    """
    샘플마다 (E_x, E_y) ← u·(E_x, E_y)

    Examples:
        >>> swap = JonesUnitary(u=[[0, 1], [1, 0]])
        >>> f = FieldGrid(ex=np.ones(8), ey=np.zeros(8), dt=1.0)
        >>> bool(np.all(apply_jones_unitary(f, swap).ey == 1))
        True
    """
    return _grid(u.u @ _stack(field), field.dt)


def inverse_unitary(u: JonesUnitary) -> JonesUnitary:
    """u⁻¹ = u†"""
    return JonesUnitary(u=u.u.conj().T)


def random_haar_unitary(seed: int) -> JonesUnitary:
    """
    Haar 분포 2×2 유니터리

    복소 가우시안 행렬의 QR 분해 후 R 대각 원소의 위상으로 Q의 열을 보정합니다.
    """
    _check_seed(seed)
    rng = _generator(seed)
    z = (rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))) / math.sqrt(2.0)
    q, r = linalg.qr(z)
    d = np.diag(r)
    phases = d / np.abs(d)
    return JonesUnitary(u=q * phases[None, :])


# ============= 관측량 =============

def field_energy(field: FieldGrid) -> float:
    """Σ(|E_x|² + |E_y|²)·dt"""
    return float(np.sum(np.abs(field.ex) ** 2 + np.abs(field.ey) ** 2) * field.dt)


def field_norm(field: FieldGrid) -> float:
    """이산 필드 벡터의 유클리드 노름"""
    return float(np.linalg.norm(_stack(field)))


def pointwise_norm(field: FieldGrid) -> np.ndarray:
    """샘플별 4-D 실수 노름 ‖E(t)‖"""
    return np.sqrt(np.abs(field.ex) ** 2 + np.abs(field.ey) ** 2)


def rotation_invariant_statistics(field: FieldGrid) -> np.ndarray:
    """[총 에너지, mean‖E‖, mean‖E‖², mean‖E‖³, mean‖E‖⁴]"""
    amplitude = pointwise_norm(field)
    moments = [float(np.mean(amplitude**m)) for m in range(1, 5)]
    return np.array([field_energy(field)] + moments)


def random_multisphere_field(sphere_set: SphereSet, samples: int, dt: float, seed: int) -> FieldGrid:
    """
    샘플마다 4-D 멀티스피어 심볼 (x₀,x₁,x₂,x₃)를 E_x = x₀ + ix₁, E_y = x₂ + ix₃로 배치

    초구는 확률 p_k로 고르고, 초구 위 점은 균등하게 뽑습니다.
    """
    _check_seed(seed)
    if samples < 8 or samples & (samples - 1):
        raise DomainError(f"samples must be a power of two of at least 8, got {samples}")
    rng = _generator(seed)
    choice = rng.choice(sphere_set.rings, size=samples, p=np.asarray(sphere_set.probs))
    symbols = np.empty((samples, 4))
    for k, radius in enumerate(sphere_set.radii):
        picked = choice == k
        if np.any(picked):
            symbols[picked] = sample_on_sphere(radius, 4, rng, int(picked.sum()))
    return FieldGrid(
        ex=symbols[:, 0] + 1j * symbols[:, 1],
        ey=symbols[:, 2] + 1j * symbols[:, 3],
        dt=dt,
    )


def _noiseless(fiber: FiberParams) -> FiberParams:
    return fiber.model_copy(update={"noise_psd": 0.0})


def equivariance_residual(field: FieldGrid, fiber: FiberParams, u: JonesUnitary) -> float:
    """무잡음 ‖propagate(u·e) − u·propagate(e)‖ / ‖e‖"""
    quiet = _noiseless(fiber)
    rotated_first = split_step_propagate(apply_jones_unitary(field, u), quiet, 0)
    rotated_last = apply_jones_unitary(split_step_propagate(field, quiet, 0), u)
    diff = _stack(rotated_first) - _stack(rotated_last)
    return float(np.linalg.norm(diff)) / field_norm(field)


def energy_residual(field: FieldGrid, fiber: FiberParams) -> float:
    """무잡음 전파 전후 에너지의 상대 변화"""
    before = field_energy(field)
    after = field_energy(split_step_propagate(field, _noiseless(fiber), 0))
    return abs(after - before) / before


def step_halving_ratio(field: FieldGrid, fiber: FiberParams) -> float:
    """
    무잡음 출력의 스텝 수 배가 오차 비율

    ‖E(n) − E(2n)‖ / ‖E(2n) − E(4n)‖. 대칭 분할은 2차 정확도이므로 4 근처.
    """
    quiet = _noiseless(fiber)
    outputs = [
        _stack(split_step_propagate(field, quiet.model_copy(update={"steps": fiber.steps * m}), 0))
        for m in (1, 2, 4)
    ]
    coarse = np.linalg.norm(outputs[0] - outputs[1])
    fine = np.linalg.norm(outputs[1] - outputs[2])
    return float(coarse / fine)


# ============= 통계적 불변성 =============

def trial_seed(seed: int, trial: int) -> int:
    """시행별 잡음 시드 (SeedSequence로 (seed, trial) 혼합)"""
    state = np.random.SeedSequence([int(seed), int(trial)]).generate_state(1, dtype=np.uint64)
    return int(state[0])


def compare_paired(name: str, reference: np.ndarray, compared: np.ndarray) -> MomentComparison:
    """
    같은 입력·잡음 시드를 공유하는 두 경로의 통계량 비교

    시행별 차이 d = compared − reference의 평균을 그 표준오차로 나눈 z를 보고합니다.
    |평균 차이|가 기준 평균의 PAIRED_RESOLUTION배 이하이면 반올림 오차로 보고 z = 0.
    """
    n = reference.size
    mean_ref, mean_cmp = float(np.mean(reference)), float(np.mean(compared))
    d = np.asarray(compared, dtype=float) - np.asarray(reference, dtype=float)
    diff = float(np.mean(d))
    stderr = float(np.std(d, ddof=1)) / math.sqrt(n)
    if diff == 0.0 or abs(diff) <= PAIRED_RESOLUTION * abs(mean_ref):
        z = 0.0
    elif stderr == 0.0:
        z = math.copysign(math.inf, diff)
    else:
        z = diff / stderr
    return MomentComparison(
        statistic=name,
        mean_reference=mean_ref,
        mean_compared=mean_cmp,
        combined_stderr=stderr,
        z_score=z,
    )


def invariance_test(
    input_ensemble: Sequence[FieldGrid],
    fiber: FiberParams,
    u: JonesUnitary,
    trials: int,
    seed: int,
    workers: int = 1,
) -> InvarianceReport:
    """
    Manakov 전파의 통계적 회전불변성 검정

    시행 t마다 입력 e = ensemble[t mod len]과 잡음 시드 s_t로
    a = propagate(e), b = propagate(u·e), c = u⁻¹·b를 만들고
    회전불변 관측량 (총 에너지, ‖E(t)‖의 1–4차 모멘트)을
    시행별 차이의 표준오차 단위로 비교합니다 (b vs a, c vs a).
    같은 시행 안에서는 두 경로가 같은 입력과 잡음 시드를 공유하므로 쌍 비교입니다.

    Args:
        input_ensemble: 입력 필드 목록 (1개 이상)
        fiber: 광섬유 파라미터
        u: 입력에 적용할 Jones 유니터리
        trials: 시행 수 (≥ 100)
        seed: 64비트 시드
        workers: 시행 병렬 스레드 수 (결과는 동일)

    Returns:
        InvarianceReport (무잡음 동변성·에너지 잔차 포함)

    Raises:
        DomainError: trials < 100 또는 빈 앙상블
    """
    if trials < MIN_TRIALS:
        raise DomainError(f"invariance tests need at least {MIN_TRIALS} trials, got {trials}")
    if not input_ensemble:
        raise DomainError("input ensemble must not be empty")
    _check_seed(seed)
    for field in input_ensemble:
        _check_field(field)

    u_inv = inverse_unitary(u)
    rotated_inputs = [apply_jones_unitary(e, u) for e in input_ensemble]

    def run(trial: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        k = trial % len(input_ensemble)
        s = trial_seed(seed, trial)
        a = split_step_propagate(input_ensemble[k], fiber, s)
        b = split_step_propagate(rotated_inputs[k], fiber, s)
        c = apply_jones_unitary(b, u_inv)
        return (
            rotation_invariant_statistics(a),
            rotation_invariant_statistics(b),
            rotation_invariant_statistics(c),
        )

    if workers <= 1:
        rows: List[Tuple[np.ndarray, np.ndarray, np.ndarray]] = [run(t) for t in range(trials)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(run, range(trials)))

    stats_a = np.array([r[0] for r in rows])
    stats_b = np.array([r[1] for r in rows])
    stats_c = np.array([r[2] for r in rows])

    rotated = tuple(compare_paired(name, stats_a[:, j], stats_b[:, j]) for j, name in enumerate(STATISTICS))
    rotated_back = tuple(compare_paired(name, stats_a[:, j], stats_c[:, j]) for j, name in enumerate(STATISTICS))

    return InvarianceReport(
        trials=trials,
        rotated=rotated,
        rotated_back=rotated_back,
        equivariance_residual=max(equivariance_residual(e, fiber, u) for e in input_ensemble),
        energy_residual=max(energy_residual(e, fiber) for e in input_ensemble),
    )
