"""
Domain Models - Immutable data structures using Pydantic

This module defines the core data models used throughout the application.
All models are frozen (immutable) so every calculation stays pure.
"""

import math
from typing import Any, Callable, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

SEED_UPPER = 2**64
NORMALIZATION_TOL = 1e-6
PROB_SUM_TOL = 1e-12
UNITARITY_TOL = 1e-12


# ============= 채널 / 입력 분포 =============

class ChannelParams(BaseModel):
    """
    AWGN 채널 파라미터

    Attributes:
        dims: 실수 차원 수 N (2 이상)
        sigma: 실수 차원당 잡음 표준편차 (σ² = N₀/2)
        snr: SNR A = E[‖X‖²]/N₀ (선형 스케일)

    Examples:
        >>> params = ChannelParams(dims=2, sigma=1.0, snr=5.0)
        >>> params.signal_energy
        10.0
    """
    model_config = ConfigDict(frozen=True)

    dims: int = Field(..., ge=2, description="실수 차원 수 N")
    sigma: float = Field(..., gt=0, allow_inf_nan=False, description="잡음 표준편차")
    snr: float = Field(..., ge=0, allow_inf_nan=False, description="선형 SNR A")

    @property
    def n0(self) -> float:
        """양측 잡음 전력 밀도의 두 배, N₀ = 2σ²"""
        return 2.0 * self.sigma**2

    @property
    def signal_energy(self) -> float:
        """E[‖X‖²] = A·N₀ = 2σ²A"""
        return self.n0 * self.snr

    @classmethod
    def from_snr_db(cls, dims: int, snr_db: float, sigma: float = 1.0) -> "ChannelParams":
        """dB 단위 SNR (10·log₁₀A)로부터 생성"""
        return cls(dims=dims, sigma=sigma, snr=10.0 ** (snr_db / 10.0))


class SphereSet(BaseModel):
    """
    K개 동심 초구(hypersphere)의 반지름과 확률 (X의 이산 반지름 분포)

    Attributes:
        radii: 반지름 s_k (엄격히 증가, 양수)
        probs: 확률 p_k (양수, 합 = 1)
    """
    model_config = ConfigDict(frozen=True)

    radii: Tuple[float, ...] = Field(..., min_length=1, description="반지름 리스트")
    probs: Tuple[float, ...] = Field(..., min_length=1, description="확률 리스트")

    @model_validator(mode="after")
    def _check_law(self) -> "SphereSet":
        if len(self.radii) != len(self.probs):
            raise ValueError(
                f"radii and probs must have the same length ({len(self.radii)} != {len(self.probs)})"
            )
        if not all(math.isfinite(s) and s > 0 for s in self.radii):
            raise ValueError("radii must be finite and positive")
        if any(b <= a for a, b in zip(self.radii, self.radii[1:])):
            raise ValueError("radii must be strictly increasing")
        if not all(math.isfinite(p) and p > 0 for p in self.probs):
            raise ValueError("probs must be finite and positive")
        if abs(math.fsum(self.probs) - 1.0) > PROB_SUM_TOL:
            raise ValueError(f"probs must sum to 1 (got {math.fsum(self.probs)!r})")
        return self

    @property
    def rings(self) -> int:
        """초구 개수 K"""
        return len(self.radii)


class RadialLaw(BaseModel):
    """
    일반 회전불변 입력의 반지름 밀도 f_{‖X‖}

    density는 numpy 배열(및 float)에 대해 벡터화된 함수여야 합니다.
    [support_lower, support_upper] 밖에서는 밀도를 0으로 취급합니다.

    Attributes:
        density: s ↦ f_{‖X‖}(s)
        support_upper: 절단 반지름 (이후 밀도 0)
        support_lower: 지지 하한 (기본값 0)
        points: 적분기에 전달할 급변 지점 힌트 (봉우리 위치 등)
        name: 표시용 이름
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    density: Callable[[Any], Any]
    support_upper: float = Field(..., gt=0, allow_inf_nan=False)
    support_lower: float = Field(default=0.0, ge=0, allow_inf_nan=False)
    points: Tuple[float, ...] = Field(default=())
    name: str = Field(default="custom")

    @model_validator(mode="after")
    def _check_density(self) -> "RadialLaw":
        from scipy import integrate

        if self.support_lower >= self.support_upper:
            raise ValueError("support_lower must be below support_upper")

        grid = np.linspace(self.support_lower, self.support_upper, 257)
        values = np.asarray(self.density(grid), dtype=float)
        if np.any(~np.isfinite(values)) or np.any(values < 0):
            raise ValueError(f"density of law '{self.name}' must be finite and nonnegative")

        inner = [p for p in self.points if self.support_lower < p < self.support_upper]
        mass, _ = integrate.quad(
            lambda s: float(self.density(s)),
            self.support_lower,
            self.support_upper,
            points=inner or None,
            epsabs=1e-12,
            epsrel=1e-10,
            limit=500,
        )
        if abs(mass - 1.0) > NORMALIZATION_TOL:
            raise ValueError(f"density of law '{self.name}' integrates to {mass!r}, not 1")
        return self


# ============= 적분 / 결과 =============

class QuadratureConfig(BaseModel):
    """
    봉우리 인지(peak-aware) 합성 Gauss–Legendre 적분 설정

    Attributes:
        rel_tol: 목표 상대 오차
        abs_tol: 절대 오차 하한 (bits)
        peak_halfwidth: 봉우리 주변 정밀 구간의 반폭 (r̃ 단위)
        base_panels: 봉우리 밖 거친 패널 수
        max_refinements: 최대 이분 세분 횟수
        gauss_order: 패널당 Gauss–Legendre 노드 수
    """
    model_config = ConfigDict(frozen=True)

    rel_tol: float = Field(default=1e-8, gt=0)
    abs_tol: float = Field(default=1e-12, gt=0)
    peak_halfwidth: float = Field(default=8.0, gt=0)
    base_panels: int = Field(default=64, gt=0)
    max_refinements: int = Field(default=30, ge=1)
    gauss_order: int = Field(default=10, ge=2)


class MIResult(BaseModel):
    """
    상호정보량 계산 결과

    Attributes:
        bits_per_nd_use: N차원 채널 사용당 bits
        error_estimate: 적분 오차 추정 (bits)
        evaluations: 피적분 함수 평가 횟수
        refinements: 수행한 세분 횟수
    """
    model_config = ConfigDict(frozen=True)

    bits_per_nd_use: float = Field(..., ge=0)
    error_estimate: float = Field(..., ge=0)
    evaluations: int = Field(..., ge=0)
    refinements: int = Field(default=0, ge=0)


class MCEstimate(BaseModel):
    """
    Monte Carlo 상호정보량 추정값

    Attributes:
        estimate: 추정값 (bits per N-D use)
        stderr: 평균의 표준오차 (bits)
        samples: 표본 수
        seed: 64비트 부호 없는 시드
    """
    model_config = ConfigDict(frozen=True)

    estimate: float
    stderr: float = Field(..., ge=0)
    samples: int = Field(..., ge=1)
    seed: int = Field(..., ge=0, lt=SEED_UPPER)


# ============= 광섬유 (Manakov) =============

class FiberParams(BaseModel):
    """
    Split-step 전파 파라미터

    Attributes:
        beta2: 군속도 분산 (s²/m)
        gamma: Kerr 계수 (1/(W·m)), 8/9 Manakov 인자를 곱해 적용
        length: 전파 거리 (m)
        steps: split-step 구간 수
        noise_psd: 편광·직교성분당 백색잡음 스펙트럼 밀도 (구간마다 주입)
    """
    model_config = ConfigDict(frozen=True)

    beta2: float = Field(..., allow_inf_nan=False)
    gamma: float = Field(..., allow_inf_nan=False)
    length: float = Field(..., gt=0, allow_inf_nan=False)
    steps: int = Field(..., ge=1)
    noise_psd: float = Field(default=0.0, ge=0, allow_inf_nan=False)


class FieldGrid(BaseModel):
    """
    이중 편광 복소 광필드 샘플 [E_x, E_y]

    배열은 생성 시 복사 후 읽기 전용으로 고정됩니다.

    Attributes:
        ex: x 편광 필드 (√W)
        ey: y 편광 필드 (√W)
        dt: 샘플 간격 (s)
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    ex: np.ndarray
    ey: np.ndarray
    dt: float = Field(..., gt=0, allow_inf_nan=False)

    @field_validator("ex", "ey", mode="before")
    @classmethod
    def _freeze_array(cls, v: Any) -> np.ndarray:
        arr = np.array(v, dtype=np.complex128).reshape(-1)
        arr.setflags(write=False)
        return arr

    @model_validator(mode="after")
    def _check_shape(self) -> "FieldGrid":
        if self.ex.shape != self.ey.shape:
            raise ValueError(f"ex and ey must have equal length ({self.ex.size} != {self.ey.size})")
        if self.ex.size < 8:
            raise ValueError("field grids need at least 8 samples")
        return self

    @property
    def samples(self) -> int:
        return int(self.ex.size)


class JonesUnitary(BaseModel):
    """2×2 복소 유니터리 행렬 (u†u = I, 허용 오차 1e-12)"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    u: np.ndarray

    @field_validator("u", mode="before")
    @classmethod
    def _check_unitary(cls, v: Any) -> np.ndarray:
        u = np.array(v, dtype=np.complex128)
        if u.shape != (2, 2):
            raise ValueError(f"Jones matrix must be 2x2, got {u.shape}")
        if not np.all(np.isfinite(u)):
            raise ValueError("Jones matrix must be finite")
        defect = np.max(np.abs(u.conj().T @ u - np.eye(2)))
        if defect > UNITARITY_TOL:
            raise ValueError(f"Jones matrix is not unitary (defect {defect:.3e})")
        u.setflags(write=False)
        return u

    @classmethod
    def identity(cls) -> "JonesUnitary":
        return cls(u=np.eye(2))


# ============= 스윕 / 리포트 =============

class SweepSpec(BaseModel):
    """
    (N, K, A) 격자 스윕 설정

    Attributes:
        dims_list: 차원 N 목록
        rings_list: 초구 수 K 목록 (custom_set이 있으면 무시)
        snr_db_start / snr_db_stop / snr_db_step: SNR 범위 (dB, 10·log₁₀A)
        normalize_4d: 두 축에 4/N 정규화 적용
        oracle_samples: Monte Carlo 표본 수 (0이면 생략)
        seed: 64비트 시드
        custom_set: 균등 간격 집합 대신 사용할 사용자 지정 SphereSet
    """
    model_config = ConfigDict(frozen=True)

    dims_list: Tuple[int, ...] = Field(..., min_length=1)
    rings_list: Tuple[int, ...] = Field(default=(1,), min_length=1)
    snr_db_start: float = Field(..., allow_inf_nan=False)
    snr_db_stop: float = Field(..., allow_inf_nan=False)
    snr_db_step: float = Field(default=1.0, gt=0, allow_inf_nan=False)
    normalize_4d: bool = False
    oracle_samples: int = Field(default=0, ge=0)
    seed: int = Field(default=42, ge=0, lt=SEED_UPPER)
    custom_set: Optional[SphereSet] = None

    @model_validator(mode="after")
    def _check_grid(self) -> "SweepSpec":
        if self.snr_db_stop < self.snr_db_start:
            raise ValueError("snr_db_stop must not be below snr_db_start")
        if any(n < 2 for n in self.dims_list):
            raise ValueError("every dimension must be at least 2")
        if any(k < 1 for k in self.rings_list):
            raise ValueError("every ring count must be at least 1")
        if self.normalize_4d and any(n % 2 for n in self.dims_list):
            raise ValueError("4/N normalization requires even dimensions")
        if 0 < self.oracle_samples < 1000:
            raise ValueError("oracle_samples must be 0 (skip) or at least 1000")
        return self

    def snr_db_values(self) -> List[float]:
        """시작~종료(포함) dB 값 목록, 누적 오차 없이 생성"""
        count = int(math.floor((self.snr_db_stop - self.snr_db_start) / self.snr_db_step + 1e-9)) + 1
        return [round(self.snr_db_start + i * self.snr_db_step, 12) for i in range(count)]


class SweepPoint(BaseModel):
    """스윕 격자의 한 점 (N, K, SNR dB)"""
    model_config = ConfigDict(frozen=True)

    dims: int = Field(..., ge=2)
    rings: int = Field(..., ge=1)
    snr_db: float = Field(..., allow_inf_nan=False)


class SweepRow(BaseModel):
    """스윕 결과 한 행 (정규화 전, N차원 단위)"""
    model_config = ConfigDict(frozen=True)

    snr_db: float
    dims: int
    rings: int
    mi_bits: Optional[float] = None
    capacity_bits: float
    quad_error_bits: Optional[float] = None
    oracle_mi: Optional[float] = None
    oracle_stderr: Optional[float] = None
    status: str = "ok"


class OracleReport(BaseModel):
    """
    한 점에서의 적분값과 두 Monte Carlo 추정기 비교

    Attributes:
        mi_bits: 적분 엔진 결과
        quad_error_bits: 적분 오차 추정
        vector: 벡터 추정기 결과
        radial: 반지름 추정기 결과
        floor_bits: 일치 판정의 절대 하한 (기본 5e-3 bits)
    """
    model_config = ConfigDict(frozen=True)

    dims: int
    rings: int
    snr_db: float
    mi_bits: float
    quad_error_bits: float
    vector: MCEstimate
    radial: MCEstimate
    floor_bits: float = 5e-3
    sigmas: float = 3.0

    def _agrees(self, estimate: MCEstimate) -> bool:
        return abs(self.mi_bits - estimate.estimate) <= max(self.sigmas * estimate.stderr, self.floor_bits)

    @property
    def vector_agrees(self) -> bool:
        return self._agrees(self.vector)

    @property
    def radial_agrees(self) -> bool:
        return self._agrees(self.radial)

    @property
    def oracles_agree(self) -> bool:
        """두 추정기가 결합 표준오차의 sigmas배 안에서 일치"""
        combined = math.hypot(self.vector.stderr, self.radial.stderr)
        return abs(self.vector.estimate - self.radial.estimate) <= self.sigmas * combined

    @property
    def passed(self) -> bool:
        return self.vector_agrees and self.radial_agrees and self.oracles_agree


class CrossoverReport(BaseModel):
    """
    두 개의 2-D 멀티링 vs 하나의 4-D 멀티스피어 비교

    Attributes:
        snr4d_db: 4-D SNR (dB)
        rings: K
        rate_two_2d: R₂ = 2·MI(N=2, K, A₄d/2)
        rate_one_4d: R₄ = MI(N=4, K, A₄d)
        error_bound: 두 적분 오차 추정의 합 (bits)
    """
    model_config = ConfigDict(frozen=True)

    snr4d_db: float
    rings: int
    rate_two_2d: float
    rate_one_4d: float
    error_bound: float = Field(..., ge=0)

    @property
    def difference(self) -> float:
        return self.rate_two_2d - self.rate_one_4d

    @property
    def two_2d_better(self) -> bool:
        return self.difference > 0


class MomentComparison(BaseModel):
    """
    회전불변 통계량 하나에 대한 두 경로 비교

    Attributes:
        combined_stderr: 시행별 차이 평균의 표준오차 (쌍 비교)
        z_score: 평균 차이 / combined_stderr
    """
    model_config = ConfigDict(frozen=True)

    statistic: str
    mean_reference: float
    mean_compared: float
    combined_stderr: float = Field(..., ge=0)
    z_score: float
    threshold: float = 3.0

    @property
    def passed(self) -> bool:
        return abs(self.z_score) <= self.threshold


class InvarianceReport(BaseModel):
    """
    Manakov 통계적 회전불변성 검정 결과

    Attributes:
        trials: 앙상블 시행 수
        rotated: propagate(e) vs propagate(u·e) 비교
        rotated_back: propagate(e) vs u⁻¹·propagate(u·e) 비교
        equivariance_residual: 무잡음 ‖propagate(u·e) − u·propagate(e)‖/‖e‖
        energy_residual: 무잡음 에너지 보존 상대 오차
    """
    model_config = ConfigDict(frozen=True)

    trials: int = Field(..., ge=1)
    rotated: Tuple[MomentComparison, ...]
    rotated_back: Tuple[MomentComparison, ...]
    equivariance_residual: float = Field(..., ge=0)
    energy_residual: float = Field(..., ge=0)
    residual_tol: float = 1e-10

    @property
    def passed(self) -> bool:
        return (
            all(c.passed for c in self.rotated + self.rotated_back)
            and self.equivariance_residual <= self.residual_tol
            and self.energy_residual <= self.residual_tol
        )


class ManakovCheckConfig(BaseModel):
    """
    manakov-check 파라미터 파일 내용

    TOML 매핑: 최상위 키 (beta2, gamma, length, steps, noise_psd, samples, dt, trials, seed)

    Attributes:
        samples: 시간 샘플 수 M (2의 거듭제곱)
        trials: 앙상블 시행 수 (100 이상)
        power: 4-D 심볼 평균 전력 (W)
        rings: 입력 4-D 멀티스피어의 초구 수
        ensemble_size: 서로 다른 입력 필드 개수
    """
    model_config = ConfigDict(frozen=True, extra="forbid")

    beta2: float = Field(..., allow_inf_nan=False)
    gamma: float = Field(..., allow_inf_nan=False)
    length: float = Field(..., gt=0, allow_inf_nan=False)
    steps: int = Field(default=20, ge=1)
    noise_psd: float = Field(default=0.0, ge=0, allow_inf_nan=False)
    samples: int = Field(default=1024, ge=8)
    dt: float = Field(..., gt=0, allow_inf_nan=False)
    trials: int = Field(default=1000, ge=100)
    seed: int = Field(default=42, ge=0, lt=SEED_UPPER)
    power: float = Field(default=1e-3, gt=0, allow_inf_nan=False)
    rings: int = Field(default=2, ge=1)
    ensemble_size: int = Field(default=8, ge=1)

    @field_validator("samples")
    @classmethod
    def _power_of_two(cls, v: int) -> int:
        if v & (v - 1):
            raise ValueError(f"samples must be a power of two, got {v}")
        return v

    def fiber(self) -> FiberParams:
        return FiberParams(
            beta2=self.beta2,
            gamma=self.gamma,
            length=self.length,
            steps=self.steps,
            noise_psd=self.noise_psd,
        )

    @classmethod
    def from_toml_dict(cls, toml_dict: dict) -> "ManakovCheckConfig":
        """
        TOML 딕셔너리를 설정 객체로 변환

        [manakov] 테이블이 있으면 그 안의 키를, 없으면 최상위 키를 사용합니다.

        Raises:
            ValidationError: 값이 올바르지 않은 경우
        """
        data = toml_dict.get("manakov", toml_dict)
        return cls(**data)
