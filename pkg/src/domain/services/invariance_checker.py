"""
InvarianceChecker - Manakov 통계적 회전불변성 검정 서비스

파라미터 파일 설정으로부터 입력 앙상블과 Jones 유니터리를 만들고
invariance_test를 실행합니다.
"""

import math
from typing import List

from src.domain.calculations.manakov import (
    invariance_test,
    random_haar_unitary,
    random_multisphere_field,
    trial_seed,
)
from src.domain.calculations.radial import uniform_sphere_set
from src.domain.models import (
    ChannelParams,
    FieldGrid,
    InvarianceReport,
    JonesUnitary,
    ManakovCheckConfig,
    MomentComparison,
)

# trial_seed의 trial 자리에 쓰는 파생 시드 오프셋 (시행 번호와 겹치지 않음)
ENSEMBLE_OFFSET = 2**40
UNITARY_OFFSET = 2**41


class InvarianceChecker:
    """
    manakov-check 실행기

    Examples:
        >>> checker = InvarianceChecker()
        >>> report = checker.check(config, identity=True)
        >>> report.passed
        True
    """

    def __init__(self, workers: int = 1, verbose: bool = True):
        self.workers = max(1, workers)
        self.verbose = verbose

    def _log(self, message: str) -> None:
        if self.verbose:
            print(f"[InvarianceChecker] {message}")

    def build_ensemble(self, config: ManakovCheckConfig) -> List[FieldGrid]:
        """
        평균 심볼 전력 config.power인 4-D 멀티스피어 입력 필드 목록

        초구 집합은 N=4 균등 간격 규칙으로 만들고, 필드마다 다른 파생 시드를 씁니다.
        """
        params = ChannelParams(dims=4, sigma=math.sqrt(config.power / 2.0), snr=1.0)
        sphere_set = uniform_sphere_set(config.rings, params)
        return [
            random_multisphere_field(
                sphere_set, config.samples, config.dt, trial_seed(config.seed, ENSEMBLE_OFFSET + i)
            )
            for i in range(config.ensemble_size)
        ]

    def unitary(self, config: ManakovCheckConfig, identity: bool = False) -> JonesUnitary:
        """검정에 쓸 유니터리 (identity=True면 항등 행렬)"""
        if identity:
            return JonesUnitary.identity()
        return random_haar_unitary(trial_seed(config.seed, UNITARY_OFFSET))

    def check(self, config: ManakovCheckConfig, identity: bool = False) -> InvarianceReport:
        """
        검정 실행

        Args:
            config: 파라미터 파일 내용
            identity: True면 항등 유니터리 사용

        Returns:
            InvarianceReport
        """
        ensemble = self.build_ensemble(config)
        u = self.unitary(config, identity)
        self._log(
            f"{config.trials} trials, M={config.samples}, {config.steps} steps, "
            f"{len(ensemble)} input field(s), {'identity' if identity else 'Haar'} unitary"
        )
        report = invariance_test(ensemble, config.fiber(), u, config.trials, config.seed, self.workers)
        self._log(
            f"equivariance residual {report.equivariance_residual:.3e}, "
            f"energy residual {report.energy_residual:.3e} -> {'PASS' if report.passed else 'FAIL'}"
        )
        return report

    @staticmethod
    def format_report(report: InvarianceReport) -> List[str]:
        """리포트를 사람이 읽을 수 있는 줄 목록으로 변환"""
        def line(kind: str, c: MomentComparison) -> str:
            verdict = "pass" if c.passed else "FAIL"
            return (
                f"{kind:<12} {c.statistic:<9} ref={c.mean_reference:.9e} "
                f"cmp={c.mean_compared:.9e} z={c.z_score:+.3f} {verdict}"
            )

        lines = [line("rotated", c) for c in report.rotated]
        lines += [line("rotated-back", c) for c in report.rotated_back]
        lines.append(f"equivariance residual {report.equivariance_residual:.3e} (tol {report.residual_tol:g})")
        lines.append(f"energy residual       {report.energy_residual:.3e} (tol {report.residual_tol:g})")
        lines.append(f"result: {'PASS' if report.passed else 'FAIL'} over {report.trials} trials")
        return lines
