"""
Domain errors

수치 계산 전반에서 사용하는 예외 타입
- DomainError: 함수 정의역 위반 (음수 반지름, 비유한 입력 등)
- QuadratureError: 적분 미수렴 (최선 추정값을 함께 전달)
"""

from typing import Any, Optional


class DomainError(ValueError):
    """정의역을 벗어난 입력 (ValueError 하위 클래스)"""


class QuadratureError(RuntimeError):
    """
    수치 적분이 허용 오차 안으로 수렴하지 못한 경우

    Attributes:
        best: 미수렴 상태에서의 최선 추정값 (MIResult 또는 float, 없으면 None)
    """

    def __init__(self, message: str, best: Optional[Any] = None):
        super().__init__(message)
        self.best = best
