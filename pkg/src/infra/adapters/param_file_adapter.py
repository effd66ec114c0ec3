"""
Safe parameter-file reading using returns library

Result 타입으로 manakov-check TOML 파라미터 파일 읽기
파싱/검증 오류는 줄 번호를 포함한 메시지로 Failure가 됩니다.
"""

import re
import sys

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib
from pathlib import Path
from typing import List, Optional

from pydantic import ValidationError
from returns.result import Failure, Result, Success

from src.domain.models import ManakovCheckConfig


def _key_line(lines: List[str], key: str) -> Optional[int]:
    """key = ... 가 처음 나오는 줄 번호 (1부터)"""
    pattern = re.compile(rf"^\s*{re.escape(key)}\s*=")
    for number, text in enumerate(lines, 1):
        if pattern.match(text):
            return number
    return None


def describe_validation_error(path: str, text: str, error: ValidationError) -> str:
    """
    ValidationError를 'path:line: key: message' 형식의 줄들로 변환

    값이 없는 필수 키는 줄 번호 없이 'missing key'로 표시합니다.
    """
    lines = text.splitlines()
    messages = []
    for item in error.errors():
        key = str(item["loc"][0]) if item["loc"] else ""
        number = _key_line(lines, key) if key else None
        if item["type"] == "missing":
            messages.append(f"{path}: missing key '{key}'")
        elif number is None:
            messages.append(f"{path}: {key}: {item['msg']}")
        else:
            messages.append(f"{path}:{number}: {key}: {item['msg']}")
    return "\n".join(messages)


class ParamFileAdapter:
    """
    manakov-check 파라미터 파일 어댑터

    Examples:
        >>> result = ParamFileAdapter().read("params/desk_scale.toml")
        >>> result.map(lambda c: c.samples)
        <Success: 1024>
    """

    def __init__(self, verbose: bool = True):
        self.verbose = verbose

    def read(self, file_path: str) -> Result[ManakovCheckConfig, str]:
        """
        TOML 파일 → ManakovCheckConfig

        Returns:
            Result[ManakovCheckConfig, str]
            - Success: 검증된 설정
            - Failure: 'path:line: ...' 형식의 오류 메시지
        """
        path = Path(file_path)
        if not path.exists():
            return Failure(f"File not found: {file_path}")

        text = path.read_text(encoding="utf-8")
        try:
            data = tomllib.loads(text)
        except tomllib.TOMLDecodeError as e:
            return Failure(f"{file_path}: TOML parse error: {e}")

        try:
            config = ManakovCheckConfig.from_toml_dict(data)
        except ValidationError as e:
            return Failure(describe_validation_error(file_path, text, e))

        if self.verbose:
            print(f"[ParamFileAdapter] Loaded {file_path} (M={config.samples}, {config.trials} trials)")
        return Success(config)
