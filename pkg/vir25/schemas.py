from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, computed_field


class CommandResult(BaseModel):
    command: str
    inputs: Dict[str, Any] = {}
    output: Any = None
    status: Literal["ok", "error"] = "ok"
    message: Optional[str] = None


class SuiteCheck(BaseModel):
    name: str
    location: str
    expected: Any
    actual: Any = None
    passed: bool
    error: Optional[str] = None


class SuiteReport(BaseModel):
    checks: List[SuiteCheck] = []

    @computed_field
    @property
    def passed(self) -> int:
        return sum(1 for check in self.checks if check.passed)

    @computed_field
    @property
    def failed(self) -> int:
        return len(self.checks) - self.passed

    @property
    def ok(self) -> bool:
        return self.failed == 0
