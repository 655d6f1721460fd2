from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field


class CheckStatus(str, Enum):
    """Estados posibles de una verificación"""
    PASS = "pass"
    FAIL = "fail"
    AUTO_PASS_FINITE = "auto-pass-finite"  # Condición topológica, automática en el caso finito discreto
    SKIPPED = "skipped"


class CheckResult(BaseModel):
    """Resultado de una verificación individual"""
    check: str
    status: CheckStatus
    witness: Optional[List[Any]] = None
    counts: int = 0
    detail: Optional[str] = None
    residual: Optional[float] = None

    @property
    def passed(self) -> bool:
        return self.status != CheckStatus.FAIL


class ValidationReport(BaseModel):
    """Reporte ordenado de verificaciones sobre un objeto"""
    subject: str
    checks: List[CheckResult] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> List[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def get(self, check: str) -> Optional[CheckResult]:
        for c in self.checks:
            if c.check == check:
                return c
        return None

    def add(self, result: CheckResult) -> CheckResult:
        self.checks.append(result)
        return result

    def extend(self, other: "ValidationReport", prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(c.model_copy(update={"check": prefix + c.check}))


class FreenessResult(BaseModel):
    """Resultado de la prueba de libertad de una acción"""
    free: bool
    witness: Optional[List[int]] = None
    unit_space_free: bool
    agrees: bool
    counts: int = 0
    period: Optional[int] = None
    detail: Optional[str] = None


class Report(BaseModel):
    """Reporte JSON emitido por la CLI"""
    tool_version: str
    command: str
    input_digest: Optional[str] = None
    ok: bool
    checks: List[CheckResult] = Field(default_factory=list)
    data: Dict[str, Any] = Field(default_factory=dict)


class GroupoidAlgebraSummary(BaseModel):
    """Invariantes de Morita del álgebra de convolución de un grupoide finito"""
    source: str
    size: int
    principal: bool
    components: List[int] = Field(default_factory=list)
    block_dims: Optional[List[int]] = None
    isotropy_witness: Optional[List[int]] = None
