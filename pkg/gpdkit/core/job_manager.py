import logging
import uuid
from datetime import datetime
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

from .. import __version__
from ..models import CheckResult, CheckStatus, Report, ValidationReport
from .errors import CertificationError, NotFreeError

logger = logging.getLogger(__name__)

StageResult = Union[ValidationReport, CheckResult, None]
Stage = Tuple[str, Callable[[], StageResult]]


class CheckJobManager:
    """
    Ejecuta una secuencia de etapas de verificación, registra el progreso y
    arma el Report final. Una certificación fallida detiene las etapas
    siguientes; las demás fallas sólo se acumulan.
    """

    def __init__(self, command: str, input_digest: Optional[str] = None):
        self.job: Dict[str, Any] = {
            "id": str(uuid.uuid4()),
            "command": command,
            "status": "created",
            "progress": 0.0,
            "message": "Trabajo creado",
            "created_at": datetime.now(),
            "stage_times": {},
        }
        self.input_digest = input_digest
        self.checks: List[CheckResult] = []
        self.data: Dict[str, Any] = {}
        logger.debug(f"Trabajo creado: {self.job['id']} ({command})")

    def update_progress(self, progress: float, message: str) -> None:
        self.job.update({"progress": progress, "message": message, "updated_at": datetime.now()})
        filled = int(progress * 20)
        progress_bar = "█" * filled + "░" * (20 - filled)
        logger.info(f"📈 [{progress_bar}] {progress * 100:.1f}% - {message}")

    def add_report(self, report: ValidationReport, prefix: str = "") -> None:
        for c in report.checks:
            self.checks.append(c.model_copy(update={"check": prefix + c.check}))

    def add_check(self, result: CheckResult, prefix: str = "") -> None:
        self.checks.append(result.model_copy(update={"check": prefix + result.check}))

    def add_data(self, key: str, value: Any) -> None:
        self.data[key] = value

    def run(self, stages: Sequence[Stage]) -> Report:
        """
        Corre las etapas en orden. Cada etapa devuelve un reporte, un
        resultado suelto o None (si sólo aporta datos).
        """
        self.job["status"] = "running"
        total = len(stages)
        for i, (name, fn) in enumerate(stages):
            self.update_progress(i / max(total, 1), f"Etapa {name}")
            started = datetime.now()
            try:
                result = fn()
            except CertificationError as e:
                logger.warning(f"⚠️ {name}: {e}")
                self.add_report(e.report, f"{name}.")
                self.job["status"] = "failed"
                break
            except NotFreeError as e:
                logger.warning(f"⚠️ {name}: {e}")
                self.add_check(CheckResult(check="free", status=CheckStatus.FAIL, witness=e.witness,
                                           detail=str(e)), f"{name}.")
                self.job["status"] = "failed"
                break
            except Exception as e:
                logger.error(f"Error en la etapa {name}: {str(e)}")
                self.job["status"] = "error"
                raise
            finally:
                self.job["stage_times"][name] = (datetime.now() - started).total_seconds()
            if isinstance(result, ValidationReport):
                self.add_report(result, f"{name}.")
            elif isinstance(result, CheckResult):
                self.add_check(result, f"{name}.")
        else:
            self.job["status"] = "completed"
            self.update_progress(1.0, "Verificación completada")
        report = self.report()
        failures = sum(1 for c in report.checks if c.status == CheckStatus.FAIL)
        logger.info(f"✅ {len(report.checks)} verificaciones, {failures} con fallas" if report.ok
                    else f"❌ {len(report.checks)} verificaciones, {failures} con fallas")
        return report

    def report(self) -> Report:
        ok = self.job["status"] == "completed" and all(c.passed for c in self.checks)
        return Report(tool_version=__version__, command=self.job["command"], input_digest=self.input_digest,
                      ok=ok, checks=list(self.checks), data=dict(self.data))
