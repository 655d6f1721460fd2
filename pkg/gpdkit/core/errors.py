from typing import Any, Optional, Sequence


class GpdkitError(Exception):
    """Error base de gpdkit"""


class StructureError(GpdkitError):
    """
    Tablas mal formadas: ids fuera de rango, mapas no totales, formas incompatibles.
    No es una violación de axioma: el objeto ni siquiera puede construirse.
    """


class DomainError(GpdkitError):
    """Un mapa parcial está definido fuera de su dominio declarado (o falta dentro de él)"""

    def __init__(self, message: str, witness: Optional[Sequence[int]] = None):
        super().__init__(message)
        self.witness = list(witness) if witness is not None else None


class NotFreeError(GpdkitError):
    """La acción no es libre; lleva el testigo (h, x) con h no unidad y h⥅x = x"""

    def __init__(self, message: str, witness: Sequence[int]):
        super().__init__(message)
        self.witness = list(witness)


class CertificationError(GpdkitError):
    """Una certificación falló; lleva el primer reporte con fallas"""

    def __init__(self, message: str, report: Any):
        super().__init__(message)
        self.report = report


class ConsistencyError(GpdkitError):
    """
    Falla de unicidad o de buena definición. Si las hipótesis se certificaron,
    indica un bug aguas arriba.
    """

    def __init__(self, message: str, witness: Optional[Sequence[Any]] = None):
        super().__init__(message)
        self.witness = list(witness) if witness is not None else None


class DslError(GpdkitError):
    """Error del DSL con posición (línea, columna), ambas desde 1"""

    kind = "dsl"

    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.message = message
        self.line = line
        self.col = col
        super().__init__(f"{line}:{col}: {message}")


class DslSyntaxError(DslError):
    kind = "syntax"


class DslReferenceError(DslError):
    kind = "reference"


class DslArityError(DslError):
    kind = "arity"


class DslElaborationError(DslError):
    kind = "elaboration"


class UsageError(GpdkitError):
    """Uso incorrecto de la CLI: bloque inexistente, de otro tipo o ejemplo desconocido"""
