"""
Motor de enumeración de las verificaciones. Cada verificación recorre sus
tuplas en orden lexicográfico de ids; el espacio se parte en bloques
contiguos entre GPDKIT_THREADS trabajadores y el testigo reportado es
siempre el primero del bloque más temprano con falla, de modo que el
resultado no depende del número de hilos.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, List, Optional, Sequence, Tuple, TypeVar

from ..config import get_settings
from ..models import CheckResult, CheckStatus

logger = logging.getLogger(__name__)

T = TypeVar("T")


def _chunks(items: Sequence[T], parts: int) -> List[Sequence[T]]:
    size = max(1, -(-len(items) // parts))
    return [items[i:i + size] for i in range(0, len(items), size)]


def _scan(chunk: Sequence[T], predicate: Callable[[T], bool]) -> Optional[T]:
    for item in chunk:
        if not predicate(item):
            return item
    return None


def first_violation(items: Sequence[T], predicate: Callable[[T], bool]) -> Optional[T]:
    """
    Devuelve la primera tupla (en orden) que no cumple el predicado, o None
    """
    threads = get_settings().threads
    if threads <= 1 or len(items) < 2 * threads:
        return _scan(items, predicate)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        results = list(pool.map(lambda c: _scan(c, predicate), _chunks(items, threads)))
    for found in results:
        if found is not None:
            return found
    return None


def _as_witness(item: Any) -> List[Any]:
    if isinstance(item, tuple):
        return list(item)
    if isinstance(item, list):
        return item
    return [item]


def run_check(
    name: str,
    items: Sequence[T],
    predicate: Callable[[T], bool],
    witness: Callable[[T], List[Any]] = _as_witness,
    detail: Optional[str] = None,
) -> CheckResult:
    """
    Ejecuta una verificación exhaustiva sobre las tuplas dadas
    """
    items = items if isinstance(items, (list, tuple)) else list(items)
    bad = first_violation(items, predicate)
    if bad is not None:
        logger.debug(f"❌ {name}: testigo {bad}")
        return CheckResult(check=name, status=CheckStatus.FAIL, witness=witness(bad),
                           counts=len(items), detail=detail)
    return CheckResult(check=name, status=CheckStatus.PASS, counts=len(items), detail=detail)


def tolerance_ok(residual: float, scale: float) -> bool:
    """Tolerancia relativa con piso absoluto"""
    settings = get_settings()
    return residual <= max(settings.rel_tol * scale, settings.abs_tol)


def run_numeric_check(
    name: str,
    items: Sequence[T],
    measure: Callable[[T], Tuple[float, float, Any]],
    witness: Callable[[T], List[Any]] = _as_witness,
    detail: Optional[str] = None,
) -> CheckResult:
    """
    Verificación numérica: measure(item) devuelve (residuo, escala, extra).
    Se recorre todo el espacio para reportar el residuo relativo máximo;
    el testigo es el primer item fuera de tolerancia, ampliado con extra.
    """
    items = items if isinstance(items, (list, tuple)) else list(items)

    def scan(chunk: Sequence[T]) -> Tuple[float, Optional[List[Any]]]:
        worst = 0.0
        first = None
        for item in chunk:
            residual, scale, extra = measure(item)
            worst = max(worst, residual / max(scale, 1.0))
            if first is None and not tolerance_ok(residual, scale):
                first = witness(item) + (_as_witness(extra) if extra is not None else [])
        return worst, first

    threads = get_settings().threads
    if threads <= 1 or len(items) < 2 * threads:
        results = [scan(items)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(scan, _chunks(items, threads)))

    worst = max((r[0] for r in results), default=0.0)
    for _, first in results:
        if first is not None:
            return CheckResult(check=name, status=CheckStatus.FAIL, witness=first,
                               counts=len(items), residual=worst, detail=detail)
    return CheckResult(check=name, status=CheckStatus.PASS, counts=len(items),
                       residual=worst, detail=detail)


def auto_pass(name: str, detail: str = "finite discrete") -> CheckResult:
    return CheckResult(check=name, status=CheckStatus.AUTO_PASS_FINITE, detail=detail)


def skipped(name: str, detail: str) -> CheckResult:
    return CheckResult(check=name, status=CheckStatus.SKIPPED, detail=detail)
