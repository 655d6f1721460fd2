"""
Álgebra de convolución de un grupoide finito: resumen de bloques de
matrices, compatibilidad de Morita y unidades matriciales.
"""
import logging
from collections import defaultdict
from typing import Dict, Mapping, Tuple

from ..models import GroupoidAlgebraSummary, ValidationReport
from .checks import run_check
from .errors import StructureError
from .groupoid import FiniteGroupoid, components

logger = logging.getLogger(__name__)

# Funciones finitamente soportadas: id → coeficiente
Function = Dict[int, complex]


def algebra_summary(g: FiniteGroupoid) -> GroupoidAlgebraSummary:
    """
    Órbitas de unidades e isotropía. Un grupoide principal tiene álgebra
    ≅ ⊕ M_n(ℂ) con un bloque por componente y n = tamaño de la órbita; en
    el caso no principal se omiten los bloques y se reporta la isotropía.
    """
    comps = components(g)
    sizes = [len(c) for c in comps]
    for u in g.units:
        loops = [x for x in g.isotropy(u) if x != u]
        if loops:
            logger.debug(f"🔎 {g.name}: isotropía no trivial en {g.label(u)}")
            return GroupoidAlgebraSummary(source=g.name, size=g.size, principal=False, components=sizes,
                                          isotropy_witness=[u, loops[0]])
    return GroupoidAlgebraSummary(source=g.name, size=g.size, principal=True, components=sizes,
                                  block_dims=sizes)


def morita_compatible(a: GroupoidAlgebraSummary, b: GroupoidAlgebraSummary) -> bool:
    """Sumas de álgebras de matrices son Morita equivalentes sii tienen el mismo número de bloques"""
    if not (a.principal and b.principal):
        raise StructureError(f"morita_compatible requiere grupoides principales ({a.source}, {b.source})")
    return len(a.block_dims or []) == len(b.block_dims or [])


def convolution_product(g: FiniteGroupoid, f1: Mapping[int, complex], f2: Mapping[int, complex]) -> Function:
    """(f1∗f2)(x) = Σ_{x=yz} f1(y) f2(z)"""
    out: Function = defaultdict(int)
    right_by_range: Dict[int, list] = defaultdict(list)
    for z, c in f2.items():
        if c:
            right_by_range[g.rng[z]].append((z, c))
    for y, c1 in f1.items():
        if not c1:
            continue
        for z, c2 in right_by_range.get(g.src[y], ()):
            out[g.mul[(y, z)]] += c1 * c2
    return {x: c for x, c in out.items() if c}


def matrix_units(g: FiniteGroupoid) -> Dict[Tuple[int, int], Function]:
    """e_{uv} = δ de la única flecha de v a u, en un grupoide principal"""
    units: Dict[Tuple[int, int], Function] = {}
    for x in g.elements:
        key = (g.rng[x], g.src[x])
        if key in units:
            raise StructureError(f"{g.name} no es principal: dos flechas de {g.label(key[1])} a {g.label(key[0])}")
        units[key] = {x: 1}
    return units


def verify_matrix_units(g: FiniteGroupoid) -> ValidationReport:
    """
    e_uv∗e_vw = e_uw, e_uv∗e_wz = 0 si v ≠ w, y Σ n² = |g|, en aritmética entera
    """
    report = ValidationReport(subject=f"M({g.name})")
    summary = algebra_summary(g)
    principal = report.add(run_check("principal", [g.name], lambda _: summary.principal,
                                     witness=lambda _: summary.isotropy_witness or []))
    if not principal.passed:
        return report
    e = matrix_units(g)
    by_comp = [sorted(c) for c in components(g)]

    products = [(u, v, w) for comp in by_comp for u in comp for v in comp for w in comp]
    report.add(run_check("matrix-unit-products", products,
                         lambda t: convolution_product(g, e[(t[0], t[1])], e[(t[1], t[2])]) == e[(t[0], t[2])]))

    keys = sorted(e)
    orthogonal = [(a, b) for a in keys for b in keys if a[1] != b[0]]
    report.add(run_check("matrix-unit-orthogonality", orthogonal,
                         lambda p: not convolution_product(g, e[p[0]], e[p[1]]),
                         witness=lambda p: [*p[0], *p[1]]))
    report.add(run_check("block-count", [g.name],
                         lambda _: sum(n * n for n in summary.block_dims) == g.size))
    return report
