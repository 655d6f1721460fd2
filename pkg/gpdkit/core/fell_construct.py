"""
Fibrados producto y cociente, realizados en el modelo matricial mediante la
representación regular izquierda, y las acciones cociente sobre fibrados.
"""
import logging
from dataclasses import dataclass
from typing import Callable, Dict, Mapping, Optional, Tuple

import numpy as np

from ..models import ValidationReport
from .checks import run_check, run_numeric_check, tolerance_ok
from .construct import (OrbitGroupoid, ProductGroupoid, orbit_groupoid_left, orbit_groupoid_right,
                        quotient_left_action, quotient_right_action, zs_product_left, zs_product_right)
from .errors import CertificationError, ConsistencyError, StructureError
from .fell import (FellBundle, FellLeftAction, FellRightAction, check_fell_left_action,
                   check_fell_right_action, is_saturated, max_abs, validate_fell)
from .groupoid import FiniteGroupoid
from .selfsimilar import ParaEquivalence, certify_para_equivalence, trivial_group_right_action

logger = logging.getLogger(__name__)

Pair = Tuple[int, int]


@dataclass(frozen=True, eq=False)
class FellStructure:
    """
    Fibrado dado sólo por sus constantes de estructura: rangos de fibra,
    tensores de multiplicación, matrices de involución y una traza fiel sobre
    las fibras de unidades
    """
    name: str
    base: FiniteGroupoid
    ranks: Tuple[int, ...]
    mult: Callable[[int, int], np.ndarray]
    star: Callable[[int], np.ndarray]
    unit_trace: Callable[[int, np.ndarray], complex]


def _sqrt_pair(gram: np.ndarray, name: str, unit: int) -> Tuple[np.ndarray, np.ndarray]:
    gram = (gram + gram.conj().T) / 2
    values, vectors = np.linalg.eigh(gram)
    if values.size == 0 or tolerance_ok(float(values.min()), float(values.max())):
        raise StructureError(f"{name}: la forma de traza no es definida positiva en la unidad {unit}")
    root = np.sqrt(values)
    return (vectors * root) @ vectors.conj().T, (vectors / root) @ vectors.conj().T


def realize(structure: FellStructure) -> FellBundle:
    """
    Realización por la representación regular izquierda: en la unidad u el
    espacio es la suma directa de las fibras sobre flechas con rango u, con
    producto interno ⟨ζ, ζ′⟩ = τ(ζ*ζ′). Las coordenadas de fibra se conservan.
    """
    g = structure.base
    k = structure.ranks
    slices: Dict[int, slice] = {}
    dims: Dict[int, int] = {}
    for u in g.units:
        offset = 0
        for gamma in g.by_range.get(u, ()):
            slices[gamma] = slice(offset, offset + k[gamma])
            offset += k[gamma]
        dims[u] = offset

    roots: Dict[int, Tuple[np.ndarray, np.ndarray]] = {}
    for u in g.units:
        gram = np.zeros((dims[u], dims[u]), dtype=np.complex128)
        for gamma in g.by_range.get(u, ()):
            star = structure.star(gamma)
            mult = structure.mult(g.inv[gamma], gamma)
            products = np.einsum("ai,ajn->ijn", star, mult)
            v = g.src[gamma]
            block = np.array([[structure.unit_trace(v, products[i, j]) for j in range(k[gamma])]
                              for i in range(k[gamma])], dtype=np.complex128).reshape(k[gamma], k[gamma])
            gram[slices[gamma], slices[gamma]] = block
        roots[u] = _sqrt_pair(gram, structure.name, u)

    bases = []
    for alpha in g.elements:
        r, s = g.rng[alpha], g.src[alpha]
        ops = np.zeros((k[alpha], dims[r], dims[s]), dtype=np.complex128)
        for gamma in g.by_range.get(s, ()):
            target = g.mul[(alpha, gamma)]
            mult = structure.mult(alpha, gamma)
            ops[:, slices[target], slices[gamma]] = mult.transpose(0, 2, 1)
        bases.append(np.einsum("ab,kbc,cd->kad", roots[r][0], ops, roots[s][1]))
    logger.debug(f"🧮 Realización de {structure.name}: dimensiones {sorted(set(dims.values()))}")
    return FellBundle.build(structure.name, g, dims, bases)


# Fibrados producto

def product_structure_left(fa: FellLeftAction, product: Optional[ProductGroupoid] = None) -> FellStructure:
    """
    B⋈H: (a,h)(b,k) = (a[h⥅_B b], [h⥆_B b]k), (b,h)* = (h⁻¹⥅_B b*, h⁻¹⥆_B b*)
    """
    a, B, T = fa.action, fa.bundle, fa.maps
    H, X = a.H, a.X
    P = product or zs_product_left(a)
    pairs = P.pairs

    def mult(alpha: int, beta: int) -> np.ndarray:
        (x, h), (y, _) = pairs[alpha], pairs[beta]
        return np.einsum("imn,mj->ijn", B.mult_tensor(x, a.act[(h, y)]), T[(h, y)])

    def star(alpha: int) -> np.ndarray:
        x, h = pairs[alpha]
        return T[(H.inv[h], X.inv[x])] @ B.star_matrix(x)

    return FellStructure(f"{B.name}⋈{H.name}", P.base, tuple(B.rank(x) for x, _ in pairs), mult, star,
                         lambda u, c: B.unit_trace(pairs[u][0], c))


def product_structure_right(fa: FellRightAction, product: Optional[ProductGroupoid] = None) -> FellStructure:
    """G⋈B: (s,b)(t,c) = (s[b⋉_B t], [b⋊_B t]c), (t,b)* = (b*⋉_B t⁻¹, b*⋊_B t⁻¹)"""
    a, B, T = fa.action, fa.bundle, fa.maps
    G, X = a.G, a.X
    P = product or zs_product_right(a)
    pairs = P.pairs

    def mult(alpha: int, beta: int) -> np.ndarray:
        (_, x), (t, y) = pairs[alpha], pairs[beta]
        return np.einsum("mjn,mi->ijn", B.mult_tensor(a.act[(x, t)], y), T[(x, t)])

    def star(alpha: int) -> np.ndarray:
        t, x = pairs[alpha]
        return T[(X.inv[x], G.inv[t])] @ B.star_matrix(x)

    return FellStructure(f"{G.name}⋈{B.name}", P.base, tuple(B.rank(x) for _, x in pairs), mult, star,
                         lambda u, c: B.unit_trace(pairs[u][1], c))


def product_bundle_left(fa: FellLeftAction, product: Optional[ProductGroupoid] = None) -> FellBundle:
    return realize(product_structure_left(fa, product))


def product_bundle_right(fa: FellRightAction, product: Optional[ProductGroupoid] = None) -> FellBundle:
    return realize(product_structure_right(fa, product))


# Fibrados cociente

@dataclass(frozen=True, eq=False)
class Transport:
    """
    Transporte de cada fibra S_x a la fibra del representante canónico de su
    órbita: to_rep[x] es (k_rep, k_x) y from_rep[x] es (k_x, k_rep)
    """
    orbit: OrbitGroupoid
    to_rep: Mapping[int, np.ndarray]
    from_rep: Mapping[int, np.ndarray]


def transport_left(fa: FellLeftAction, quotient: Optional[OrbitGroupoid] = None) -> Transport:
    a, T = fa.action, fa.maps
    H = a.H
    Q = quotient or orbit_groupoid_left(a)
    to_rep: Dict[int, np.ndarray] = {}
    from_rep: Dict[int, np.ndarray] = {}
    for x in a.X.elements:
        rep = Q.rep(Q.of(x))
        movers = [h for h in H.by_source.get(a.rho(x), ()) if a.act[(h, x)] == rep]
        if len(movers) != 1:
            raise ConsistencyError(f"{a.name}: {len(movers)} elementos llevan {a.X.label(x)} a su representante",
                                   [x])
        h = movers[0]
        to_rep[x] = T[(h, x)]
        from_rep[x] = T[(H.inv[h], rep)]
    return Transport(Q, to_rep, from_rep)


def transport_right(fa: FellRightAction, quotient: Optional[OrbitGroupoid] = None) -> Transport:
    a, T = fa.action, fa.maps
    G = a.G
    Q = quotient or orbit_groupoid_right(a)
    to_rep: Dict[int, np.ndarray] = {}
    from_rep: Dict[int, np.ndarray] = {}
    for x in a.X.elements:
        rep = Q.rep(Q.of(x))
        movers = [t for t in G.by_range.get(a.sigma(x), ()) if a.act[(x, t)] == rep]
        if len(movers) != 1:
            raise ConsistencyError(f"{a.name}: {len(movers)} elementos llevan {a.X.label(x)} a su representante",
                                   [x])
        t = movers[0]
        to_rep[x] = T[(x, t)]
        from_rep[x] = T[(rep, G.inv[t])]
    return Transport(Q, to_rep, from_rep)


def _composable_reps(Q: OrbitGroupoid, X: FiniteGroupoid) -> Dict[Pair, Pair]:
    chosen: Dict[Pair, Pair] = {}
    for x, y in X.composable_pairs:
        chosen.setdefault((Q.of(x), Q.of(y)), (x, y))
    return chosen


def _transported_product(B: FellBundle, tr: Transport, x: int, y: int) -> np.ndarray:
    xy = B.base.mul[(x, y)]
    return np.einsum("ai,bj,abm,nm->ijn", tr.from_rep[x], tr.from_rep[y], B.mult_tensor(x, y), tr.to_rep[xy])


def _transported_star(B: FellBundle, tr: Transport, x: int) -> np.ndarray:
    return tr.to_rep[B.base.inv[x]] @ B.star_matrix(x) @ np.conj(tr.from_rep[x])


def quotient_structure(name: str, B: FellBundle, tr: Transport) -> FellStructure:
    """
    Fibra sobre la clase ξ = fibra del representante canónico; los productos
    se calculan en representantes componibles y se transportan de vuelta
    """
    Q = tr.orbit
    chosen = _composable_reps(Q, B.base)

    def mult(xi: int, eta: int) -> np.ndarray:
        x, y = chosen[(xi, eta)]
        return _transported_product(B, tr, x, y)

    def star(xi: int) -> np.ndarray:
        return _transported_star(B, tr, Q.rep(xi))

    return FellStructure(name, Q.base, tuple(B.rank(Q.rep(k)) for k in Q.base.elements), mult, star,
                         lambda u, c: B.unit_trace(Q.rep(u), c))


def quotient_bundle_left(fa: FellLeftAction, quotient: Optional[OrbitGroupoid] = None) -> FellBundle:
    """H\\B sobre H\\X, realizado por transporte al representante canónico"""
    tr = transport_left(fa, quotient)
    return realize(quotient_structure(f"{fa.action.H.name}\\{fa.bundle.name}", fa.bundle, tr))


def quotient_bundle_right(fa: FellRightAction, quotient: Optional[OrbitGroupoid] = None) -> FellBundle:
    """B/G sobre X/G"""
    tr = transport_right(fa, quotient)
    return realize(quotient_structure(f"{fa.bundle.name}/{fa.action.G.name}", fa.bundle, tr))


def quotient_bundle_consistency(B: FellBundle, tr: Transport) -> ValidationReport:
    """
    Los productos e involuciones transportados coinciden para todo par
    componible de representantes, no sólo para los elegidos
    """
    Q = tr.orbit
    chosen = _composable_reps(Q, B.base)
    report = ValidationReport(subject=f"{B.name} / {Q.base.name}")

    def products(p: Pair) -> Tuple[float, float, None]:
        x, y = p
        reference = _transported_product(B, tr, *chosen[(Q.of(x), Q.of(y))])
        here = _transported_product(B, tr, x, y)
        return max_abs(here - reference), max(1.0, max_abs(reference)), None

    def stars(x: int) -> Tuple[float, float, None]:
        reference = _transported_star(B, tr, Q.rep(Q.of(x)))
        here = _transported_star(B, tr, x)
        return max_abs(here - reference), max(1.0, max_abs(reference)), None

    report.add(run_numeric_check("transported-products", list(B.base.composable_pairs), products))
    report.add(run_numeric_check("transported-involution", list(B.base.elements), stars))
    return report


# Sistema certificado y acciones cociente

@dataclass(frozen=True, eq=False)
class FellSystem:
    """Para-equivalencia con un fibrado saturado y acciones compatibles (BC1) de H y G"""
    para: ParaEquivalence
    left: FellLeftAction
    right: FellRightAction
    report: ValidationReport

    @property
    def bundle(self) -> FellBundle:
        return self.left.bundle


def check_bundle_compatibility(left: FellLeftAction, right: FellRightAction) -> ValidationReport:
    """
    BC1: (h⥅_B b)⋊_B t = h⥅_B(b⋊_B t). BC2 y BC3 son las restricciones a nivel
    de grupoide y se verifican sobre las mismas ternas.
    """
    la, ra = left.action, right.action
    TL, TR = left.maps, right.maps
    report = ValidationReport(subject=f"{left.name}|{right.name}")
    by_x: Dict[int, list] = {}
    for x, t in ra.domain:
        by_x.setdefault(x, []).append(t)
    triples = sorted((h, x, t) for (h, x) in la.domain for t in by_x.get(x, ()))
    inf = (float("inf"), 1.0, None)

    def bc1(tr: Tuple[int, int, int]) -> Tuple[float, float, None]:
        h, x, t = tr
        hx, xt = la.act[(h, x)], ra.act[(x, t)]
        if (hx, t) not in TR or (h, xt) not in TL:
            return inf
        lhs = TR[(hx, t)] @ TL[(h, x)]
        rhs = TL[(h, xt)] @ TR[(x, t)]
        return max_abs(lhs - rhs), max(1.0, max_abs(lhs)), None

    report.add(run_numeric_check("BC1", triples, bc1))
    report.add(run_check("BC2", triples,
                         lambda tr: ra.restr.get((la.act[(tr[0], tr[1])], tr[2])) == ra.restr[(tr[1], tr[2])]))
    report.add(run_check("BC3", triples,
                         lambda tr: la.restr.get((tr[0], ra.act[(tr[1], tr[2])])) == la.restr[(tr[0], tr[1])]))
    return report


def certify_fell_system(para: ParaEquivalence, left: FellLeftAction, right: FellRightAction) -> FellSystem:
    """
    Verifica el fibrado (F1–F10 y saturación), ambas acciones sobre el
    fibrado y BC1–BC3; falla con CertificationError y el primer reporte con fallas
    """
    if left.bundle is not right.bundle:
        raise StructureError(f"{left.name} y {right.name} no actúan sobre el mismo fibrado")
    if left.action is not para.left or right.action is not para.right:
        raise StructureError("las acciones sobre el fibrado no cubren las acciones de la para-equivalencia")
    full = ValidationReport(subject=f"{left.bundle.name}: {left.name}|{right.name}")

    def stage(report: ValidationReport, prefix: str) -> None:
        full.extend(report, prefix)
        if not report.ok:
            failure = report.failures[0]
            logger.warning(f"⚠️ {report.subject}: falla {failure.check} (testigo {failure.witness})")
            raise CertificationError(f"sistema de Fell rechazado en {prefix}{failure.check}", report)

    bundle_report = validate_fell(left.bundle)
    bundle_report.add(is_saturated(left.bundle))
    stage(bundle_report, "bundle.")
    stage(check_fell_left_action(left), "left.")
    stage(check_fell_right_action(right), "right.")
    stage(check_bundle_compatibility(left, right), "")
    full.extend(para.report, "para.")
    logger.info(f"✅ Sistema de Fell certificado: {full.subject}")
    return FellSystem(para, left, right, full)


def one_sided_fell_system(left: FellLeftAction) -> FellSystem:
    """Caso unilateral: G = {e} actuando trivialmente sobre B"""
    para = certify_para_equivalence(left.action, trivial_group_right_action(left.action.X))
    right = FellRightAction.coordinatewise(f"{left.bundle.name}|E", para.right, left.bundle)
    return certify_fell_system(para, left, right)


def _check_quotient_maps(name: str, items, measure) -> None:
    result = run_numeric_check("quotient-action-well-defined", items, measure)
    if not result.passed:
        raise ConsistencyError(f"{name}: la acción cociente depende del representante", result.witness)


def quotient_fell_actions(system: FellSystem,
                          left_orbits: Optional[OrbitGroupoid] = None,
                          right_orbits: Optional[OrbitGroupoid] = None
                          ) -> Tuple[FellRightAction, FellLeftAction]:
    """
    Ξ ⋊~ t = H⥅_B[b⋊_B t] sobre H\\B y h ⥅~ Ξ = [h⥅_B b]⋊_B G sobre B/G,
    con b ∈ Ξ; la independencia del representante se comprueba sobre todas
    las órbitas
    """
    para, left, right = system.para, system.left, system.right
    B = system.bundle
    QH = left_orbits or orbit_groupoid_left(para.left)
    QG = right_orbits or orbit_groupoid_right(para.right)
    tr_left = transport_left(left, QH)
    tr_right = transport_right(right, QG)

    # G sobre H\B
    g_action = quotient_right_action(para, QH)
    g_bundle = realize(quotient_structure(f"{para.H.name}\\{B.name}", B, tr_left))
    g_maps = {}
    for eta, t in g_action.domain:
        x0 = QH.rep(eta)
        g_maps[(eta, t)] = tr_left.to_rep[right.action.act[(x0, t)]] @ right.maps[(x0, t)]

    def g_measure(p: Pair) -> Tuple[float, float, None]:
        x, t = p
        here = tr_left.to_rep[right.action.act[p]] @ right.maps[p] @ tr_left.from_rep[x]
        ref = g_maps[(QH.of(x), t)]
        return max_abs(here - ref), max(1.0, max_abs(ref)), None

    _check_quotient_maps(g_action.name, list(right.action.domain), g_measure)
    right_q = FellRightAction(f"{g_bundle.name}|{para.G.name}", g_action, g_bundle, g_maps)

    # H sobre B/G
    h_action = quotient_left_action(para, QG)
    h_bundle = realize(quotient_structure(f"{B.name}/{para.G.name}", B, tr_right))
    h_maps = {}
    for h, xi in h_action.domain:
        x0 = QG.rep(xi)
        h_maps[(h, xi)] = tr_right.to_rep[left.action.act[(h, x0)]] @ left.maps[(h, x0)]

    def h_measure(p: Pair) -> Tuple[float, float, None]:
        h, x = p
        here = tr_right.to_rep[left.action.act[p]] @ left.maps[p] @ tr_right.from_rep[x]
        ref = h_maps[(h, QG.of(x))]
        return max_abs(here - ref), max(1.0, max_abs(ref)), None

    _check_quotient_maps(h_action.name, list(left.action.domain), h_measure)
    left_q = FellLeftAction(f"{para.H.name}|{h_bundle.name}", h_action, h_bundle, h_maps)
    logger.info(f"🔁 Acciones cociente sobre {g_bundle.name} y {h_bundle.name}")
    return right_q, left_q
