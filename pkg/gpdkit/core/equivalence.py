"""
X como equivalencia entre (X/G)⋈H y G⋈(H\\X): construcción del testigo y
verificación exhaustiva de la equivalencia de grupoides.
"""
import logging
from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, List, Mapping, Tuple

from ..models import ValidationReport
from .checks import run_check
from .construct import (OrbitGroupoid, ProductGroupoid, orbit_groupoid_left, orbit_groupoid_right,
                        quotient_left_action, quotient_right_action, zs_product_left, zs_product_right)
from .errors import ConsistencyError
from .orbits import find_orbits
from .selfsimilar import (LeftSelfSimilarAction, ParaEquivalence, certify_para_equivalence,
                          trivial_group_right_action)

logger = logging.getLogger(__name__)

Pair = Tuple[int, int]


@dataclass(frozen=True, eq=False)
class EquivalenceWitness:
    """
    Testigo de equivalencia: A = (X/G)⋈H actúa por izquierda sobre X con
    momento 𝔯 y C = G⋈(H\\X) por derecha con momento 𝔰
    """
    para: ParaEquivalence
    X_mod_G: OrbitGroupoid
    H_mod_X: OrbitGroupoid
    A: ProductGroupoid
    C: ProductGroupoid
    frak_r: Tuple[int, ...]
    frak_s: Tuple[int, ...]
    left_act: Mapping[Pair, int]
    right_act: Mapping[Pair, int]

    @property
    def X(self):
        return self.para.X


def _unique_index(name: str, keys: List[Tuple[int, int]]) -> Dict[Tuple[int, int], int]:
    index: Dict[Tuple[int, int], int] = {}
    for x, key in enumerate(keys):
        prev = index.setdefault(key, x)
        if prev != x:
            raise ConsistencyError(f"{name}: dos representantes {prev} y {x} en la misma órbita y fibra "
                                   f"(la acción no es libre)", [prev, x])
    return index


def build_equivalence(p: ParaEquivalence) -> EquivalenceWitness:
    """
    (ξ,h)·y = x(h⥅y) con x ∈ ξ el único con s(x) = r(h⥅y);
    y·(t,η) = (y⋊t)z con z ∈ η el único con r(z) = s(y⋊t)
    """
    left, right = p.left, p.right
    X = p.X
    QG = orbit_groupoid_right(right)
    QH = orbit_groupoid_left(left)
    A = zs_product_left(quotient_left_action(p, QG))
    C = zs_product_right(quotient_right_action(p, QH))

    frak_r = tuple(A.unit_of(QG.of(X.rng[y])) for y in X.elements)
    frak_s = tuple(C.unit_of(QH.of(X.src[y])) for y in X.elements)

    by_right_class = _unique_index("X/G", [(QG.of(x), X.src[x]) for x in X.elements])
    by_left_class = _unique_index("H\\X", [(QH.of(z), X.rng[z]) for z in X.elements])

    fiber_r: Dict[int, List[int]] = defaultdict(list)
    fiber_s: Dict[int, List[int]] = defaultdict(list)
    for y in X.elements:
        fiber_r[frak_r[y]].append(y)
        fiber_s[frak_s[y]].append(y)

    left_act: Dict[Pair, int] = {}
    for alpha, (xi, h) in enumerate(A.pairs):
        for y in fiber_r.get(A.base.src[alpha], ()):
            hy = left.act[(h, y)]
            x = by_right_class.get((xi, X.rng[hy]))
            if x is None:
                raise ConsistencyError(f"ningún representante de la clase {xi} compone con {X.label(hy)}",
                                       [alpha, y])
            left_act[(alpha, y)] = X.mul[(x, hy)]

    right_act: Dict[Pair, int] = {}
    for gamma, (t, eta) in enumerate(C.pairs):
        for y in fiber_s.get(C.base.rng[gamma], ()):
            yt = right.act[(y, t)]
            z = by_left_class.get((eta, X.src[yt]))
            if z is None:
                raise ConsistencyError(f"ningún representante de la clase {eta} compone con {X.label(yt)}",
                                       [y, gamma])
            right_act[(y, gamma)] = X.mul[(yt, z)]

    logger.info(f"🤝 Testigo de equivalencia: {A.base.name} ~ {C.base.name} sobre {X.name} "
                f"({len(left_act)} + {len(right_act)} acciones)")
    return EquivalenceWitness(p, QG, QH, A, C, frak_r, frak_s, left_act, right_act)


def one_sided_equivalence(a: LeftSelfSimilarAction) -> EquivalenceWitness:
    """X⋈H ~ H\\X, tomando G trivial"""
    return build_equivalence(certify_para_equivalence(a, trivial_group_right_action(a.X)))


def check_orbit_range_source(w: EquivalenceWitness) -> ValidationReport:
    """
    Rango y fuente explícitos sobre A y C para todo representante:
    r(ξ,h) = r(x)⋊G, s(ξ,h) = (h⁻¹⥅s(x))⋊G, r(t,η) = H⥅(r(y)⋊t⁻¹),
    s(t,η) = H⥅s(y)
    """
    X = w.X
    left, right = w.para.left, w.para.right
    A, C, QG, QH = w.A, w.C, w.X_mod_G, w.H_mod_X
    H, G = left.H, right.G
    report = ValidationReport(subject=f"{A.base.name}|{C.base.name}")

    items_a = [(alpha, x) for alpha, (xi, _) in enumerate(A.pairs) for x in QG.classes[xi]]

    def a_formulas(item: Pair) -> bool:
        alpha, x = item
        h = A.pairs[alpha][1]
        return (A.base.rng[alpha] == A.unit_of(QG.of(X.rng[x]))
                and A.base.src[alpha] == A.unit_of(QG.of(left.act[(H.inv[h], X.src[x])])))

    items_c = [(gamma, y) for gamma, (_, eta) in enumerate(C.pairs) for y in QH.classes[eta]]

    def c_formulas(item: Pair) -> bool:
        gamma, y = item
        t = C.pairs[gamma][0]
        return (C.base.rng[gamma] == C.unit_of(QH.of(right.act[(X.rng[y], G.inv[t])]))
                and C.base.src[gamma] == C.unit_of(QH.of(X.src[y])))

    report.add(run_check("range-source-left", items_a, a_formulas))
    report.add(run_check("range-source-right", items_c, c_formulas))
    return report


def _principality(name: str, momentum: Tuple[int, ...], orbit_pairs, space: List[int],
                  units: Tuple[int, ...]) -> List:
    _, class_of = find_orbits(orbit_pairs, space)
    fibers: Dict[int, set] = defaultdict(set)
    orbits: Dict[int, set] = defaultdict(set)
    for y in space:
        fibers[momentum[y]].add(y)
        orbits[class_of[y]].add(y)
    return [
        run_check(f"{name}-fibers-are-orbits", space, lambda y: fibers[momentum[y]] == orbits[class_of[y]]),
        run_check(f"{name}-surjective", list(units), lambda u: u in fibers),
    ]


def verify_equivalence(w: EquivalenceWitness) -> ValidationReport:
    """
    Leyes de ambas acciones, compatibilidad de momentos, libertad,
    conmutación, principalidad y fórmulas de rango/fuente, todo por
    enumeración exhaustiva
    """
    X = w.X
    A, C = w.A.base, w.C.base
    r, s = w.frak_r, w.frak_s
    la, ra = w.left_act, w.right_act
    report = ValidationReport(subject=f"{A.name} ~ {C.name}")
    ys = list(X.elements)
    fiber_r: Dict[int, List[int]] = defaultdict(list)
    fiber_s: Dict[int, List[int]] = defaultdict(list)
    for y in ys:
        fiber_r[r[y]].append(y)
        fiber_s[s[y]].append(y)

    # Acción izquierda de A
    expected_left = sorted((alpha, y) for alpha in A.elements for y in fiber_r.get(A.src[alpha], ()))
    report.add(run_check("left-total", expected_left, lambda p: p in la))
    report.add(run_check("left-momentum", sorted(la), lambda p: r[la[p]] == A.rng[p[0]]))
    report.add(run_check("left-unit", ys, lambda y: la.get((r[y], y)) == y))
    left_triples = sorted((alpha, beta, y) for (alpha, beta) in A.composable_pairs
                          for y in fiber_r.get(A.src[beta], ()))

    def left_assoc(t: Tuple[int, int, int]) -> bool:
        alpha, beta, y = t
        inner = la.get((beta, y))
        lhs = la.get((A.mul[(alpha, beta)], y))
        return lhs is not None and inner is not None and lhs == la.get((alpha, inner))

    report.add(run_check("left-associativity", left_triples, left_assoc))

    # Acción derecha de C
    expected_right = sorted((y, gamma) for gamma in C.elements for y in fiber_s.get(C.rng[gamma], ()))
    report.add(run_check("right-total", expected_right, lambda p: p in ra))
    report.add(run_check("right-momentum", sorted(ra), lambda p: s[ra[p]] == C.src[p[1]]))
    report.add(run_check("right-unit", ys, lambda y: ra.get((y, s[y])) == y))
    right_triples = sorted((y, gamma, delta) for (gamma, delta) in C.composable_pairs
                           for y in fiber_s.get(C.rng[gamma], ()))

    def right_assoc(t: Tuple[int, int, int]) -> bool:
        y, gamma, delta = t
        inner = ra.get((y, gamma))
        lhs = ra.get((y, C.mul[(gamma, delta)]))
        return lhs is not None and inner is not None and lhs == ra.get((inner, delta))

    report.add(run_check("right-associativity", right_triples, right_assoc))

    # Compatibilidad de momentos, libertad y conmutación
    report.add(run_check("momentum-compatibility-left", sorted(la), lambda p: s[la[p]] == s[p[1]]))
    report.add(run_check("momentum-compatibility-right", sorted(ra), lambda p: r[ra[p]] == r[p[0]]))
    report.add(run_check("left-free", sorted(la), lambda p: la[p] != p[1] or A.is_unit(p[0])))
    report.add(run_check("right-free", sorted(ra), lambda p: ra[p] != p[0] or C.is_unit(p[1])))

    gammas_by_range: Dict[int, List[int]] = defaultdict(list)
    for gamma in C.elements:
        gammas_by_range[C.rng[gamma]].append(gamma)
    commuting = sorted((alpha, y, gamma) for (alpha, y) in la for gamma in gammas_by_range.get(s[y], ()))

    def commutes(t: Tuple[int, int, int]) -> bool:
        alpha, y, gamma = t
        left_first = ra.get((la[(alpha, y)], gamma))
        right_first = la.get((alpha, ra[(y, gamma)])) if (y, gamma) in ra else None
        return left_first is not None and left_first == right_first

    report.add(run_check("commutation", commuting, commutes))

    # Principalidad: 𝔯 identifica X/C con A⁽⁰⁾ y 𝔰 identifica A\X con C⁽⁰⁾
    for check in _principality("principal-r", r, ((y, z) for (y, _), z in ra.items()), ys, A.units):
        report.add(check)
    for check in _principality("principal-s", s, ((y, z) for (_, y), z in la.items()), ys, C.units):
        report.add(check)

    report.extend(check_orbit_range_source(w))
    if report.ok:
        logger.info(f"✅ Equivalencia verificada: {report.subject}")
    else:
        logger.warning(f"❌ Equivalencia rechazada: {report.failures[0].check}")
    return report
