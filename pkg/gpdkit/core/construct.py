"""
Grupoides derivados de acciones autosimilares: productos X⋈H y G⋈X,
grupoides de órbitas H\\X y X/G, acciones cociente, levantamiento a par
emparejado y la acción sobre el producto torcido.
"""
import logging
from collections import Counter
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Tuple

from ..models import ValidationReport
from .checks import run_check
from .errors import ConsistencyError, NotFreeError
from .groupoid import (FiniteGroupoid, GroupoidMorphism, groupoid_from_objects,
                       skew_product_groupoid)
from .selfsimilar import (LeftSelfSimilarAction, ParaEquivalence, RightSelfSimilarAction,
                          check_left_axioms, is_free, is_free_right, orbits_left, orbits_right)

logger = logging.getLogger(__name__)

Pair = Tuple[int, int]


def _compose(g: FiniteGroupoid, a: int, b: int, context: str) -> int:
    c = g.compose(a, b)
    if c is None:
        raise ConsistencyError(f"{context}: {g.label(a)}·{g.label(b)} no está definido en {g.name}", [a, b])
    return c


@dataclass(frozen=True, eq=False)
class ProductGroupoid:
    """
    Producto autosimilar con su capa de reindexado: pairs[i] es el par
    (x, h) (lado izquierdo) o (t, x) (lado derecho) del elemento i
    """
    base: FiniteGroupoid
    pairs: Tuple[Pair, ...]
    index: Mapping[Pair, int]
    side: str
    left: Optional[LeftSelfSimilarAction] = None
    right: Optional[RightSelfSimilarAction] = None

    def element(self, a: int, b: int) -> int:
        return self.index[(a, b)]

    def unit_of(self, v: int) -> int:
        """Unidad del producto que corresponde a la unidad v de X"""
        if self.side == "left":
            return self.index[(v, self.left.rho0[v])]
        return self.index[(self.right.sigma0[v], v)]


def zs_product_left(a: LeftSelfSimilarAction) -> ProductGroupoid:
    """
    X⋈H: pares (x, h) con ρ(x⁻¹) = r_H(h),
    (x,h)(y,k) = (x(h⥅y), (h⥆y)k) y (x,h)⁻¹ = (h⁻¹⥅x⁻¹, h⁻¹⥆x⁻¹)
    """
    H, X = a.H, a.X
    act, restr, rho0 = a.act, a.restr, a.rho0
    objects = [(x, h) for x in X.elements for h in H.by_range.get(a.rho(X.inv[x]), ())]

    def src_of(p: Pair) -> Pair:
        x, h = p
        v = act[(H.inv[h], X.src[x])]
        return v, rho0[v]

    def rng_of(p: Pair) -> Pair:
        v = X.rng[p[0]]
        return v, rho0[v]

    def inv_of(p: Pair) -> Pair:
        x, h = p
        return act[(H.inv[h], X.inv[x])], restr[(H.inv[h], X.inv[x])]

    def compose(p: Pair, q: Pair) -> Optional[Pair]:
        (x, h), (y, k) = p, q
        if act[(H.inv[h], X.src[x])] != X.rng[y]:
            return None
        return (_compose(X, x, act[(h, y)], a.name),
                _compose(H, restr[(h, y)], k, a.name))

    base, index = groupoid_from_objects(
        f"{X.name}⋈{H.name}", objects, src_of, rng_of, inv_of, compose,
        label_of=lambda p: f"({X.label(p[0])},{H.label(p[1])})")
    logger.debug(f"🧩 {base.name}: {base.size} elementos, {len(base.units)} unidades")
    return ProductGroupoid(base, tuple(objects), index, "left", left=a)


def zs_product_right(a: RightSelfSimilarAction) -> ProductGroupoid:
    """
    G⋈X: pares (t, x) con s_G(t) = σ⁰(r(x)),
    (s,x)(t,y) = (s(x⋉t), (x⋊t)y) y (t,x)⁻¹ = (x⁻¹⋉t⁻¹, x⁻¹⋊t⁻¹)
    """
    G, X = a.G, a.X
    act, restr, sigma0 = a.act, a.restr, a.sigma0
    objects = [(t, x) for t in G.elements for x in X.elements if G.src[t] == sigma0[X.rng[x]]]

    def src_of(p: Pair) -> Pair:
        v = X.src[p[1]]
        return sigma0[v], v

    def rng_of(p: Pair) -> Pair:
        t, x = p
        v = act[(X.rng[x], G.inv[t])]
        return sigma0[v], v

    def inv_of(p: Pair) -> Pair:
        t, x = p
        return restr[(X.inv[x], G.inv[t])], act[(X.inv[x], G.inv[t])]

    def compose(p: Pair, q: Pair) -> Optional[Pair]:
        (s, x), (t, y) = p, q
        if X.src[x] != act[(X.rng[y], G.inv[t])]:
            return None
        return (_compose(G, s, restr[(x, t)], a.name),
                _compose(X, act[(x, t)], y, a.name))

    base, index = groupoid_from_objects(
        f"{G.name}⋈{X.name}", objects, src_of, rng_of, inv_of, compose,
        label_of=lambda p: f"({G.label(p[0])},{X.label(p[1])})")
    logger.debug(f"🧩 {base.name}: {base.size} elementos, {len(base.units)} unidades")
    return ProductGroupoid(base, tuple(objects), index, "right", right=a)


@dataclass(frozen=True, eq=False)
class OrbitGroupoid:
    """
    Grupoide de órbitas. La clase k tiene representante canónico
    classes[k][0] (id mínimo); class_map envía cada elemento de X a su clase.
    """
    base: FiniteGroupoid
    classes: Tuple[Tuple[int, ...], ...]
    class_map: Tuple[int, ...]
    side: str
    left: Optional[LeftSelfSimilarAction] = None
    right: Optional[RightSelfSimilarAction] = None

    def rep(self, k: int) -> int:
        return self.classes[k][0]

    def of(self, x: int) -> int:
        return self.class_map[x]


def _orbit_base(name: str, X: FiniteGroupoid, classes: List[List[int]], class_of: List[int]) -> FiniteGroupoid:
    reps = [c[0] for c in classes]
    mul: Dict[Pair, int] = {}
    for (x, y), xy in X.mul.items():
        key = (class_of[x], class_of[y])
        found = mul.setdefault(key, class_of[xy])
        if found != class_of[xy]:
            raise ConsistencyError(f"{name}: el producto de clases depende de los representantes", [x, y])
    units = sorted({class_of[u] for u in X.units})
    return FiniteGroupoid.build(
        name,
        [class_of[X.src[r]] for r in reps], [class_of[X.rng[r]] for r in reps],
        [class_of[X.inv[r]] for r in reps], mul,
        labels=[X.label(r) for r in reps], units=units)


def orbit_groupoid_left(a: LeftSelfSimilarAction) -> OrbitGroupoid:
    """
    H\\X con s(H⥅x) = H⥅s(x), r(H⥅x) = H⥅r(x) y ξη = H⥅(xy). Se rechazan
    las acciones no libres.
    """
    freeness = is_free(a)
    if not freeness.free:
        raise NotFreeError(f"{a.name} no es libre: h⥅x = x con h no unidad", freeness.witness)
    classes, class_of = orbits_left(a)
    base = _orbit_base(f"{a.H.name}\\{a.X.name}", a.X, classes, class_of)
    logger.debug(f"🌀 {base.name}: {len(classes)} órbitas")
    return OrbitGroupoid(base, tuple(tuple(c) for c in classes), tuple(class_of), "left", left=a)


def orbit_groupoid_right(a: RightSelfSimilarAction) -> OrbitGroupoid:
    """X/G, espejo de orbit_groupoid_left"""
    freeness = is_free_right(a)
    if not freeness.free:
        raise NotFreeError(f"{a.name} no es libre: x⋊t = x con t no unidad", freeness.witness)
    classes, class_of = orbits_right(a)
    base = _orbit_base(f"{a.X.name}/{a.G.name}", a.X, classes, class_of)
    logger.debug(f"🌀 {base.name}: {len(classes)} órbitas")
    return OrbitGroupoid(base, tuple(tuple(c) for c in classes), tuple(class_of), "right", right=a)


def _well_defined(table: Dict, key, value, name: str, witness: List[int]) -> None:
    found = table.setdefault(key, value)
    if found != value:
        raise ConsistencyError(f"{name}: la acción cociente depende del representante", witness)


def quotient_left_action(p: ParaEquivalence, quotient: Optional[OrbitGroupoid] = None) -> LeftSelfSimilarAction:
    """
    Acción de H sobre X/G: h⥅~(x⋊G) = (h⥅x)⋊G, h⥆~(x⋊G) = h⥆x,
    ρ~(x⋊G) = ρ(x). La independencia del representante se verifica sobre
    todos los miembros de cada clase.
    """
    left = p.left
    Q = quotient or orbit_groupoid_right(p.right)
    name = f"{left.H.name}|{Q.base.name}"
    rho0: Dict[int, int] = {}
    for u in left.X.units:
        _well_defined(rho0, Q.of(u), left.rho0[u], name, [u])
    act: Dict[Pair, int] = {}
    restr: Dict[Pair, int] = {}
    for (h, x), y in left.act.items():
        key = (h, Q.of(x))
        _well_defined(act, key, Q.of(y), name, [h, x])
        _well_defined(restr, key, left.restr[(h, x)], name, [h, x])
    return LeftSelfSimilarAction.build(name, left.H, Q.base, rho0, act, restr)


def quotient_right_action(p: ParaEquivalence, quotient: Optional[OrbitGroupoid] = None) -> RightSelfSimilarAction:
    """
    Acción de G sobre H\\X: (H⥅x)⋊~t = H⥅(x⋊t), (H⥅x)⋉~t = x⋉t,
    σ~(H⥅x) = σ(x)
    """
    right = p.right
    Q = quotient or orbit_groupoid_left(p.left)
    name = f"{Q.base.name}|{right.G.name}"
    sigma0: Dict[int, int] = {}
    for u in right.X.units:
        _well_defined(sigma0, Q.of(u), right.sigma0[u], name, [u])
    act: Dict[Pair, int] = {}
    restr: Dict[Pair, int] = {}
    for (x, t), y in right.act.items():
        key = (Q.of(x), t)
        _well_defined(act, key, Q.of(y), name, [x, t])
        _well_defined(restr, key, right.restr[(x, t)], name, [x, t])
    return RightSelfSimilarAction.build(name, right.G, Q.base, sigma0, act, restr)


# Levantamiento a par emparejado

@dataclass(frozen=True, eq=False)
class MatchedPairLift:
    """
    H̃ = H⋉X⁽⁰⁾ con elementos (h, u), s_H(h) = ρ⁰(u), y la acción levantada
    de H̃ sobre X cuyo mapa de momento es el rango de X
    """
    source: LeftSelfSimilarAction
    Htilde: FiniteGroupoid
    pairs: Tuple[Pair, ...]
    index: Mapping[Pair, int]
    action: LeftSelfSimilarAction


def matched_pair_lift(a: LeftSelfSimilarAction) -> MatchedPairLift:
    H, X = a.H, a.X
    act, rho0 = a.act, a.rho0
    objects = [(h, u) for u in X.units for h in H.by_source.get(rho0[u], ())]
    objects.sort()
    Htilde, index = groupoid_from_objects(
        f"{H.name}~", objects,
        src_of=lambda p: (H.src[p[0]], p[1]),
        rng_of=lambda p: (H.rng[p[0]], act[p]),
        inv_of=lambda p: (H.inv[p[0]], act[p]),
        compose=lambda p, q: (_compose(H, p[0], q[0], a.name), q[1]) if p[1] == act[q] else None,
        label_of=lambda p: f"({H.label(p[0])},{X.label(p[1])})")
    lifted_rho0 = {u: index[(rho0[u], u)] for u in X.units}
    lifted = LeftSelfSimilarAction.from_functions(
        f"{Htilde.name}|{X.name}", Htilde, X, lifted_rho0,
        act=lambda ht, x: act[(objects[ht][0], x)],
        restr=lambda ht, x: index[(a.restr[(objects[ht][0], x)], X.src[x])])
    return MatchedPairLift(a, Htilde, tuple(objects), index, lifted)


def validate_matched_pair(lift: MatchedPairLift) -> ValidationReport:
    """
    (X, H̃) es un par emparejado: mismo espacio de unidades vía ρ⁰ y
    momento igual al rango
    """
    action = lift.action
    report = check_left_axioms(action)
    Ht = action.H
    rho0 = action.rho0
    hits = Counter(rho0.values())
    report.add(run_check("rho0-bijective", list(Ht.units), lambda w: hits[w] == 1))
    report.add(run_check("momentum-is-range", list(action.X.units),
                         lambda u: lift.pairs[rho0[u]][1] == u))
    return report


def matched_lift_iso(a: LeftSelfSimilarAction, lift: Optional[MatchedPairLift] = None) -> GroupoidMorphism:
    """
    Isomorfismo verificado X⋈H̃ → X⋈H, (x, (h, u)) ↦ (x, h)
    """
    lift = lift or matched_pair_lift(a)
    lifted_product = zs_product_left(lift.action)
    product = zs_product_left(a)
    table = tuple(product.index[(x, lift.pairs[ht][0])] for x, ht in lifted_product.pairs)
    morphism = GroupoidMorphism(lifted_product.base, product.base, table)
    report = morphism.validate(isomorphism=True)
    if not report.ok:
        failure = report.failures[0]
        raise ConsistencyError(f"X⋈H̃ → X⋈H no es un isomorfismo ({failure.check})", failure.witness)
    return morphism


def skew_ss_action(g: FiniteGroupoid, h: FiniteGroupoid, c: GroupoidMorphism) -> LeftSelfSimilarAction:
    """
    Acción de H sobre G(c): h⥅(a, k) = (a, k h⁻¹), h⥆(a, k) = c(a)⁻¹ h c(a)
    """
    X = skew_product_groupoid(g, h, c)
    n = h.size
    hm, hinv = h.mul, h.inv
    e = h.identity
    return LeftSelfSimilarAction.from_functions(
        f"{h.name}|{X.name}", h, X, {u: e for u in X.units},
        act=lambda k, x: (x // n) * n + hm[(x % n, hinv[k])],
        restr=lambda k, x: hm[(hm[(hinv[c(x // n)], k)], c(x // n))])
