"""
Núcleo de grupoides finitos: representación por tablas de ids densos,
validación de axiomas, morfismos, búsqueda de isomorfismos y constructores
estándar (grupos, grupoides de pares, de transformación y productos torcidos).
"""
import itertools
import logging
from collections import defaultdict, deque
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Dict, Hashable, List, Mapping, Optional, Sequence, Tuple

from ..models import ValidationReport
from .checks import run_check
from .errors import ConsistencyError, StructureError

logger = logging.getLogger(__name__)

Pair = Tuple[int, int]


@dataclass(frozen=True, eq=False)
class FiniteGroupoid:
    """
    Grupoide finito. Los elementos son 0..n-1; mul es parcial y sólo contiene
    los pares definidos (una búsqueda fallida es "indefinido", nunca un centinela).
    """
    name: str
    src: Tuple[int, ...]
    rng: Tuple[int, ...]
    inv: Tuple[int, ...]
    units: Tuple[int, ...]
    mul: Mapping[Pair, int]
    labels: Tuple[str, ...]

    @classmethod
    def build(
        cls,
        name: str,
        src: Sequence[int],
        rng: Sequence[int],
        inv: Sequence[int],
        mul: Mapping[Pair, int],
        labels: Optional[Sequence[str]] = None,
        units: Optional[Sequence[int]] = None,
    ) -> "FiniteGroupoid":
        """
        Construye el grupoide verificando que las tablas estén bien formadas
        """
        n = len(src)
        if len(rng) != n or len(inv) != n:
            raise StructureError(f"{name}: src, rng e inv deben tener la misma longitud ({n})")

        def in_range(table: Sequence[int], what: str) -> None:
            for i, v in enumerate(table):
                if not isinstance(v, int) or not 0 <= v < n:
                    raise StructureError(f"{name}: {what}[{i}] = {v!r} fuera de rango")

        in_range(src, "src")
        in_range(rng, "rng")
        in_range(inv, "inv")
        for (a, b), c in mul.items():
            if not (0 <= a < n and 0 <= b < n and isinstance(c, int) and 0 <= c < n):
                raise StructureError(f"{name}: mul({a}, {b}) = {c!r} fuera de rango")
        if units is None:
            units = sorted(set(src) | set(rng))
        in_range(units, "units")
        if labels is None:
            labels = [str(i) for i in range(n)]
        if len(labels) != n:
            raise StructureError(f"{name}: se esperaban {n} etiquetas, hay {len(labels)}")
        if len(set(labels)) != n:
            raise StructureError(f"{name}: etiquetas repetidas")
        return cls(name, tuple(src), tuple(rng), tuple(inv), tuple(sorted(set(units))),
                   dict(mul), tuple(labels))

    @property
    def size(self) -> int:
        return len(self.src)

    @property
    def elements(self) -> range:
        return range(len(self.src))

    @cached_property
    def unit_set(self) -> frozenset:
        return frozenset(self.units)

    @cached_property
    def label_index(self) -> Dict[str, int]:
        return {label: i for i, label in enumerate(self.labels)}

    @cached_property
    def by_range(self) -> Dict[int, Tuple[int, ...]]:
        table: Dict[int, List[int]] = defaultdict(list)
        for x in self.elements:
            table[self.rng[x]].append(x)
        return {u: tuple(xs) for u, xs in table.items()}

    @cached_property
    def by_source(self) -> Dict[int, Tuple[int, ...]]:
        table: Dict[int, List[int]] = defaultdict(list)
        for x in self.elements:
            table[self.src[x]].append(x)
        return {u: tuple(xs) for u, xs in table.items()}

    @cached_property
    def composable_pairs(self) -> Tuple[Pair, ...]:
        """Pares con producto definido, en orden lexicográfico"""
        return tuple(sorted(self.mul))

    def compose(self, a: int, b: int) -> Optional[int]:
        return self.mul.get((a, b))

    def composable(self, a: int, b: int) -> bool:
        return self.src[a] == self.rng[b]

    def is_unit(self, x: int) -> bool:
        return x in self.unit_set

    def label(self, x: int) -> str:
        return self.labels[x]

    def index(self, label: str) -> int:
        return self.label_index[label]

    def hom(self, v: int, u: int) -> Tuple[int, ...]:
        """Flechas de v a u (fuente v, rango u)"""
        return tuple(x for x in self.by_source.get(v, ()) if self.rng[x] == u)

    def isotropy(self, u: int) -> Tuple[int, ...]:
        return self.hom(u, u)

    @property
    def is_group(self) -> bool:
        return len(self.units) == 1

    @property
    def identity(self) -> int:
        if not self.is_group:
            raise StructureError(f"{self.name} no es un grupo (tiene {len(self.units)} unidades)")
        return self.units[0]

    def same_tables(self, other: "FiniteGroupoid") -> bool:
        return (self.src == other.src and self.rng == other.rng and self.inv == other.inv
                and self.units == other.units and dict(self.mul) == dict(other.mul))

    def __repr__(self) -> str:
        return f"FiniteGroupoid({self.name!r}, {self.size} elementos, {len(self.units)} unidades)"


def validate_groupoid(g: FiniteGroupoid) -> ValidationReport:
    """
    Verifica todas las leyes de grupoide por enumeración; cada falla lleva
    su testigo lexicográficamente mínimo
    """
    report = ValidationReport(subject=g.name)
    mul = g.mul
    units = g.unit_set
    elements = list(g.elements)

    report.add(run_check(
        "unit-set", elements,
        lambda x: (x in units) == (g.src[x] == x and g.rng[x] == x and mul.get((x, x)) == x)))
    report.add(run_check(
        "src-rng-units", elements, lambda x: g.src[x] in units and g.rng[x] in units))

    expected = {(a, b) for a in elements for b in g.by_range.get(g.src[a], ())}
    report.add(run_check(
        "mul-domain", sorted(expected | set(mul)),
        lambda p: (p in mul) == (g.src[p[0]] == g.rng[p[1]])))
    report.add(run_check(
        "mul-src-rng", list(g.composable_pairs),
        lambda p: g.src[mul[p]] == g.src[p[1]] and g.rng[mul[p]] == g.rng[p[0]]))

    triples = [(a, b, c) for (a, b) in g.composable_pairs
               for c in g.by_range.get(g.src[b], ()) if (b, c) in mul]

    def associative(t: Tuple[int, int, int]) -> bool:
        a, b, c = t
        ab, bc = mul[(a, b)], mul[(b, c)]
        left, right = mul.get((ab, c)), mul.get((a, bc))
        return left is not None and left == right

    report.add(run_check("associativity", triples, associative))
    report.add(run_check(
        "unit-law", elements,
        lambda x: mul.get((g.rng[x], x)) == x and mul.get((x, g.src[x])) == x))
    report.add(run_check(
        "inverse-law", elements,
        lambda x: mul.get((x, g.inv[x])) == g.rng[x] and mul.get((g.inv[x], x)) == g.src[x]))
    report.add(run_check(
        "involution", elements,
        lambda x: g.inv[g.inv[x]] == x and g.src[g.inv[x]] == g.rng[x]))
    report.add(run_check(
        "anti-multiplicative-inverse", list(g.composable_pairs),
        lambda p: mul.get((g.inv[p[1]], g.inv[p[0]])) == g.inv[mul[p]]))
    return report


@dataclass(frozen=True, eq=False)
class GroupoidMorphism:
    """Morfismo de grupoides dado por su tabla sobre los elementos del dominio"""
    dom: FiniteGroupoid
    cod: FiniteGroupoid
    map: Tuple[int, ...]

    def __call__(self, x: int) -> int:
        return self.map[x]

    def validate(self, isomorphism: bool = False) -> ValidationReport:
        report = ValidationReport(subject=f"{self.dom.name} -> {self.cod.name}")
        f = self.map
        dom, cod = self.dom, self.cod
        total = report.add(run_check(
            "total", list(dom.elements),
            lambda x: x < len(f) and isinstance(f[x], int) and 0 <= f[x] < cod.size))
        if not total.passed:
            return report
        report.add(run_check("units", list(dom.units), lambda u: cod.is_unit(f[u])))
        report.add(run_check("src", list(dom.elements), lambda x: f[dom.src[x]] == cod.src[f[x]]))
        report.add(run_check("rng", list(dom.elements), lambda x: f[dom.rng[x]] == cod.rng[f[x]]))
        report.add(run_check("inv", list(dom.elements), lambda x: f[dom.inv[x]] == cod.inv[f[x]]))
        report.add(run_check(
            "mul", list(dom.composable_pairs),
            lambda p: cod.compose(f[p[0]], f[p[1]]) == f[dom.mul[p]]))
        if isomorphism:
            seen: Dict[int, int] = {}

            def injective(x: int) -> bool:
                prev = seen.setdefault(f[x], x)
                return prev == x

            report.add(run_check(
                "bijective", list(dom.elements),
                lambda x: dom.size == cod.size and injective(x)))
        return report


def groupoid_from_objects(
    name: str,
    objects: Sequence[Hashable],
    src_of: Callable[[Hashable], Hashable],
    rng_of: Callable[[Hashable], Hashable],
    inv_of: Callable[[Hashable], Hashable],
    compose: Callable[[Hashable, Hashable], Optional[Hashable]],
    label_of: Optional[Callable[[Hashable], str]] = None,
) -> Tuple[FiniteGroupoid, Dict[Hashable, int]]:
    """
    Reindexa densamente una familia de objetos con sus operaciones.
    Devuelve el grupoide y el índice objeto -> id.
    """
    index = {obj: i for i, obj in enumerate(objects)}
    if len(index) != len(objects):
        raise StructureError(f"{name}: objetos repetidos")

    def lookup(obj: Hashable, what: str, of: Hashable) -> int:
        try:
            return index[obj]
        except KeyError:
            raise ConsistencyError(f"{name}: {what}({of!r}) = {obj!r} no es un elemento", [of])

    src = [lookup(src_of(o), "src", o) for o in objects]
    rng = [lookup(rng_of(o), "rng", o) for o in objects]
    inv = [lookup(inv_of(o), "inv", o) for o in objects]
    units = [i for i in range(len(objects)) if src[i] == i and rng[i] == i]

    by_range: Dict[int, List[int]] = defaultdict(list)
    for i, r in enumerate(rng):
        by_range[r].append(i)
    mul: Dict[Pair, int] = {}
    for a, oa in enumerate(objects):
        for b in by_range.get(src[a], ()):
            c = compose(oa, objects[b])
            if c is not None:
                mul[(a, b)] = lookup(c, "mul", (oa, objects[b]))
    labels = [label_of(o) for o in objects] if label_of else None
    return FiniteGroupoid.build(name, src, rng, inv, mul, labels=labels, units=units), index


# Constructores estándar

def group_groupoid(name: str, table: Sequence[Sequence[int]], labels: Optional[Sequence[str]] = None,
                   identity: int = 0) -> FiniteGroupoid:
    """
    Grupo visto como grupoide de un objeto, a partir de su tabla de Cayley
    """
    n = len(table)
    if any(len(row) != n for row in table):
        raise StructureError(f"{name}: la tabla de Cayley no es cuadrada")
    inv = []
    for a in range(n):
        found = [b for b in range(n) if table[a][b] == identity]
        if len(found) != 1:
            raise StructureError(f"{name}: el elemento {a} no tiene inverso único")
        inv.append(found[0])
    mul = {(a, b): table[a][b] for a in range(n) for b in range(n)}
    return FiniteGroupoid.build(name, [identity] * n, [identity] * n, inv, mul,
                                labels=labels, units=[identity])


def cyclic_group(n: int, name: Optional[str] = None) -> FiniteGroupoid:
    return group_groupoid(name or f"Z{n}", [[(a + b) % n for b in range(n)] for a in range(n)],
                          labels=[str(k) for k in range(n)])


def direct_product_group(g: FiniteGroupoid, h: FiniteGroupoid, name: Optional[str] = None) -> FiniteGroupoid:
    pairs = list(itertools.product(g.elements, h.elements))
    table = [[pairs.index((g.mul[(a, c)], h.mul[(b, d)])) for (c, d) in pairs] for (a, b) in pairs]
    labels = [f"{g.label(a)}.{h.label(b)}" for a, b in pairs]
    return group_groupoid(name or f"{g.name}x{h.name}", table, labels=labels,
                          identity=pairs.index((g.identity, h.identity)))


def compose_perm(p: Sequence[int], q: Sequence[int]) -> Tuple[int, ...]:
    """(p∘q)[i] = p[q[i]]"""
    return tuple(p[i] for i in q)


def one_line(p: Sequence[int]) -> str:
    """Notación de una línea, 1-indexada"""
    return "".join(str(i + 1) for i in p)


def symmetric_group(n: int, name: Optional[str] = None) -> FiniteGroupoid:
    """
    S_n sobre 0..n-1, elementos en orden lexicográfico (la identidad es el id 0)
    """
    perms = list(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    table = [[index[compose_perm(p, q)] for q in perms] for p in perms]
    return group_groupoid(name or f"S{n}", table, labels=[one_line(p) for p in perms])


def permutation_of(g: FiniteGroupoid, x: int) -> Tuple[int, ...]:
    """Recupera la permutación de un elemento de symmetric_group a partir de su etiqueta"""
    return tuple(int(ch) - 1 for ch in g.label(x))


def subgroup_closure(g: FiniteGroupoid, generators: Sequence[int]) -> List[int]:
    """Subgrupo generado, como lista ordenada de ids"""
    e = g.identity
    seen = {e}
    queue = deque([e])
    while queue:
        x = queue.popleft()
        for s in generators:
            y = g.mul[(x, s)]
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return sorted(seen)


def restrict_group(g: FiniteGroupoid, subset: Sequence[int], name: str,
                   labels: Optional[Sequence[str]] = None) -> Tuple[FiniteGroupoid, List[int]]:
    """
    Subgrupo como grupoide propio; devuelve también la inclusión nuevo -> viejo
    """
    old = sorted(subset)
    if g.identity not in old:
        raise StructureError(f"{name}: el subconjunto no contiene la identidad")
    index = {x: i for i, x in enumerate(old)}
    try:
        table = [[index[g.mul[(a, b)]] for b in old] for a in old]
    except KeyError:
        raise StructureError(f"{name}: el subconjunto no es cerrado bajo el producto")
    return group_groupoid(name, table, labels=labels or [g.label(x) for x in old],
                          identity=index[g.identity]), old


def pair_groupoid(n: int, name: Optional[str] = None) -> FiniteGroupoid:
    """Relación total sobre n puntos; (i, j) va de j a i"""
    objects = [(i, j) for i in range(n) for j in range(n)]
    g, _ = groupoid_from_objects(
        name or f"Pair{n}", objects,
        src_of=lambda p: (p[1], p[1]), rng_of=lambda p: (p[0], p[0]),
        inv_of=lambda p: (p[1], p[0]),
        compose=lambda p, q: (p[0], q[1]) if p[1] == q[0] else None,
        label_of=lambda p: f"p{p[0]}_{p[1]}")
    return g


def unit_space_groupoid(x: FiniteGroupoid, name: Optional[str] = None) -> Tuple[FiniteGroupoid, List[int]]:
    """X⁽⁰⁾ como grupoide trivial; devuelve también la inclusión en X"""
    units = list(x.units)
    k = len(units)
    g = FiniteGroupoid.build(name or f"{x.name}0", list(range(k)), list(range(k)), list(range(k)),
                             {(i, i): i for i in range(k)}, labels=[x.label(u) for u in units])
    return g, units


def disjoint_union(g: FiniteGroupoid, h: FiniteGroupoid, name: Optional[str] = None) -> FiniteGroupoid:
    n = g.size
    mul = dict(g.mul)
    mul.update({(a + n, b + n): c + n for (a, b), c in h.mul.items()})
    return FiniteGroupoid.build(
        name or f"{g.name}+{h.name}",
        list(g.src) + [s + n for s in h.src], list(g.rng) + [r + n for r in h.rng],
        list(g.inv) + [i + n for i in h.inv], mul,
        labels=[f"L.{lab}" for lab in g.labels] + [f"R.{lab}" for lab in h.labels],
        units=list(g.units) + [u + n for u in h.units])


def transformation_groupoid(
    grp: FiniteGroupoid,
    space: Sequence[str],
    act: Callable[[int, int], int],
    name: Optional[str] = None,
) -> FiniteGroupoid:
    """
    Grupoide de transformación grp ⋉ space con r(t,x) = t∗x y s(t,x) = x.
    Los elementos son los pares (t, x) en orden lexicográfico.
    """
    e = grp.identity
    points = range(len(space))
    for x in points:
        if act(e, x) != x:
            raise StructureError(f"la identidad no actúa trivialmente sobre {space[x]}")
    for s, t in itertools.product(grp.elements, grp.elements):
        st = grp.mul[(s, t)]
        for x in points:
            if act(st, x) != act(s, act(t, x)):
                raise StructureError(f"act no es una acción: ({grp.label(s)}{grp.label(t)})∗{space[x]}")
    objects = [(t, x) for t in grp.elements for x in points]
    g, _ = groupoid_from_objects(
        name or f"{grp.name}x{len(space)}", objects,
        src_of=lambda p: (e, p[1]),
        rng_of=lambda p: (e, act(p[0], p[1])),
        inv_of=lambda p: (grp.inv[p[0]], act(p[0], p[1])),
        compose=lambda p, q: (grp.mul[(p[0], q[0])], q[1]) if p[1] == act(q[0], q[1]) else None,
        label_of=lambda p: f"{grp.label(p[0])}:{space[p[1]]}")
    return g


def skew_product_groupoid(g: FiniteGroupoid, h: FiniteGroupoid, c: GroupoidMorphism,
                          name: Optional[str] = None) -> FiniteGroupoid:
    """
    Producto torcido G(c): r(a,k) = (r(a), k), s(a,k) = (s(a), k·c(a)),
    (a,k)(b,k·c(a)) = (ab,k), (a,k)⁻¹ = (a⁻¹, k·c(a))
    """
    if not h.is_group:
        raise StructureError(f"{h.name} debe ser un grupo")
    if c.dom is not g or c.cod is not h or not c.validate().ok:
        raise StructureError(f"c no es un homomorfismo {g.name} -> {h.name}")
    hm = h.mul
    objects = [(a, k) for a in g.elements for k in h.elements]
    result, _ = groupoid_from_objects(
        name or f"{g.name}({h.name})", objects,
        src_of=lambda p: (g.src[p[0]], hm[(p[1], c(p[0]))]),
        rng_of=lambda p: (g.rng[p[0]], p[1]),
        inv_of=lambda p: (g.inv[p[0]], hm[(p[1], c(p[0]))]),
        compose=lambda p, q: ((g.mul[(p[0], q[0])], p[1])
                              if g.src[p[0]] == g.rng[q[0]] and q[1] == hm[(p[1], c(p[0]))] else None),
        label_of=lambda p: f"{g.label(p[0])}|{h.label(p[1])}")
    return result


# Componentes, isotropía e isomorfismos

def components(g: FiniteGroupoid) -> List[List[int]]:
    """Órbitas de unidades (u ~ v si hay una flecha de u a v), ordenadas por su unidad mínima"""
    from .orbits import UnionFind

    uf = UnionFind(g.units)
    for x in g.elements:
        uf.union(g.src[x], g.rng[x])
    return uf.classes()


def element_order(g: FiniteGroupoid, x: int) -> int:
    """Orden de x en su grupo de isotropía; 0 si las potencias no vuelven a la unidad"""
    u = g.src[x]
    y = x
    for k in range(1, g.size + 1):
        if y == u:
            return k
        y = g.mul.get((y, x))
        if y is None:
            return 0
    return 0


def _group_generators(g: FiniteGroupoid, elements: Sequence[int], base: int) -> List[int]:
    gens: List[int] = []
    closure = {base}
    for x in elements:
        if x in closure:
            continue
        gens.append(x)
        queue = deque(closure)
        while queue:
            y = queue.popleft()
            for s in gens:
                z = g.mul[(y, s)]
                if z not in closure:
                    closure.add(z)
                    queue.append(z)
    return gens


def _isotropy_iso(a: FiniteGroupoid, ua: int, b: FiniteGroupoid, ub: int) -> Optional[Dict[int, int]]:
    """
    Isomorfismo entre los grupos de isotropía en ua y ub por backtracking sobre
    imágenes de generadores con el mismo orden, cerrando por BFS
    """
    ga, gb = a.isotropy(ua), b.isotropy(ub)
    if len(ga) != len(gb):
        return None
    gens = _group_generators(a, ga, ua)
    order_b: Dict[int, List[int]] = defaultdict(list)
    for y in gb:
        order_b[element_order(b, y)].append(y)
    candidates = [order_b.get(element_order(a, s), []) for s in gens]

    def extend(images: Sequence[int]) -> Optional[Dict[int, int]]:
        psi = {ua: ub}
        queue = deque([ua])
        while queue:
            x = queue.popleft()
            for s, t in zip(gens, images):
                xs, yt = a.mul[(x, s)], b.mul[(psi[x], t)]
                if xs in psi:
                    if psi[xs] != yt:
                        return None
                else:
                    psi[xs] = yt
                    queue.append(xs)
        if len(set(psi.values())) != len(psi) or len(psi) != len(gb):
            return None
        return psi

    for images in itertools.product(*candidates):
        psi = extend(images)
        if psi is not None:
            return psi
    return None


def _transversal(g: FiniteGroupoid, base: int, units: Sequence[int]) -> Dict[int, int]:
    """τ_w: flecha de id mínimo base -> w, con τ_base = base"""
    tau = {base: base}
    for w in units:
        if w != base:
            tau[w] = min(g.hom(base, w))
    return tau


def iso_check(a: FiniteGroupoid, b: FiniteGroupoid) -> Optional[GroupoidMorphism]:
    """
    Busca un isomorfismo a -> b. Devuelve el morfismo verificado o None si no
    existe; una tabla que no cumple las leyes de grupoide nunca es isomorfa.
    """
    if a.size != b.size or len(a.units) != len(b.units):
        return None
    for g in (a, b):
        if not validate_groupoid(g).ok:
            logger.debug(f"⚠️ {g.name} no es un grupoide válido, sin isomorfismo")
            return None
    comps_a, comps_b = components(a), components(b)

    def signature(g: FiniteGroupoid, comp: List[int]) -> Tuple[int, int]:
        return len(comp), len(g.isotropy(comp[0]))

    if sorted(signature(a, c) for c in comps_a) != sorted(signature(b, c) for c in comps_b):
        return None

    phi: Dict[int, int] = {}
    used = [False] * len(comps_b)
    for ca in comps_a:
        match = None
        for j, cb in enumerate(comps_b):
            if used[j] or signature(a, ca) != signature(b, cb):
                continue
            psi = _isotropy_iso(a, ca[0], b, cb[0])
            if psi is not None:
                match = (j, cb, psi)
                break
        if match is None:
            return None
        j, cb, psi = match
        used[j] = True
        beta = dict(zip(ca, cb))
        tau_a = _transversal(a, ca[0], ca)
        tau_b = _transversal(b, cb[0], cb)
        members = [x for u in ca for x in a.by_range.get(u, ())]
        for x in members:
            w, v = a.rng[x], a.src[x]
            core = a.mul[(a.mul[(a.inv[tau_a[w]], x)], tau_a[v])]
            image = b.mul[(b.mul[(tau_b[beta[w]], psi[core])], b.inv[tau_b[beta[v]]])]
            phi[x] = image

    morphism = GroupoidMorphism(a, b, tuple(phi[x] for x in a.elements))
    report = morphism.validate(isomorphism=True)
    if not report.ok:
        raise ConsistencyError(f"iso_check produjo un mapa inválido: {report.failures[0].check}",
                               report.failures[0].witness)
    logger.debug(f"🔗 Isomorfismo encontrado {a.name} ≅ {b.name}")
    return morphism


def identity_morphism(g: FiniteGroupoid) -> GroupoidMorphism:
    return GroupoidMorphism(g, g, tuple(g.elements))
