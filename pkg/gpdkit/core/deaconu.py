"""
Grupoides de Deaconu–Renault sobre conjuntos finitos: sistemas *-conmutativos
(S, T), el grupoide con ventana de grados, la acción autosimilar de
Y⋊_T ℕ sobre Y⋊_S ℕ y su criterio de libertad.

En un conjunto finito S y T son biyecciones, así que (x, k, y) está en el
grupoide sii y = S^k x; el grado vive en ℤ y se trunca a |k| ≤ ventana.
"""
import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Tuple

from ..models import FreenessResult, ValidationReport
from .checks import run_check
from .errors import StructureError
from .groupoid import FiniteGroupoid, groupoid_from_objects
from .selfsimilar import LeftSelfSimilarAction

logger = logging.getLogger(__name__)

Pair = Tuple[int, int]
Perm = Tuple[int, ...]


def _power(p: Perm, inverse: Perm, k: int, x: int) -> int:
    step = p if k >= 0 else inverse
    for _ in range(abs(k)):
        x = step[x]
    return x


def _inverse(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v] = i
    return tuple(out)


def _cycle_lengths(p: Perm) -> List[int]:
    seen, lengths = set(), []
    for start in range(len(p)):
        if start in seen:
            continue
        n, x = 0, start
        while x not in seen:
            seen.add(x)
            x = p[x]
            n += 1
        lengths.append(n)
    return lengths


@dataclass(frozen=True)
class StarCommutingSystem:
    """
    Par de autoaplicaciones suryectivas de Y = {0..n-1}; θ_{p,m}(x) = TᵖSᵐx.
    fill es una tabla declarada opcional (x, y) ↦ z con Tz = x, Sz = y.
    """
    name: str
    S: Perm
    T: Perm
    fill: Optional[Mapping[Pair, int]] = None
    S_inv: Perm = field(init=False, repr=False)
    T_inv: Perm = field(init=False, repr=False)

    def __post_init__(self):
        n = len(self.S)
        for label, p in (("S", self.S), ("T", self.T)):
            if len(p) != n or sorted(p) != list(range(n)):
                raise StructureError(f"{self.name}: {label} debe ser suryectiva sobre {{0..{n - 1}}}")
        object.__setattr__(self, "S_inv", _inverse(self.S))
        object.__setattr__(self, "T_inv", _inverse(self.T))

    @property
    def size(self) -> int:
        return len(self.S)

    def s_power(self, k: int, x: int) -> int:
        return _power(self.S, self.S_inv, k, x)

    def t_power(self, k: int, x: int) -> int:
        return _power(self.T, self.T_inv, k, x)

    def theta(self, p: int, m: int, x: int) -> int:
        return self.t_power(p, self.s_power(m, x))

    def fill_ins(self, x: int, y: int) -> List[int]:
        return [z for z in range(self.size) if self.T[z] == x and self.S[z] == y]

    @property
    def t_order(self) -> int:
        return math.lcm(*_cycle_lengths(self.T)) if self.size else 1


def check_star_commuting(sys: StarCommutingSystem) -> ValidationReport:
    """
    ST = TS y, si Sx = Ty, existe un único z con Tz = x y Sz = y. La tabla
    declarada, si existe, debe coincidir con el relleno calculado.
    """
    report = ValidationReport(subject=sys.name)
    ys = list(range(sys.size))
    report.add(run_check("commute", ys, lambda x: sys.S[sys.T[x]] == sys.T[sys.S[x]]))
    pairs = [(x, y) for x, y in itertools.product(ys, ys) if sys.S[x] == sys.T[y]]
    report.add(run_check("fill-in-unique", pairs, lambda p: len(sys.fill_ins(*p)) == 1))
    if sys.fill is not None:
        declared = sorted(set(sys.fill) | set(pairs))
        report.add(run_check("fill-table", declared,
                             lambda p: sys.fill.get(p) is not None and [sys.fill[p]] == sys.fill_ins(*p)))
    return report


@dataclass(frozen=True, eq=False)
class WindowedGroupoid:
    """
    Grupoide de Deaconu–Renault truncado a |grado| ≤ window. excluded lista
    los pares componibles cuyo producto sale de la ventana; closed indica
    que no hay ninguno y que el objeto es un grupoide genuino.
    """
    groupoid: FiniteGroupoid
    maps: str
    window: int
    index: Mapping[Tuple, int]
    excluded: Tuple[Pair, ...]

    @property
    def closed(self) -> bool:
        return not self.excluded


def _degrees(maps: str, window: int) -> List[Tuple[int, ...]]:
    span = range(-window, window + 1)
    if maps == "ST":
        return list(itertools.product(span, span))
    return [(k,) for k in span]


def dr_groupoid(sys: StarCommutingSystem, k_bound: int, maps: str = "ST") -> WindowedGroupoid:
    """
    Elementos (x, k, y) con y = θ_k(x); para maps="ST" el grado es (p, m) ∈ ℤ²
    con θ_{p,m} = TᵖSᵐ, para "S" o "T" es un entero
    """
    if maps not in ("S", "T", "ST"):
        raise StructureError(f"{sys.name}: maps debe ser S, T o ST, no {maps!r}")
    if k_bound < 0:
        raise StructureError(f"{sys.name}: la ventana debe ser no negativa")

    def image(k: Tuple[int, ...], x: int) -> int:
        if maps == "ST":
            return sys.theta(k[0], k[1], x)
        return sys.s_power(k[0], x) if maps == "S" else sys.t_power(k[0], x)

    zero = (0,) * (2 if maps == "ST" else 1)
    objects = [(x, k, image(k, x)) for x in range(sys.size) for k in _degrees(maps, k_bound)]
    excluded: List[Tuple] = []

    def compose(a: Tuple, b: Tuple) -> Optional[Tuple]:
        k = tuple(i + j for i, j in zip(a[1], b[1]))
        if max(abs(i) for i in k) > k_bound:
            excluded.append((a, b))
            return None
        return (a[0], k, b[2])

    def label(o: Tuple) -> str:
        return f"{o[0]},{':'.join(str(i) for i in o[1])},{o[2]}"

    g, index = groupoid_from_objects(
        f"{sys.name}⋊{maps}[{k_bound}]", objects,
        src_of=lambda o: (o[2], zero, o[2]),
        rng_of=lambda o: (o[0], zero, o[0]),
        inv_of=lambda o: (o[2], tuple(-i for i in o[1]), o[0]),
        compose=compose, label_of=label)
    dropped = tuple(sorted((index[a], index[b]) for a, b in excluded))
    logger.debug(f"🪟 {g.name}: {g.size} elementos, {len(dropped)} composiciones excluidas")
    return WindowedGroupoid(g, maps, k_bound, index, dropped)


@dataclass(frozen=True, eq=False)
class DeaconuAction:
    """La acción junto con sus dos grupoides con ventana (H = Y⋊_T ℕ, X = Y⋊_S ℕ)"""
    action: LeftSelfSimilarAction
    H: WindowedGroupoid
    X: WindowedGroupoid


def dr_ss_action(sys: StarCommutingSystem, k_bound: int) -> DeaconuAction:
    """
    (x,p−q,y)⥅(y,m−n,z) = (x,m−n,w) y (x,p−q,y)⥆(y,m−n,z) = (w,p−q,z), con w
    el único punto tal que Sⁿw = Sᵐx y Tᵖw = T^q z
    """
    H = dr_groupoid(sys, k_bound, "T")
    X = dr_groupoid(sys, k_bound, "S")
    x_objects = {i: o for o, i in X.index.items()}
    rho0 = {u: H.index[x_objects[u]] for u in X.groupoid.units}
    act: Dict[Pair, int] = {}
    restr: Dict[Pair, int] = {}
    for (x, (k,), y), h in H.index.items():
        for l in range(-k_bound, k_bound + 1):
            z = sys.s_power(l, y)
            w = sys.s_power(l, x)
            if sys.t_power(k, w) != z:
                raise StructureError(f"{sys.name}: no hay relleno para ({x},{k},{y}) y ({y},{l},{z})")
            g = X.index[(y, (l,), z)]
            act[(h, g)] = X.index[(x, (l,), w)]
            restr[(h, g)] = H.index[(w, (k,), z)]
    action = LeftSelfSimilarAction.build(f"{H.groupoid.name}↷{X.groupoid.name}", H.groupoid, X.groupoid,
                                         rho0, act, restr)
    logger.info(f"🔁 Acción de Deaconu–Renault sobre {sys.name}: {len(act)} pares")
    return DeaconuAction(action, H, X)


def dr_freeness(sys: StarCommutingSystem, k_bound: int) -> FreenessResult:
    """
    En un conjunto finito T siempre es periódica: con k = orden de T, el
    elemento (x,k,x) no es unidad y fija (x,0,x). Se construye y valida ese
    testigo ampliando la ventana hasta k si hace falta.
    """
    k = sys.t_order
    window = max(k_bound, k)
    dr = dr_ss_action(sys, window)
    a = dr.action
    x = 0
    h = dr.H.index[(x, (k,), x)]
    unit = dr.X.index[(x, (0,), x)]
    valid = not a.H.is_unit(h) and a.act.get((h, unit)) == unit and a.X.is_unit(unit)
    if not valid:
        raise StructureError(f"{sys.name}: el testigo de periodicidad ({x},{k},{x}) no fija ({x},0,{x})")
    logger.info(f"📌 {sys.name}: T tiene período {k}; la acción no es libre")
    return FreenessResult(free=False, witness=[h, unit], unit_space_free=False, agrees=True,
                          counts=len(a.domain), period=k,
                          detail=f"({x},{k},{x})⥅({x},0,{x}) = ({x},0,{x})")
