"""
Registro de ejemplos incorporados y la descomposición de Zappa–Szép de un
grupo finito K = G⋈H a partir de dos subgrupos.
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .construct import skew_ss_action
from .deaconu import StarCommutingSystem
from .dsl import Document, emit_document
from .errors import StructureError
from .fell import FellBundle, FellLeftAction, FellRightAction, crossed_product_bundle, line_bundle
from .fell_construct import FellSystem, certify_fell_system, one_sided_fell_system
from .groupoid import (FiniteGroupoid, GroupoidMorphism, cyclic_group, pair_groupoid, permutation_of,
                       restrict_group, symmetric_group, transformation_groupoid)
from .selfsimilar import (LeftSelfSimilarAction, RightSelfSimilarAction, automorphic_left_action,
                          automorphic_right_action, certify_para_equivalence)

logger = logging.getLogger(__name__)

Pair = Tuple[int, int]

# Generadores en notación de una línea: a = (123), r = (1234), f = (13)
S4_GENERATORS = {"a": "2314", "r": "2341", "f": "3214"}
# En S3: c = (123), s = (12)
S3_GENERATORS = {"c": "231", "s": "213"}


@dataclass(frozen=True, eq=False)
class ZsDecomposition:
    """
    K = G⋈H con ht = (h·t)(h|_t). dot y restr usan ids locales de H y G;
    G_ids y H_ids son las inclusiones en K.
    """
    K: FiniteGroupoid
    G: FiniteGroupoid
    H: FiniteGroupoid
    G_ids: List[int]
    H_ids: List[int]
    dot: Mapping[Pair, int]
    restr: Mapping[Pair, int]

    def dot_label(self, h: str, t: str) -> str:
        return self.G.label(self.dot[(self.H.index(h), self.G.index(t))])

    def restr_label(self, h: str, t: str) -> str:
        return self.H.label(self.restr[(self.H.index(h), self.G.index(t))])


def _subgroup(K: FiniteGroupoid, subset: Sequence[int], name: str,
              labels: Optional[Mapping[int, str]] = None) -> Tuple[FiniteGroupoid, List[int]]:
    old = sorted(set(subset))
    return restrict_group(K, old, name, labels=[labels[x] for x in old] if labels else None)


def elaborate_zs_decomposition(K: FiniteGroupoid, G_sub: Sequence[int], H_sub: Sequence[int],
                               G_labels: Optional[Mapping[int, str]] = None,
                               H_labels: Optional[Mapping[int, str]] = None,
                               names: Tuple[str, str] = ("G", "H")) -> ZsDecomposition:
    """
    Tablas h·t y h|_t por fuerza bruta: cada ht ∈ K se factoriza de forma
    única como t'h' con t' ∈ G y h' ∈ H
    """
    if not K.is_group:
        raise StructureError(f"{K.name} debe ser un grupo")
    G, G_ids = _subgroup(K, G_sub, names[0], G_labels)
    H, H_ids = _subgroup(K, H_sub, names[1], H_labels)
    if set(G_ids) & set(H_ids) != {K.identity}:
        raise StructureError("G ∩ H debe ser trivial")
    factor: Dict[int, Pair] = {}
    for i, t in enumerate(G_ids):
        for j, h in enumerate(H_ids):
            factor[K.mul[(t, h)]] = (i, j)
    if len(factor) != K.size:
        raise StructureError(f"G·H tiene {len(factor)} elementos, {K.name} tiene {K.size}")
    dot: Dict[Pair, int] = {}
    restr: Dict[Pair, int] = {}
    for j, h in enumerate(H_ids):
        for i, t in enumerate(G_ids):
            dot[(j, i)], restr[(j, i)] = factor[K.mul[(h, t)]]
    logger.info(f"🧮 {K.name} = {G.size}·{H.size}: tablas de acción y restricción listas")
    return ZsDecomposition(K, G, H, G_ids, H_ids, dot, restr)


def zs_transformation_action(dec: ZsDecomposition, name: str) -> LeftSelfSimilarAction:
    """
    H sobre X = G⋉K (traslación izquierda): h⥅(t,x) = (h·t, h|_t x) y
    h⥆(t,x) = h|_t
    """
    K, G, H = dec.K, dec.G, dec.H
    n = K.size
    X = transformation_groupoid(G, list(K.labels), lambda t, x: K.mul[(dec.G_ids[t], x)],
                                name=f"{G.name}x{K.name}")

    def act(h: int, x: int) -> int:
        t, y = divmod(x, n)
        return dec.dot[(h, t)] * n + K.mul[(dec.H_ids[dec.restr[(h, t)]], y)]

    return LeftSelfSimilarAction.from_functions(name, H, X, {u: H.identity for u in X.units},
                                                act=act, restr=lambda h, x: dec.restr[(h, x // n)])


def _words(K: FiniteGroupoid, words: Mapping[str, Sequence[str]], gens: Mapping[str, int]) -> Dict[int, str]:
    out = {}
    for label, word in words.items():
        x = K.identity
        for letter in word:
            x = K.mul[(x, gens[letter])]
        out[x] = label
    return out


def s4_decomposition() -> ZsDecomposition:
    """S4 = C3⋈D4 con G = ⟨(123)⟩ y H = ⟨(1234), (13)⟩"""
    K = symmetric_group(4)
    gens = {k: K.index(v) for k, v in S4_GENERATORS.items()}
    G_labels = _words(K, {"e": "", "a": "a", "a2": "aa"}, gens)
    H_labels = _words(K, {"e": "", "r": "r", "r2": "rr", "r3": "rrr", "f": "f", "rf": "rf",
                          "r2f": "rrf", "r3f": "rrrf"}, gens)
    return elaborate_zs_decomposition(K, list(G_labels), list(H_labels), G_labels, H_labels, ("C3", "D4"))


def s4_action() -> LeftSelfSimilarAction:
    return zs_transformation_action(s4_decomposition(), "s4")


def s4_line_action(action: Optional[LeftSelfSimilarAction] = None) -> FellLeftAction:
    """Fibrado trivial de rectas sobre C3⋉S4 con la acción de D4 que conserva coordenadas"""
    action = action or s4_action()
    return FellLeftAction.coordinatewise("s4B", action, line_bundle(action.X, "CS4"))


def s4_fell_system() -> FellSystem:
    return one_sided_fell_system(s4_line_action())


# Producto cruzado sobre C3⋉S3

def s3_decomposition() -> ZsDecomposition:
    K = symmetric_group(3)
    gens = {k: K.index(v) for k, v in S3_GENERATORS.items()}
    G_labels = _words(K, {"e": "", "c": "c", "c2": "cc"}, gens)
    H_labels = _words(K, {"e": "", "s": "s"}, gens)
    return elaborate_zs_decomposition(K, list(G_labels), list(H_labels), G_labels, H_labels, ("C3", "C2"))


def standard_representation(K: FiniteGroupoid) -> List[np.ndarray]:
    """Representación estándar de S3 sobre {v ∈ ℂ³ : Σvᵢ = 0}, en base ortonormal"""
    Q = np.array([[1, 1], [-1, 1], [0, -2]], dtype=np.complex128) / np.array([np.sqrt(2), np.sqrt(6)])
    out = []
    for x in K.elements:
        p = permutation_of(K, x)
        P = np.zeros((3, 3), dtype=np.complex128)
        for i, j in enumerate(p):
            P[j, i] = 1.0
        out.append(Q.conj().T @ P @ Q)
    return out


@dataclass(frozen=True, eq=False)
class CrossedProductFixture:
    """B(M2, C3⋉S3, Ad ρ) con la acción de C2 y los unitarios de X⋈H"""
    decomposition: ZsDecomposition
    action: LeftSelfSimilarAction
    bundle: FellBundle
    fell_action: FellLeftAction
    rho: List[np.ndarray]

    def product_unitary(self, x: int, h: int) -> np.ndarray:
        """U_{(x,h)} = ρ(t)ρ(h) para x = (t, y)"""
        dec = self.decomposition
        t = x // dec.K.size
        return self.rho[dec.G_ids[t]] @ self.rho[dec.H_ids[h]]


def crossed_product_fixture() -> CrossedProductFixture:
    dec = s3_decomposition()
    action = zs_transformation_action(dec, "cp")
    rho = standard_representation(dec.K)
    n = dec.K.size
    unitaries = [rho[dec.G_ids[x // n]] for x in action.X.elements]
    bundle = crossed_product_bundle("CPS3", action.X, unitaries)

    def fn(h: int, x: int, m: np.ndarray) -> np.ndarray:
        k = rho[dec.H_ids[h]]
        back = rho[dec.H_ids[action.restr[(h, x)]]]
        return k @ m @ back.conj().T

    fa = FellLeftAction.from_function("cpB", action, bundle, fn)
    return CrossedProductFixture(dec, action, bundle, fa, rho)


# Semidirecto bilateral sobre el grupoide de pares de Z/6

def semidirect_pair() -> Tuple[LeftSelfSimilarAction, RightSelfSimilarAction]:
    """Z/2 por +3 a la izquierda y Z/3 por +2 a la derecha sobre Pair(Z/6)"""
    X = pair_groupoid(6, "P6")
    H = cyclic_group(2, "Z2")
    G = cyclic_group(3, "Z3")

    def shift(x: int, k: int) -> int:
        i, j = divmod(x, 6)
        return ((i + k) % 6) * 6 + (j + k) % 6

    left = automorphic_left_action("shift3", H, X, lambda h, x: shift(x, 3 * h))
    right = automorphic_right_action("shift2", G, X, lambda x, t: shift(x, 2 * t))
    return left, right


def semidirect_fell_actions() -> Tuple[FellLeftAction, FellRightAction]:
    left, right = semidirect_pair()
    bundle = line_bundle(left.X, "CP6")
    return (FellLeftAction.coordinatewise("shift3B", left, bundle),
            FellRightAction.coordinatewise("shift2B", right, bundle))


def semidirect_fell_system() -> FellSystem:
    fl, fr = semidirect_fell_actions()
    return certify_fell_system(certify_para_equivalence(fl.action, fr.action), fl, fr)


# Producto torcido

def skew_action() -> LeftSelfSimilarAction:
    """c: Z/4 → Z/2 reducción módulo 2"""
    g = cyclic_group(4, "Z4")
    h = cyclic_group(2, "Z2")
    c = GroupoidMorphism(g, h, tuple(k % 2 for k in g.elements))
    return skew_ss_action(g, h, c)


def z6_system() -> StarCommutingSystem:
    return StarCommutingSystem("z6", tuple((x + 2) % 6 for x in range(6)), tuple((x + 3) % 6 for x in range(6)))


# Registro

@dataclass(frozen=True)
class Example:
    name: str
    description: str
    build: Callable[[], Dict[str, Any]]
    windows: Mapping[str, int] = field(default_factory=dict)


def _s4_objects() -> Dict[str, Any]:
    a = s4_action()
    return {"D4": a.H, "C3xS4": a.X, "s4": a}


def _skew_objects() -> Dict[str, Any]:
    a = skew_action()
    return {"Z2": a.H, "Z4c": a.X, "skew": a}


def _semidirect_objects() -> Dict[str, Any]:
    fl, fr = semidirect_fell_actions()
    return {"Z2": fl.action.H, "Z3": fr.action.G, "P6": fl.action.X, "shift3": fl.action, "shift2": fr.action,
            "CP6": fl.bundle, "shift3B": fl, "shift2B": fr}


def _cp_objects() -> Dict[str, Any]:
    f = crossed_product_fixture()
    return {"C2": f.action.H, "C3xS3": f.action.X, "cp": f.action, "CPS3": f.bundle, "cpB": f.fell_action}


EXAMPLES: Dict[str, Example] = {
    "s4": Example("s4", "D4 sobre C3⋉S4 a partir de S4 = C3⋈D4", _s4_objects),
    "skew": Example("skew", "Z/2 sobre el producto torcido Z/4(c)", _skew_objects),
    "semidirect": Example("semidirect", "Z/2 y Z/3 por traslación sobre Pair(Z/6), con fibrado de rectas",
                          _semidirect_objects),
    "cp": Example("cp", "producto cruzado B(M2, C3⋉S3, Ad ρ) con la acción de C2", _cp_objects),
    "z6": Example("z6", "sistema *-conmutativo S = +2, T = +3 sobre Z/6", lambda: {"z6": z6_system()},
                  windows={"z6": 2}),
}


def example_document(name: str) -> Document:
    try:
        example = EXAMPLES[name]
    except KeyError:
        raise KeyError(f"ejemplo desconocido {name!r}; disponibles: {', '.join(EXAMPLES)}")
    return emit_document(example.build(), example.windows)
