"""
Equivalencia de fibrados de Fell entre (B/G)⋈H y G⋈(H\\B) implementada por B:
acciones sobre B, productos internos y verificación de FE1–FE3.

Todos los mapas se guardan como tensores de coordenadas. Los productos
internos son sesquilineales: ⟨a,b⟩_A = Σ aᵢ b̄ⱼ P[i,j,:] y
⟨a,b⟩_C = Σ āᵢ bⱼ Q[i,j,:].
"""
import logging
from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, List, Mapping, Tuple

import numpy as np

from ..models import CheckResult, ValidationReport
from .checks import run_check, run_numeric_check
from .equivalence import EquivalenceWitness, build_equivalence
from .errors import ConsistencyError
from .fell import (ASSOCIATIVITY_SAMPLE, FellBundle, FellLeftAction, FellRightAction, check_fell_left_action,
                   check_fell_right_action, max_abs)
from .fell_construct import (FellSystem, product_bundle_left, product_bundle_right, quotient_fell_actions,
                             transport_left, transport_right)

logger = logging.getLogger(__name__)

Pair = Tuple[int, int]
Inner = Tuple[int, np.ndarray]

_INF = (float("inf"), 1.0, None)


@dataclass(frozen=True, eq=False)
class BimoduleWitness:
    """
    left_tensors[(α,y)]: (k_α, k_y, k_{α·y}); right_tensors[(y,γ)]: (k_y, k_γ, k_{y·γ});
    lip[(x,y)] = (α, P) y rip[(x,y)] = (γ, Q)
    """
    system: FellSystem
    equivalence: EquivalenceWitness
    A_action: FellLeftAction
    C_action: FellRightAction
    A_bundle: FellBundle
    C_bundle: FellBundle
    left_tensors: Mapping[Pair, np.ndarray]
    right_tensors: Mapping[Pair, np.ndarray]
    lip: Mapping[Pair, Inner]
    rip: Mapping[Pair, Inner]

    @property
    def bundle(self) -> FellBundle:
        return self.system.bundle


def _unique(name: str, candidates: List[int], witness: List[int]) -> int:
    if len(candidates) != 1:
        raise ConsistencyError(f"{name}: se esperaba un único elemento, hay {len(candidates)}", witness)
    return candidates[0]


def build_bimodule(system: FellSystem) -> BimoduleWitness:
    """
    (ξ,h)·b = a[h⥅_B b]; b·(t,η) = [b⋊_B t]c;
    ⟨a,b⟩_A = ([a(h⥅_B b*)]⋊G, h⥆_B b*) con h único tal que s(a) = h⥅s(b);
    ⟨a,b⟩_C = (a*⋉t, H⥅_B[(a*⋊_B t)b]) con t único tal que r(a)⋊t = r(b)
    """
    para, B = system.para, system.bundle
    la, ra = para.left, para.right
    TL, TR = system.left.maps, system.right.maps
    X, H, G = para.X, para.H, para.G
    w = build_equivalence(para)
    QG, QH, A, C = w.X_mod_G, w.H_mod_X, w.A, w.C

    C_action, A_action = quotient_fell_actions(system, QH, QG)
    A_bundle = product_bundle_left(A_action, A)
    C_bundle = product_bundle_right(C_action, C)
    tr_right = transport_right(system.right, QG)
    tr_left = transport_left(system.left, QH)

    by_right_class = {(QG.of(x), X.src[x]): x for x in X.elements}
    by_left_class = {(QH.of(z), X.rng[z]): z for z in X.elements}

    left_tensors: Dict[Pair, np.ndarray] = {}
    for alpha, y in w.left_act:
        xi, h = A.pairs[alpha]
        hy = la.act[(h, y)]
        x = by_right_class[(xi, X.rng[hy])]
        left_tensors[(alpha, y)] = np.einsum("ai,bj,abn->ijn", tr_right.from_rep[x], TL[(h, y)],
                                             B.mult_tensor(x, hy))

    right_tensors: Dict[Pair, np.ndarray] = {}
    for y, gamma in w.right_act:
        t, eta = C.pairs[gamma]
        yt = ra.act[(y, t)]
        z = by_left_class[(eta, X.src[yt])]
        right_tensors[(y, gamma)] = np.einsum("ai,bj,abn->ijn", TR[(y, t)], tr_left.from_rep[z],
                                              B.mult_tensor(yt, z))

    by_s: Dict[int, List[int]] = defaultdict(list)
    by_r: Dict[int, List[int]] = defaultdict(list)
    for x in X.elements:
        by_s[w.frak_s[x]].append(x)
        by_r[w.frak_r[x]].append(x)

    lip: Dict[Pair, Inner] = {}
    for members in by_s.values():
        for x in members:
            for y in members:
                sy = X.src[y]
                h = _unique("⟨·,·⟩_A", [k for k in H.by_source.get(la.rho(sy), ())
                                        if la.act[(k, sy)] == X.src[x]], [x, y])
                yi = X.inv[y]
                hyi = la.act[(h, yi)]
                prod = X.mul[(x, hyi)]
                W = TL[(h, yi)] @ B.star_matrix(y)
                P = np.einsum("bj,ibm,nm->ijn", W, B.mult_tensor(x, hyi), tr_right.to_rep[prod])
                key = (QG.of(prod), la.restr[(h, yi)])
                if key not in A.index:
                    raise ConsistencyError(f"⟨·,·⟩_A cae fuera de {A.base.name}", [x, y])
                lip[(x, y)] = (A.index[key], P)

    rip: Dict[Pair, Inner] = {}
    for members in by_r.values():
        for x in members:
            for y in members:
                rx = X.rng[x]
                t = _unique("⟨·,·⟩_C", [s for s in G.by_range.get(ra.sigma(rx), ())
                                        if ra.act[(rx, s)] == X.rng[y]], [x, y])
                xi = X.inv[x]
                xit = ra.act[(xi, t)]
                prod = X.mul[(xit, y)]
                W = TR[(xi, t)] @ B.star_matrix(x)
                Q = np.einsum("ai,ajm,nm->ijn", W, B.mult_tensor(xit, y), tr_left.to_rep[prod])
                key = (ra.restr[(xi, t)], QH.of(prod))
                if key not in C.index:
                    raise ConsistencyError(f"⟨·,·⟩_C cae fuera de {C.base.name}", [x, y])
                rip[(x, y)] = (C.index[key], Q)

    logger.info(f"🧩 Bimódulo sobre {B.name}: {A_bundle.name} ~ {C_bundle.name} "
                f"({len(lip)} + {len(rip)} productos internos)")
    return BimoduleWitness(system, w, A_action, C_action, A_bundle, C_bundle,
                           left_tensors, right_tensors, lip, rip)


def _scale(*arrays: np.ndarray) -> float:
    return max([1.0] + [max_abs(a) for a in arrays])


def _compare(lhs: np.ndarray, rhs: np.ndarray) -> Tuple[float, float, None]:
    if lhs.shape != rhs.shape:
        return _INF
    return max_abs(lhs - rhs), _scale(lhs, rhs), None


def _fiber_actions(w: BimoduleWitness, report: ValidationReport) -> None:
    """FA1–FA3 para la acción izquierda de A y la derecha de C sobre B"""
    B, AB, CB = w.bundle, w.A_bundle, w.C_bundle
    A, C = AB.base, CB.base
    ew = w.equivalence
    L, R = w.left_tensors, w.right_tensors
    la, ra = ew.left_act, ew.right_act

    report.add(run_check("FA1-left-fibers", sorted(L),
                         lambda p: L[p].shape == (AB.rank(p[0]), B.rank(p[1]), B.rank(la[p]))))
    report.add(run_check("FA1-right-fibers", sorted(R),
                         lambda p: R[p].shape == (B.rank(p[0]), CB.rank(p[1]), B.rank(ra[p]))))

    fiber_r: Dict[int, List[int]] = defaultdict(list)
    fiber_s: Dict[int, List[int]] = defaultdict(list)
    for y in ew.X.elements:
        fiber_r[ew.frak_r[y]].append(y)
        fiber_s[ew.frak_s[y]].append(y)

    left_triples = [(a, b, y) for (a, b) in A.composable_pairs for y in fiber_r.get(A.src[b], ())]
    stride = max(1, len(left_triples) // ASSOCIATIVITY_SAMPLE)

    def left_assoc(t: Tuple[int, int, int]) -> Tuple[float, float, None]:
        a, b, y = t
        lhs = np.einsum("ijk,kln->ijln", AB.mult_tensor(a, b), L[(A.mul[(a, b)], y)])
        rhs = np.einsum("jlm,imn->ijln", L[(b, y)], L[(a, la[(b, y)])])
        return _compare(lhs, rhs)

    report.add(run_numeric_check("FA2-left-associativity", left_triples[::stride], left_assoc,
                                 detail=None if stride == 1 else f"muestra 1/{stride}"))

    right_triples = [(y, c, d) for (c, d) in C.composable_pairs for y in fiber_s.get(C.rng[c], ())]
    stride = max(1, len(right_triples) // ASSOCIATIVITY_SAMPLE)

    def right_assoc(t: Tuple[int, int, int]) -> Tuple[float, float, None]:
        y, c, d = t
        lhs = np.einsum("ijm,mkn->ijkn", R[(y, c)], R[(ra[(y, c)], d)])
        rhs = np.einsum("jkm,imn->ijkn", CB.mult_tensor(c, d), R[(y, C.mul[(c, d)])])
        return _compare(lhs, rhs)

    report.add(run_numeric_check("FA2-right-associativity", right_triples[::stride], right_assoc,
                                 detail=None if stride == 1 else f"muestra 1/{stride}"))

    def norm_bound(target: FellBundle, tensor: np.ndarray, first: Tuple[FellBundle, int],
                   second: Tuple[FellBundle, int], out: int) -> Tuple[float, float, None]:
        worst, scale = 0.0, 1.0
        for i in range(tensor.shape[0]):
            ni = first[0].norm(first[1], np.eye(tensor.shape[0])[i])
            for j in range(tensor.shape[1]):
                bound = ni * second[0].norm(second[1], np.eye(tensor.shape[1])[j])
                worst = max(worst, target.norm(out, tensor[i, j]) - bound)
                scale = max(scale, bound)
        return max(worst, 0.0), scale, None

    report.add(run_numeric_check("FA3-left-norm", sorted(L),
                                 lambda p: norm_bound(B, L[p], (AB, p[0]), (B, p[1]), la[p])))
    report.add(run_numeric_check("FA3-right-norm", sorted(R),
                                 lambda p: norm_bound(B, R[p], (B, p[0]), (CB, p[1]), ra[p])))


def _commutation(w: BimoduleWitness, report: ValidationReport) -> None:
    ew = w.equivalence
    C = w.C_bundle.base
    L, R = w.left_tensors, w.right_tensors
    la, ra = ew.left_act, ew.right_act
    by_range: Dict[int, List[int]] = defaultdict(list)
    for c in C.elements:
        by_range[C.rng[c]].append(c)
    triples = sorted((a, y, c) for (a, y) in L for c in by_range.get(ew.frak_s[y], ()))

    def commutes(t: Tuple[int, int, int]) -> Tuple[float, float, None]:
        a, y, c = t
        if (la[(a, y)], c) not in R or (a, ra[(y, c)]) not in L:
            return _INF
        lhs = np.einsum("ijm,mkn->ijkn", L[(a, y)], R[(la[(a, y)], c)])
        rhs = np.einsum("jkm,imn->ijkn", R[(y, c)], L[(a, ra[(y, c)])])
        return _compare(lhs, rhs)

    report.add(run_numeric_check("FE1-commutation", triples, commutes))


def _inner_products(w: BimoduleWitness, report: ValidationReport) -> None:
    """FE2.a–d"""
    ew = w.equivalence
    AB, CB = w.A_bundle, w.C_bundle
    A, C = AB.base, CB.base
    L, R = w.left_tensors, w.right_tensors
    la, ra = ew.left_act, ew.right_act
    lip, rip = w.lip, w.rip

    report.add(run_check("FE2a-left-inner-fiber", sorted(lip), lambda p: la.get((lip[p][0], p[1])) == p[0]))
    report.add(run_check("FE2a-right-inner-fiber", sorted(rip), lambda p: ra.get((p[0], rip[p][0])) == p[1]))

    def hermitian(table: Mapping[Pair, Inner], bundle: FellBundle):
        def measure(p: Pair) -> Tuple[float, float, None]:
            x, y = p
            fiber, P = table[p]
            other, Pt = table.get((y, x), (None, None))
            if other != bundle.base.inv[fiber]:
                return _INF
            lhs = np.einsum("kn,ijn->ijk", bundle.star_matrix(fiber), np.conj(P))
            return _compare(lhs, Pt.transpose(1, 0, 2))
        return measure

    report.add(run_numeric_check("FE2b-left-inner-adjoint", sorted(lip), hermitian(lip, AB)))
    report.add(run_numeric_check("FE2b-right-inner-adjoint", sorted(rip), hermitian(rip, CB)))

    by_s: Dict[int, List[int]] = defaultdict(list)
    by_r: Dict[int, List[int]] = defaultdict(list)
    for y in ew.X.elements:
        by_s[ew.frak_s[y]].append(y)
        by_r[ew.frak_r[y]].append(y)

    left_items = sorted((a, x, y) for (a, x) in L for y in by_s[ew.frak_s[x]])

    def left_equivariant(t: Tuple[int, int, int]) -> Tuple[float, float, None]:
        a, x, y = t
        beta, P = lip[(x, y)]
        moved, Pm = lip[(la[(a, x)], y)]
        if A.src[a] != A.rng[beta] or A.mul[(a, beta)] != moved:
            return _INF
        lhs = np.einsum("kim,mjn->kijn", L[(a, x)], Pm)
        rhs = np.einsum("ijl,kln->kijn", P, AB.mult_tensor(a, beta))
        return _compare(lhs, rhs)

    report.add(run_numeric_check("FE2c-left-inner-equivariance", left_items, left_equivariant))

    right_items = sorted((x, y, c) for (y, c) in R for x in by_r[ew.frak_r[y]])

    def right_equivariant(t: Tuple[int, int, int]) -> Tuple[float, float, None]:
        x, y, c = t
        delta, Q = rip[(x, y)]
        moved, Qm = rip[(x, ra[(y, c)])]
        if C.src[delta] != C.rng[c] or C.mul[(delta, c)] != moved:
            return _INF
        lhs = np.einsum("jkm,imn->ijkn", R[(y, c)], Qm)
        rhs = np.einsum("ijl,lkn->ijkn", Q, CB.mult_tensor(delta, c))
        return _compare(lhs, rhs)

    report.add(run_numeric_check("FE2c-right-inner-equivariance", right_items, right_equivariant))

    compat_items = sorted((x, y, z) for (x, y) in lip for z in by_r[ew.frak_r[y]])

    def compatible(t: Tuple[int, int, int]) -> Tuple[float, float, None]:
        x, y, z = t
        alpha, P = lip[(x, y)]
        gamma, Q = rip[(y, z)]
        if (alpha, z) not in L or (x, gamma) not in R or la[(alpha, z)] != ra[(x, gamma)]:
            return _INF
        lhs = np.einsum("ijl,lkn->ijkn", P, L[(alpha, z)])
        rhs = np.einsum("jkl,iln->ijkn", Q, R[(x, gamma)])
        return _compare(lhs, rhs)

    report.add(run_numeric_check("FE2d-inner-compatibility", compat_items, compatible))


def _fullness(name: str, table: Mapping[Pair, Inner], bundle: FellBundle) -> CheckResult:
    spans: Dict[int, List[np.ndarray]] = defaultdict(list)
    for fiber, P in table.values():
        spans[fiber].append(P.reshape(-1, bundle.rank(fiber)))

    def full(fiber: int) -> bool:
        k = bundle.rank(fiber)
        if k == 0:
            return True
        stacked = np.vstack(spans[fiber]) if spans.get(fiber) else np.zeros((0, k))
        return stacked.size > 0 and np.linalg.matrix_rank(stacked, tol=1e-8) == k

    return run_check(name, list(bundle.base.elements), full)


def _gram_positive(fiber: int, P: np.ndarray, bundle: FellBundle) -> Tuple[float, float, None]:
    k = P.shape[0]
    blocks = [[bundle.matrix(fiber, P[i, j]) for j in range(k)] for i in range(k)]
    gram = np.block(blocks) if k else np.zeros((0, 0))
    gram = (gram + gram.conj().T) / 2
    if not gram.size:
        return 0.0, 1.0, None
    values = np.linalg.eigvalsh(gram)
    return max(0.0, -float(values.min())), max(1.0, float(np.abs(values).max())), None


def _imprimitivity(w: BimoduleWitness, report: ValidationReport) -> None:
    """FE3: plenitud, positividad y compatibilidad de normas fibra a fibra"""
    B, AB, CB = w.bundle, w.A_bundle, w.C_bundle
    lip, rip = w.lip, w.rip
    xs = list(B.base.elements)

    report.add(_fullness("FE3-left-inner-full", lip, AB))
    report.add(_fullness("FE3-right-inner-full", rip, CB))
    report.add(run_numeric_check("FE3-left-inner-positive", xs, lambda x: _gram_positive(*lip[(x, x)], AB)))
    report.add(run_numeric_check("FE3-right-inner-positive", xs, lambda x: _gram_positive(*rip[(x, x)], CB)))

    def norms(x: int) -> Tuple[float, float, None]:
        k = B.rank(x)
        alpha, P = lip[(x, x)]
        gamma, Q = rip[(x, x)]
        worst, scale = 0.0, 1.0
        for a in list(np.eye(k)) + ([np.ones(k)] if k > 1 else []):
            a = a.astype(np.complex128)
            na = AB.norm(alpha, np.einsum("i,j,ijn->n", a, np.conj(a), P))
            nc = CB.norm(gamma, np.einsum("i,j,ijn->n", np.conj(a), a, Q))
            nb = B.norm(x, a) ** 2
            worst = max(worst, abs(na - nb), abs(nc - nb))
            scale = max(scale, nb)
        return worst, scale, None

    report.add(run_numeric_check("FE3-norm-compatibility", xs, norms))


def verify_bimodule(w: BimoduleWitness) -> ValidationReport:
    """
    Acciones cociente (B1–B5), FA1–FA3 para ambas acciones sobre B y FE1–FE3
    con FE2.a–d, sobre todas las tuplas de la base salvo la asociatividad,
    que se muestrea
    """
    report = ValidationReport(subject=f"{w.A_bundle.name} ~ {w.C_bundle.name}")
    report.extend(check_fell_left_action(w.A_action), "quotient-left.")
    report.extend(check_fell_right_action(w.C_action), "quotient-right.")
    _fiber_actions(w, report)
    _commutation(w, report)
    _inner_products(w, report)
    _imprimitivity(w, report)
    if report.ok:
        logger.info(f"✅ Bimódulo de imprimitividad verificado: {report.subject}")
    else:
        failure = report.failures[0]
        logger.warning(f"❌ Bimódulo rechazado: {failure.check} (testigo {failure.witness})")
    return report
