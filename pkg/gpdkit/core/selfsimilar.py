"""
Acciones autosimilares izquierda y derecha: datos, verificadores de axiomas,
leyes derivadas, libertad, compatibilidad ("in tune") y certificación de
para-equivalencias.
"""
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from ..models import CheckResult, CheckStatus, FreenessResult, ValidationReport
from .checks import auto_pass, run_check, skipped
from .errors import CertificationError, DomainError, StructureError
from .groupoid import FiniteGroupoid, unit_space_groupoid
from .orbits import find_orbits

logger = logging.getLogger(__name__)

Pair = Tuple[int, int]


def _check_tables(name: str, values: Mapping[Pair, int], cod: FiniteGroupoid, what: str) -> None:
    for key, v in values.items():
        if not isinstance(v, int) or not 0 <= v < cod.size:
            raise StructureError(f"{name}: {what}{key} = {v!r} fuera de rango en {cod.name}")


def _domain_mismatch(name: str, domain: Sequence[Pair], act: Mapping[Pair, int],
                     restr: Mapping[Pair, int]) -> Optional[Pair]:
    expected = set(domain)
    bad = (expected ^ set(act)) | (expected ^ set(restr))
    return min(bad) if bad else None


@dataclass(frozen=True, eq=False)
class LeftSelfSimilarAction:
    """
    Acción autosimilar izquierda de H sobre X: h⥅x ∈ X y h⥆x ∈ H, definidas
    exactamente en {(h, x) : s_H(h) = ρ(x)} con ρ = rho0 ∘ r_X
    """
    name: str
    H: FiniteGroupoid
    X: FiniteGroupoid
    rho0: Mapping[int, int]
    act: Mapping[Pair, int]
    restr: Mapping[Pair, int]

    @classmethod
    def build(cls, name: str, H: FiniteGroupoid, X: FiniteGroupoid, rho0: Mapping[int, int],
              act: Mapping[Pair, int], restr: Mapping[Pair, int]) -> "LeftSelfSimilarAction":
        if set(rho0) != set(X.units):
            raise StructureError(f"{name}: rho0 debe estar definido exactamente en las unidades de {X.name}")
        for u, w in rho0.items():
            if w not in H.unit_set:
                raise StructureError(f"{name}: rho0({X.label(u)}) no es una unidad de {H.name}")
        _check_tables(name, act, X, "act")
        _check_tables(name, restr, H, "restr")
        action = cls(name, H, X, dict(rho0), dict(act), dict(restr))
        bad = _domain_mismatch(name, action.domain, act, restr)
        if bad is not None:
            raise DomainError(f"{name}: act/restr no están definidos exactamente en s_H ⨯ρ X "
                              f"(par {bad})", witness=bad)
        return action

    @classmethod
    def from_functions(cls, name: str, H: FiniteGroupoid, X: FiniteGroupoid, rho0: Mapping[int, int],
                       act: Callable[[int, int], int], restr: Callable[[int, int], int]) -> "LeftSelfSimilarAction":
        """Tabula act y restr sobre el dominio exacto"""
        domain = [(h, x) for x in X.elements for h in H.by_source.get(rho0[X.rng[x]], ())]
        return cls.build(name, H, X, rho0, {p: act(*p) for p in domain}, {p: restr(*p) for p in domain})

    def rho(self, x: int) -> int:
        return self.rho0[self.X.rng[x]]

    @cached_property
    def domain(self) -> Tuple[Pair, ...]:
        H, X = self.H, self.X
        return tuple(sorted((h, x) for x in X.elements for h in H.by_source.get(self.rho(x), ())))

    def dot(self, h: int, x: int) -> Optional[int]:
        return self.act.get((h, x))

    def res(self, h: int, x: int) -> Optional[int]:
        return self.restr.get((h, x))


@dataclass(frozen=True, eq=False)
class RightSelfSimilarAction:
    """
    Acción autosimilar derecha de G sobre X: x⋊t ∈ X y x⋉t ∈ G, definidas
    exactamente en {(x, t) : σ(x) = r_G(t)} con σ = sigma0 ∘ s_X
    """
    name: str
    G: FiniteGroupoid
    X: FiniteGroupoid
    sigma0: Mapping[int, int]
    act: Mapping[Pair, int]
    restr: Mapping[Pair, int]

    @classmethod
    def build(cls, name: str, G: FiniteGroupoid, X: FiniteGroupoid, sigma0: Mapping[int, int],
              act: Mapping[Pair, int], restr: Mapping[Pair, int]) -> "RightSelfSimilarAction":
        if set(sigma0) != set(X.units):
            raise StructureError(f"{name}: sigma0 debe estar definido exactamente en las unidades de {X.name}")
        for u, w in sigma0.items():
            if w not in G.unit_set:
                raise StructureError(f"{name}: sigma0({X.label(u)}) no es una unidad de {G.name}")
        _check_tables(name, act, X, "act")
        _check_tables(name, restr, G, "restr")
        action = cls(name, G, X, dict(sigma0), dict(act), dict(restr))
        bad = _domain_mismatch(name, action.domain, act, restr)
        if bad is not None:
            raise DomainError(f"{name}: act/restr no están definidos exactamente en X σ⨯r G "
                              f"(par {bad})", witness=bad)
        return action

    @classmethod
    def from_functions(cls, name: str, G: FiniteGroupoid, X: FiniteGroupoid, sigma0: Mapping[int, int],
                       act: Callable[[int, int], int], restr: Callable[[int, int], int]) -> "RightSelfSimilarAction":
        domain = [(x, t) for x in X.elements for t in G.by_range.get(sigma0[X.src[x]], ())]
        return cls.build(name, G, X, sigma0, {p: act(*p) for p in domain}, {p: restr(*p) for p in domain})

    def sigma(self, x: int) -> int:
        return self.sigma0[self.X.src[x]]

    @cached_property
    def domain(self) -> Tuple[Pair, ...]:
        G, X = self.G, self.X
        return tuple(sorted((x, t) for x in X.elements for t in G.by_range.get(self.sigma(x), ())))

    def dot(self, x: int, t: int) -> Optional[int]:
        return self.act.get((x, t))

    def res(self, x: int, t: int) -> Optional[int]:
        return self.restr.get((x, t))


# Verificadores de axiomas

def _structural_checks(report: ValidationReport, momentum: Mapping[int, int], target: FiniteGroupoid,
                       domain: Sequence[Pair], act: Mapping[Pair, int], restr: Mapping[Pair, int],
                       label: str) -> bool:
    image = set(momentum.values())
    report.add(run_check(f"{label}-surjective", list(target.units), lambda w: w in image))
    expected = set(domain)
    bad = sorted((expected ^ set(act)) | (expected ^ set(restr)))
    if bad:
        report.add(CheckResult(check="domain-exact", status=CheckStatus.FAIL, witness=list(bad[0]),
                               counts=len(expected)))
        return False
    report.add(CheckResult(check="domain-exact", status=CheckStatus.PASS, counts=len(expected)))
    return True


def check_left_axioms(a: LeftSelfSimilarAction) -> ValidationReport:
    """
    Verifica L1–L6 por enumeración, además de la sobreyectividad de rho0 y
    la exactitud del dominio
    """
    report = ValidationReport(subject=a.name)
    H, X = a.H, a.X
    act, restr = a.act, a.restr
    if not _structural_checks(report, a.rho0, H, a.domain, act, restr, "rho0"):
        for law in ("L1", "L2", "L3", "L4", "L5", "L6"):
            report.add(skipped(law, "dominio inexacto"))
        return report
    rho = a.rho
    domain = list(a.domain)

    def l1(p: Pair) -> bool:
        h, x = p
        y, k = act[p], restr[p]
        return H.rng[h] == rho(y) and H.src[k] == rho(X.inv[x]) and H.rng[k] == rho(X.inv[y])

    def l2(p: Pair) -> bool:
        h, x = p
        if X.is_unit(x) and restr[p] != h:
            return False
        return act.get((rho(x), x)) == x

    report.add(run_check("L1", domain, l1))
    report.add(run_check("L2", domain, l2))

    triples_hxy = sorted((h, x, y) for (x, y) in X.composable_pairs for h in H.by_source.get(rho(x), ()))

    def l3(t: Tuple[int, int, int]) -> bool:
        h, x, y = t
        xy = X.mul[(x, y)]
        lhs = restr.get((h, xy))
        rhs = restr.get((restr[(h, x)], y))
        return lhs is not None and lhs == rhs

    def l4(t: Tuple[int, int, int]) -> bool:
        h, x, y = t
        xy = X.mul[(x, y)]
        lhs = act.get((h, xy))
        second = act.get((restr[(h, x)], y))
        rhs = X.compose(act[(h, x)], second) if second is not None else None
        return lhs is not None and lhs == rhs

    report.add(run_check("L3", triples_hxy, l3))
    report.add(run_check("L4", triples_hxy, l4))

    triples_hkx = sorted((h, k, x) for (h, k) in H.composable_pairs for x in X.elements
                         if rho(x) == H.src[k])

    def l5(t: Tuple[int, int, int]) -> bool:
        h, k, x = t
        lhs = act.get((H.mul[(h, k)], x))
        inner = act.get((k, x))
        rhs = act.get((h, inner)) if inner is not None else None
        return lhs is not None and lhs == rhs

    def l6(t: Tuple[int, int, int]) -> bool:
        h, k, x = t
        lhs = restr.get((H.mul[(h, k)], x))
        first = restr.get((h, act[(k, x)]))
        rhs = H.compose(first, restr[(k, x)]) if first is not None else None
        return lhs is not None and lhs == rhs

    report.add(run_check("L5", triples_hkx, l5))
    report.add(run_check("L6", triples_hkx, l6))
    return report


def check_right_axioms(a: RightSelfSimilarAction) -> ValidationReport:
    """
    Verifica R1–R6 por enumeración, además de la sobreyectividad de sigma0 y
    la exactitud del dominio
    """
    report = ValidationReport(subject=a.name)
    G, X = a.G, a.X
    act, restr = a.act, a.restr
    if not _structural_checks(report, a.sigma0, G, a.domain, act, restr, "sigma0"):
        for law in ("R1", "R2", "R3", "R4", "R5", "R6"):
            report.add(skipped(law, "dominio inexacto"))
        return report
    sigma = a.sigma
    domain = list(a.domain)

    def r1(p: Pair) -> bool:
        x, t = p
        y, s = act[p], restr[p]
        return sigma(y) == G.src[t] and sigma(X.inv[x]) == G.rng[s] and sigma(X.inv[y]) == G.src[s]

    def r2(p: Pair) -> bool:
        x, t = p
        if X.is_unit(x) and restr[p] != t:
            return False
        return act.get((x, sigma(x))) == x

    report.add(run_check("R1", domain, r1))
    report.add(run_check("R2", domain, r2))

    triples_xys = sorted((x, y, s) for (x, y) in X.composable_pairs for s in G.by_range.get(sigma(y), ()))

    def r3(t: Tuple[int, int, int]) -> bool:
        x, y, s = t
        lhs = restr.get((X.mul[(x, y)], s))
        rhs = restr.get((x, restr[(y, s)]))
        return lhs is not None and lhs == rhs

    def r4(t: Tuple[int, int, int]) -> bool:
        x, y, s = t
        lhs = act.get((X.mul[(x, y)], s))
        first = act.get((x, restr[(y, s)]))
        rhs = X.compose(first, act[(y, s)]) if first is not None else None
        return lhs is not None and lhs == rhs

    report.add(run_check("R3", triples_xys, r3))
    report.add(run_check("R4", triples_xys, r4))

    triples_xst = sorted((x, s, t) for (s, t) in G.composable_pairs for x in X.elements
                         if sigma(x) == G.rng[s])

    def r5(tr: Tuple[int, int, int]) -> bool:
        x, s, t = tr
        lhs = act.get((x, G.mul[(s, t)]))
        inner = act.get((x, s))
        rhs = act.get((inner, t)) if inner is not None else None
        return lhs is not None and lhs == rhs

    def r6(tr: Tuple[int, int, int]) -> bool:
        x, s, t = tr
        lhs = restr.get((x, G.mul[(s, t)]))
        second = restr.get((act[(x, s)], t))
        rhs = G.compose(restr[(x, s)], second) if second is not None else None
        return lhs is not None and lhs == rhs

    report.add(run_check("R5", triples_xst, r5))
    report.add(run_check("R6", triples_xst, r6))
    return report


def verify_derived_left_laws(a: LeftSelfSimilarAction) -> ValidationReport:
    """
    L7–L10 y la preimagen de unidades. Son teoremas: cualquier falla sobre
    una acción que pasa L1–L6 es un bug.
    """
    report = ValidationReport(subject=a.name)
    H, X = a.H, a.X
    act, restr, rho = a.act, a.restr, a.rho
    domain = list(a.domain)

    report.add(run_check("L7", list(X.elements), lambda x: restr.get((rho(x), x)) == rho(X.inv[x])))
    report.add(run_check(
        "L8", [p for p in domain if X.is_unit(p[1])], lambda p: X.is_unit(act[p])))

    def l9(p: Pair) -> bool:
        h, x = p
        y, k = act[p], restr[p]
        return (act.get((k, X.inv[x])) == X.inv[y]
                and restr.get((H.inv[h], y)) == H.inv[k])

    def l10(p: Pair) -> bool:
        h, x = p
        y, k = act[p], restr[p]
        return X.rng[y] == act.get((h, X.rng[x])) and X.src[y] == act.get((k, X.src[x]))

    report.add(run_check("L9", domain, l9))
    report.add(run_check("L10", domain, l10))
    report.add(check_unit_preimage(a))
    return report


def verify_derived_right_laws(a: RightSelfSimilarAction) -> ValidationReport:
    """R7–R10 y la preimagen de unidades"""
    report = ValidationReport(subject=a.name)
    G, X = a.G, a.X
    act, restr, sigma = a.act, a.restr, a.sigma
    domain = list(a.domain)

    report.add(run_check("R7", list(X.elements), lambda x: restr.get((x, sigma(x))) == sigma(X.inv[x])))
    report.add(run_check(
        "R8", [p for p in domain if X.is_unit(p[0])], lambda p: X.is_unit(act[p])))

    def r9(p: Pair) -> bool:
        x, t = p
        y, s = act[p], restr[p]
        return (act.get((X.inv[x], s)) == X.inv[y]
                and restr.get((y, G.inv[t])) == G.inv[s])

    def r10(p: Pair) -> bool:
        x, t = p
        y, s = act[p], restr[p]
        return X.src[y] == act.get((X.src[x], t)) and X.rng[y] == act.get((X.rng[x], s))

    report.add(run_check("R9", domain, r9))
    report.add(run_check("R10", domain, r10))
    report.add(check_unit_preimage_right(a))
    return report


def check_unit_preimage(a: LeftSelfSimilarAction) -> CheckResult:
    """Si h⥅x es unidad entonces x es unidad"""
    return run_check("unit-preimage", list(a.domain),
                     lambda p: not a.X.is_unit(a.act[p]) or a.X.is_unit(p[1]))


def check_unit_preimage_right(a: RightSelfSimilarAction) -> CheckResult:
    return run_check("unit-preimage", list(a.domain),
                     lambda p: not a.X.is_unit(a.act[p]) or a.X.is_unit(p[0]))


# Libertad, órbitas e invariancia de Haar por conteo

def _freeness(pairs: Sequence[Pair], fixes: Callable[[Pair], bool], is_unit: Callable[[int], bool],
              actor_of: Callable[[Pair], int], point_of: Callable[[Pair], int],
              unit_point: Callable[[int], bool]) -> FreenessResult:
    witness = None
    unit_witness = None
    for p in pairs:
        if not is_unit(actor_of(p)) and fixes(p):
            if witness is None:
                witness = list(p)
            if unit_witness is None and unit_point(point_of(p)):
                unit_witness = list(p)
            if witness is not None and unit_witness is not None:
                break
    free = witness is None
    unit_free = unit_witness is None
    return FreenessResult(free=free, witness=witness, unit_space_free=unit_free,
                          agrees=free == unit_free, counts=len(pairs),
                          detail=None if free else "la acción fija un punto con un elemento no unidad")


def is_free(a: LeftSelfSimilarAction) -> FreenessResult:
    """
    Libre si h⥅x = x implica h unidad. Se verifica también sobre X⁽⁰⁾ y se
    compara ambos veredictos.
    """
    result = _freeness(list(a.domain), lambda p: a.act[p] == p[1], a.H.is_unit,
                       lambda p: p[0], lambda p: p[1], a.X.is_unit)
    logger.debug(f"{'🆓' if result.free else '📌'} {a.name}: libre={result.free} testigo={result.witness}")
    return result


def is_free_right(a: RightSelfSimilarAction) -> FreenessResult:
    return _freeness(list(a.domain), lambda p: a.act[p] == p[0], a.G.is_unit,
                     lambda p: p[1], lambda p: p[0], a.X.is_unit)


def orbits_left(a: LeftSelfSimilarAction) -> Tuple[List[List[int]], List[int]]:
    """Órbitas H⥅x; la clase k tiene representante canónico classes[k][0]"""
    return find_orbits(((x, y) for (_, x), y in a.act.items()), list(a.X.elements))


def orbits_right(a: RightSelfSimilarAction) -> Tuple[List[List[int]], List[int]]:
    return find_orbits(((x, y) for (x, _), y in a.act.items()), list(a.X.elements))


def _unique_rep(subject: str, class_of: Sequence[int], anchor: Sequence[int], n: int) -> ValidationReport:
    first: Dict[Tuple[int, int], int] = {}
    for x in range(n):
        first.setdefault((class_of[x], anchor[x]), x)
    report = ValidationReport(subject=subject)
    report.add(run_check("unique-orbit-representative", list(range(n)),
                         lambda x: first[(class_of[x], anchor[x])] == x,
                         witness=lambda x: [first[(class_of[x], anchor[x])], x]))
    return report


def check_unique_orbit_rep(a: LeftSelfSimilarAction) -> ValidationReport:
    """H⥅x = H⥅x′ y r(x) = r(x′) implican x = x′"""
    _, class_of = orbits_left(a)
    return _unique_rep(a.name, class_of, a.X.rng, a.X.size)


def check_unique_orbit_rep_right(a: RightSelfSimilarAction) -> ValidationReport:
    """x⋊G = x′⋊G y s(x) = s(x′) implican x = x′"""
    _, class_of = orbits_right(a)
    return _unique_rep(a.name, class_of, a.X.src, a.X.size)


def counting_haar_invariance(a: LeftSelfSimilarAction) -> ValidationReport:
    """
    La medida de conteo es ⥅-invariante: para cada (h, u) en el dominio con u
    unidad, x ↦ h⥅x es una biyección X^u → X^{h⥅u}
    """
    X = a.X
    items = [p for p in a.domain if X.is_unit(p[1])]

    def bijective(p: Pair) -> bool:
        h, u = p
        target_unit = a.act[p]
        fiber = X.by_range.get(u, ())
        target = set(X.by_range.get(target_unit, ()))
        images = [a.act.get((h, x)) for x in fiber]
        return len(set(images)) == len(fiber) == len(target) and set(images) == target

    report = ValidationReport(subject=a.name)
    report.add(run_check("counting-haar-invariance", items, bijective))
    return report


# Compatibilidad y para-equivalencia

def _same_space(left: LeftSelfSimilarAction, right: RightSelfSimilarAction) -> None:
    if left.X is not right.X and not left.X.same_tables(right.X):
        raise StructureError(f"{left.name} y {right.name} no actúan sobre el mismo grupoide")


def check_in_tune(left: LeftSelfSimilarAction, right: RightSelfSimilarAction) -> ValidationReport:
    """
    C0–C3 sobre todas las ternas (h, x, t) con (h, x) y (x, t) en los dominios
    """
    _same_space(left, right)
    X = left.X
    report = ValidationReport(subject=f"{left.name}|{right.name}")
    la, lr, ra, rr = left.act, left.restr, right.act, right.restr
    right_by_x: Dict[int, List[int]] = {}
    for x, t in right.domain:
        right_by_x.setdefault(x, []).append(t)
    triples = sorted((h, x, t) for (h, x) in left.domain for t in right_by_x.get(x, ()))

    def c0(tr: Tuple[int, int, int]) -> bool:
        h, x, t = tr
        return right.sigma(la[(h, x)]) == right.sigma(x) and left.rho(ra[(x, t)]) == left.rho(x)

    def c1(tr: Tuple[int, int, int]) -> bool:
        h, x, t = tr
        lhs = la.get((h, ra[(x, t)]))
        rhs = ra.get((la[(h, x)], t))
        return lhs is not None and lhs == rhs

    def c2(tr: Tuple[int, int, int]) -> bool:
        h, x, t = tr
        lhs = rr.get((la[(h, x)], t))
        return lhs is not None and lhs == rr[(x, t)]

    def c3(tr: Tuple[int, int, int]) -> bool:
        h, x, t = tr
        lhs = lr.get((h, ra[(x, t)]))
        return lhs is not None and lhs == lr[(h, x)]

    report.add(run_check("C0", triples, c0))
    report.add(run_check("C1", triples, c1))
    report.add(run_check("C2", triples, c2))
    report.add(run_check("C3", triples, c3))
    logger.debug(f"🎼 in tune {report.subject}: {report.ok} ({len(triples)} ternas, {X.name})")
    return report


@dataclass(frozen=True, eq=False)
class ParaEquivalence:
    """Par de acciones libres y compatibles sobre el mismo X, con su certificado"""
    left: LeftSelfSimilarAction
    right: RightSelfSimilarAction
    free_left: FreenessResult
    free_right: FreenessResult
    report: ValidationReport

    @property
    def X(self) -> FiniteGroupoid:
        return self.left.X

    @property
    def H(self) -> FiniteGroupoid:
        return self.left.H

    @property
    def G(self) -> FiniteGroupoid:
        return self.right.G


def _freeness_check(name: str, result: FreenessResult) -> CheckResult:
    return CheckResult(check=name, status=CheckStatus.PASS if result.free else CheckStatus.FAIL,
                       witness=result.witness, counts=result.counts, detail=result.detail)


def certify_para_equivalence(left: LeftSelfSimilarAction, right: RightSelfSimilarAction) -> ParaEquivalence:
    """
    Corre todos los verificadores; falla con CertificationError llevando el
    primer reporte con fallas
    """
    _same_space(left, right)
    full = ValidationReport(subject=f"{left.name}|{right.name}")
    stages: List[ValidationReport] = []

    def stage(report: ValidationReport, prefix: str) -> None:
        full.extend(report, prefix)
        stages.append(report)
        if not report.ok:
            logger.warning(f"⚠️ {report.subject}: falla {report.failures[0].check}")
            raise CertificationError(f"para-equivalencia rechazada en {prefix}{report.failures[0].check}",
                                     report)

    stage(check_left_axioms(left), "left.")
    stage(check_right_axioms(right), "right.")
    free_left, free_right = is_free(left), is_free_right(right)
    freeness = ValidationReport(subject=full.subject)
    freeness.add(_freeness_check("free-left", free_left))
    freeness.add(_freeness_check("free-right", free_right))
    stage(freeness, "")
    stage(check_in_tune(left, right), "")
    full.add(auto_pass("proper-left"))
    full.add(auto_pass("proper-right"))
    full.add(auto_pass("open-source-maps"))
    logger.info(f"✅ Para-equivalencia certificada: {full.subject}")
    return ParaEquivalence(left, right, free_left, free_right, full)


# Acciones estándar

def trivial_group() -> FiniteGroupoid:
    return FiniteGroupoid.build("E", [0], [0], [0], {(0, 0): 0}, labels=["e"])


def unit_space_action(X: FiniteGroupoid) -> LeftSelfSimilarAction:
    """H = X⁽⁰⁾, rho0 = id, r(x)⥅x = x, r(x)⥆x = s(x)"""
    H, units = unit_space_groupoid(X)
    pos = {u: i for i, u in enumerate(units)}
    return LeftSelfSimilarAction.from_functions(
        f"{H.name}|{X.name}", H, X, pos, act=lambda h, x: x, restr=lambda h, x: pos[X.src[x]])


def trivial_group_action(X: FiniteGroupoid) -> LeftSelfSimilarAction:
    """H = {e}, todo trivial"""
    E = trivial_group()
    return LeftSelfSimilarAction.from_functions(
        f"E|{X.name}", E, X, {u: 0 for u in X.units}, act=lambda h, x: x, restr=lambda h, x: 0)


def unit_space_right_action(X: FiniteGroupoid) -> RightSelfSimilarAction:
    G, units = unit_space_groupoid(X)
    pos = {u: i for i, u in enumerate(units)}
    return RightSelfSimilarAction.from_functions(
        f"{X.name}|{G.name}", G, X, pos, act=lambda x, t: x, restr=lambda x, t: pos[X.rng[x]])


def trivial_group_right_action(X: FiniteGroupoid) -> RightSelfSimilarAction:
    E = trivial_group()
    return RightSelfSimilarAction.from_functions(
        f"{X.name}|E", E, X, {u: 0 for u in X.units}, act=lambda x, t: x, restr=lambda x, t: 0)


def automorphic_left_action(name: str, H: FiniteGroupoid, X: FiniteGroupoid,
                            alpha: Callable[[int, int], int]) -> LeftSelfSimilarAction:
    """Caso semidirecto: H grupo actuando por automorfismos, h⥆x = h"""
    e = H.identity
    return LeftSelfSimilarAction.from_functions(name, H, X, {u: e for u in X.units},
                                                act=alpha, restr=lambda h, x: h)


def automorphic_right_action(name: str, G: FiniteGroupoid, X: FiniteGroupoid,
                             beta: Callable[[int, int], int]) -> RightSelfSimilarAction:
    """Caso semidirecto derecho: x⋊t = β(x, t), x⋉t = t"""
    e = G.identity
    return RightSelfSimilarAction.from_functions(name, G, X, {u: e for u in X.units},
                                                 act=beta, restr=lambda x, t: t)


def mirror_left_action(a: LeftSelfSimilarAction) -> RightSelfSimilarAction:
    """
    Acción derecha dual: x⋊t = (t⁻¹⥅x⁻¹)⁻¹, x⋉t = (t⁻¹⥆x⁻¹)⁻¹, σ⁰ = ρ⁰
    """
    H, X = a.H, a.X
    return RightSelfSimilarAction.from_functions(
        f"{a.name}~", H, X, a.rho0,
        act=lambda x, t: X.inv[a.act[(H.inv[t], X.inv[x])]],
        restr=lambda x, t: H.inv[a.restr[(H.inv[t], X.inv[x])]])


def mirror_right_action(a: RightSelfSimilarAction) -> LeftSelfSimilarAction:
    """h⥅x = (x⁻¹⋊h⁻¹)⁻¹, h⥆x = (x⁻¹⋉h⁻¹)⁻¹, ρ⁰ = σ⁰"""
    G, X = a.G, a.X
    return LeftSelfSimilarAction.from_functions(
        f"~{a.name}", G, X, a.sigma0,
        act=lambda h, x: X.inv[a.act[(X.inv[x], G.inv[h])]],
        restr=lambda h, x: G.inv[a.restr[(X.inv[x], G.inv[h])]])
