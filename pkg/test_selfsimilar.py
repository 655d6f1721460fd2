#!/usr/bin/env python3
"""
Pruebas de acciones autosimilares: tablas de S4 = C3⋈D4, axiomas izquierdos y
derechos, leyes derivadas, libertad, órbitas, condiciones in tune y mutaciones
"""
import math

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from gpdkit.core import examples
from gpdkit.core.errors import CertificationError, DomainError
from gpdkit.core.groupoid import (cyclic_group, pair_groupoid, subgroup_closure, symmetric_group,
                                  transformation_groupoid)
from gpdkit.core.selfsimilar import (LeftSelfSimilarAction, automorphic_right_action, certify_para_equivalence,
                                     check_in_tune, check_left_axioms, check_right_axioms, check_unique_orbit_rep,
                                     counting_haar_invariance, is_free, is_free_right, mirror_left_action,
                                     mirror_right_action, orbits_left, trivial_group_action,
                                     trivial_group_right_action, unit_space_action, verify_derived_left_laws,
                                     verify_derived_right_laws)

# h·t y h|_t para t = e, a, a²
DOT_TABLE = {
    "e": ("e", "a", "a2"),
    "r": ("e", "a2", "a"),
    "r2": ("e", "a", "a2"),
    "r3": ("e", "a2", "a"),
    "f": ("e", "a2", "a"),
    "rf": ("e", "a", "a2"),
    "r2f": ("e", "a2", "a"),
    "r3f": ("e", "a", "a2"),
}
RESTRICTION_TABLE = {
    "e": ("e", "e", "e"),
    "r": ("r", "r2f", "r3"),
    "r2": ("r2", "rf", "r3f"),
    "r3": ("r3", "r", "r2f"),
    "f": ("f", "f", "f"),
    "rf": ("rf", "r3f", "r2"),
    "r2f": ("r2f", "r3", "r"),
    "r3f": ("r3f", "r2", "rf"),
}
G_LABELS = ("e", "a", "a2")


@pytest.mark.parametrize("h", sorted(DOT_TABLE))
def test_s4_action_table(s4_decomposition, h):
    for t, expected in zip(G_LABELS, DOT_TABLE[h]):
        assert s4_decomposition.dot_label(h, t) == expected, (h, t)


@pytest.mark.parametrize("h", sorted(RESTRICTION_TABLE))
def test_s4_restriction_table(s4_decomposition, h):
    for t, expected in zip(G_LABELS, RESTRICTION_TABLE[h]):
        assert s4_decomposition.restr_label(h, t) == expected, (h, t)


def test_s4_factorization_is_exact(s4_decomposition):
    """ht = (h·t)(h|_t) en S4 para las 24 combinaciones"""
    dec = s4_decomposition
    K = dec.K
    for (h, t), dot in dec.dot.items():
        lhs = K.mul[(dec.H_ids[h], dec.G_ids[t])]
        rhs = K.mul[(dec.G_ids[dot], dec.H_ids[dec.restr[(h, t)]])]
        assert lhs == rhs


def test_s4_action_passes_every_law(s4_action):
    assert s4_action.X.size == 72
    assert len(s4_action.X.units) == 24
    assert s4_action.H.size == 8
    report = check_left_axioms(s4_action)
    assert report.ok, report.failures
    assert verify_derived_left_laws(s4_action).ok


def test_s4_action_is_free_with_nine_orbits(s4_action):
    freeness = is_free(s4_action)
    assert freeness.free and freeness.unit_space_free and freeness.agrees
    classes, _ = orbits_left(s4_action)
    assert len(classes) == 9
    assert check_unique_orbit_rep(s4_action).ok
    assert counting_haar_invariance(s4_action).ok


def _zs_cyclic(m: int, n: int) -> LeftSelfSimilarAction:
    """Z_mn = Z_m ⋈ Z_n con m, n coprimos"""
    K = cyclic_group(m * n)
    G_sub = subgroup_closure(K, [n % (m * n)])
    H_sub = subgroup_closure(K, [m % (m * n)])
    dec = examples.elaborate_zs_decomposition(K, G_sub, H_sub, names=(f"Z{m}", f"Z{n}"))
    return examples.zs_transformation_action(dec, f"zs{m}x{n}")


def _zs_s3_swapped() -> LeftSelfSimilarAction:
    """S3 = C2⋈C3, con los papeles de la descomposición estándar invertidos"""
    K = symmetric_group(3)
    dec = examples.elaborate_zs_decomposition(K, subgroup_closure(K, [K.index("213")]),
                                              subgroup_closure(K, [K.index("231")]), names=("C2", "C3"))
    return examples.zs_transformation_action(dec, "s3swap")


def _corpus():
    z3 = cyclic_group(3)
    spaces = [pair_groupoid(1), pair_groupoid(3), cyclic_group(4), symmetric_group(3),
              transformation_groupoid(z3, ["a", "b", "c"], lambda t, x: (t + x) % 3, "Z3x3")]
    left = [examples.s4_action(), examples.crossed_product_fixture().action, examples.skew_action(),
            examples.semidirect_pair()[0], _zs_s3_swapped(),
            _zs_cyclic(2, 3), _zs_cyclic(3, 2), _zs_cyclic(2, 5), _zs_cyclic(3, 4), _zs_cyclic(5, 3)]
    for X in spaces:
        left.append(unit_space_action(X))
        left.append(trivial_group_action(X))
    right = [mirror_left_action(a) for a in left] + [examples.semidirect_pair()[1]]
    right += [trivial_group_right_action(X) for X in spaces]
    return left, right


CORPUS_LEFT, CORPUS_RIGHT = _corpus()


def test_corpus_size():
    assert len(CORPUS_LEFT) + len(CORPUS_RIGHT) >= 20


@pytest.mark.parametrize("action", CORPUS_LEFT, ids=lambda a: a.name)
def test_left_axioms_imply_derived_laws(action):
    assert check_left_axioms(action).ok
    derived = verify_derived_left_laws(action)
    assert derived.ok, derived.failures


@pytest.mark.parametrize("action", CORPUS_RIGHT, ids=lambda a: a.name)
def test_right_axioms_imply_derived_laws(action):
    assert check_right_axioms(action).ok
    derived = verify_derived_right_laws(action)
    assert derived.ok, derived.failures


@pytest.mark.parametrize("action", CORPUS_LEFT, ids=lambda a: a.name)
def test_mirror_is_an_involution(action):
    back = mirror_right_action(mirror_left_action(action))
    assert back.act == action.act
    assert back.restr == action.restr


@settings(max_examples=15, deadline=None)
@given(st.integers(min_value=1, max_value=6), st.integers(min_value=1, max_value=6))
def test_random_cyclic_decompositions(m, n):
    assume(math.gcd(m, n) == 1)
    action = _zs_cyclic(m, n)
    assert check_left_axioms(action).ok
    assert verify_derived_left_laws(action).ok
    assert is_free(action).free
    assert len(orbits_left(action)[0]) == m * m


@settings(max_examples=10, deadline=None)
@given(st.integers(min_value=1, max_value=4))
def test_unit_space_action_is_free(n):
    action = unit_space_action(pair_groupoid(n))
    assert check_left_axioms(action).ok
    assert is_free(action).free


def _mutated(action: LeftSelfSimilarAction, table: str) -> LeftSelfSimilarAction:
    H, X = action.H, action.X
    h = H.index("r")
    x = X.units[0]
    act, restr = dict(action.act), dict(action.restr)
    if table == "act":
        y = act[(h, x)]
        act[(h, x)] = next(z for z in X.units if z != y)
    else:
        restr[(h, x)] = next(k for k in H.elements if k != restr[(h, x)])
    return LeftSelfSimilarAction.build(f"{action.name}*", H, X, action.rho0, act, restr)


@pytest.mark.parametrize("table", ["act", "restr"])
def test_mutated_action_fails(s4_action, table):
    report = check_left_axioms(_mutated(s4_action, table))
    assert not report.ok
    assert report.failures[0].witness


def test_mutated_right_action_fails(s4_action):
    report = check_right_axioms(mirror_left_action(_mutated(s4_action, "act")))
    assert not report.ok


def test_partial_tables_are_rejected(s4_action):
    act = dict(s4_action.act)
    act.pop(s4_action.domain[0])
    with pytest.raises(DomainError):
        LeftSelfSimilarAction.build("roto", s4_action.H, s4_action.X, s4_action.rho0, act, s4_action.restr)


def test_semidirect_pair_is_in_tune(semidirect):
    left, right = semidirect
    assert check_in_tune(left, right).ok
    para = certify_para_equivalence(left, right)
    assert para.report.ok


def test_out_of_tune_pair_is_rejected(semidirect):
    """Una transposición de puntos no conmuta con la traslación +3"""
    left, _ = semidirect
    X = left.X

    def swap01(x: int, t: int) -> int:
        if t == 0:
            return x
        i, j = divmod(x, 6)
        sigma = {0: 1, 1: 0}
        return sigma.get(i, i) * 6 + sigma.get(j, j)

    right = automorphic_right_action("swap01", cyclic_group(2, "Z2r"), X, swap01)
    assert check_right_axioms(right).ok
    assert not is_free_right(right).free
    tune = check_in_tune(left, right)
    assert not tune.get("C1").passed
    with pytest.raises(CertificationError) as info:
        certify_para_equivalence(left, right)
    assert not info.value.report.ok
