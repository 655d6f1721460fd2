#!/usr/bin/env python3
"""
Pruebas de construcciones: productos de Zappa–Szép, grupoides de órbitas,
acciones cociente, levantamiento a par emparejado y productos torcidos
"""
from pathlib import Path

import pytest

from gpdkit.core import examples
from gpdkit.core.construct import (matched_lift_iso, matched_pair_lift, orbit_groupoid_left, orbit_groupoid_right,
                                   quotient_left_action, quotient_right_action, validate_matched_pair,
                                   zs_product_left, zs_product_right)
from gpdkit.core.dsl import elaborate, load
from gpdkit.core.errors import NotFreeError
from gpdkit.core.examples import EXAMPLES, example_document
from gpdkit.core.groupoid import (cyclic_group, disjoint_union, iso_check, pair_groupoid, symmetric_group,
                                  transformation_groupoid, validate_groupoid)
from gpdkit.core.selfsimilar import (automorphic_left_action, certify_para_equivalence, check_left_axioms,
                                     check_right_axioms, trivial_group_action, trivial_group_right_action,
                                     unit_space_action, unit_space_right_action)

FIXTURES = Path(__file__).parent / "fixtures"


def test_s4_product_is_s4_acting_on_itself(s4_action):
    product = zs_product_left(s4_action)
    base = product.base
    assert base.size == 576
    assert len(base.units) == 24
    assert validate_groupoid(base).ok
    K = examples.s4_decomposition().K
    regular = transformation_groupoid(K, list(K.labels), lambda s, x: K.mul[(s, x)], "S4xS4")
    assert iso_check(base, regular) is not None


def test_s4_product_units_follow_momentum(s4_action):
    product = zs_product_left(s4_action)
    for v in s4_action.X.units:
        unit = product.unit_of(v)
        assert product.base.is_unit(unit)
        assert product.pairs[unit] == (v, s4_action.rho0[v])


def test_s4_orbit_groupoid(s4_action):
    """D4\\(C3⋉S4) tiene 9 elementos y es C3 actuando regularmente sobre 3 puntos"""
    quotient = orbit_groupoid_left(s4_action)
    assert quotient.base.size == 9
    assert len(quotient.base.units) == 3
    assert validate_groupoid(quotient.base).ok
    z3 = cyclic_group(3)
    target = transformation_groupoid(z3, ["0", "1", "2"], lambda t, x: (t + x) % 3, "C3xC3")
    assert iso_check(quotient.base, target) is not None
    for k, members in enumerate(quotient.classes):
        assert quotient.rep(k) == min(members)
        assert all(quotient.of(x) == k for x in members)


def test_matched_pair_lift(s4_action):
    lift = matched_pair_lift(s4_action)
    assert validate_matched_pair(lift).ok
    morphism = matched_lift_iso(s4_action, lift)
    assert morphism.validate(isomorphism=True).ok


def test_right_product_and_orbits(semidirect):
    _, right = semidirect
    product = zs_product_right(right)
    assert product.base.size == 36 * 3
    assert validate_groupoid(product.base).ok
    quotient = orbit_groupoid_right(right)
    assert quotient.base.size == 12
    assert len(quotient.base.units) == 2
    assert validate_groupoid(quotient.base).ok


def test_quotient_actions_are_self_similar(semidirect):
    left, right = semidirect
    para = certify_para_equivalence(left, right)
    induced_left = quotient_left_action(para)
    induced_right = quotient_right_action(para)
    assert check_left_axioms(induced_left).ok
    assert check_right_axioms(induced_right).ok
    assert induced_left.X.size == 12
    assert induced_right.X.size == 18


def test_non_free_action_has_no_orbit_groupoid(semidirect):
    X = semidirect[0].X

    def swap01(h: int, x: int) -> int:
        if h == 0:
            return x
        i, j = divmod(x, 6)
        sigma = {0: 1, 1: 0}
        return sigma.get(i, i) * 6 + sigma.get(j, j)

    action = automorphic_left_action("swap01", cyclic_group(2), X, swap01)
    assert check_left_axioms(action).ok
    with pytest.raises(NotFreeError) as info:
        orbit_groupoid_left(action)
    h, x = info.value.witness
    assert action.act[(h, x)] == x


def test_skew_product_quotient_recovers_base():
    """Z/2 \\ Z/4(c) ≅ Z/4"""
    action = examples.skew_action()
    assert action.X.size == 8
    assert check_left_axioms(action).ok
    quotient = orbit_groupoid_left(action)
    assert iso_check(quotient.base, cyclic_group(4)) is not None
    assert validate_groupoid(zs_product_left(action).base).ok


def _small_groupoids():
    """Grupoides de los documentos incluidos con a lo sumo 50 elementos, más algunos construidos"""
    found = {}
    workspaces = [load((FIXTURES / "swap.gpd").read_text(encoding="utf-8"))]
    workspaces += [elaborate(example_document(name)) for name in sorted(EXAMPLES)]
    for ws in workspaces:
        for name in ws.names("groupoid"):
            g = ws.get(name)
            if g.size <= 50:
                found.setdefault(f"{name}:{g.size}", g)
    for g in (pair_groupoid(3, "P3"), cyclic_group(4, "Z4"), symmetric_group(3),
              disjoint_union(cyclic_group(2), pair_groupoid(2))):
        found.setdefault(f"{g.name}:{g.size}", g)
    return found


SMALL = _small_groupoids()


@pytest.mark.parametrize("key", sorted(SMALL))
@pytest.mark.parametrize("side", ["left", "right"])
def test_trivial_products_recover_groupoid(key, side):
    """X⋈X⁽⁰⁾ ≅ X y X⋈{e} ≅ X, y sus espejos por la derecha"""
    X = SMALL[key]
    if side == "left":
        actions = (unit_space_action(X), trivial_group_action(X))
        build = zs_product_left
    else:
        actions = (unit_space_right_action(X), trivial_group_right_action(X))
        build = zs_product_right
    for action in actions:
        product = build(action)
        assert product.base.size == X.size
        morphism = iso_check(product.base, X)
        assert morphism is not None
        assert morphism.validate(isomorphism=True).ok
