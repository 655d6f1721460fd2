#!/usr/bin/env python3
"""
Pruebas de fibrados de Fell, acciones sobre fibrados, fibrados producto y
cociente, y del bimódulo de imprimitividad
"""
import dataclasses

import numpy as np
import pytest

from gpdkit.core import examples
from gpdkit.core.bimodule import build_bimodule, verify_bimodule
from gpdkit.core.construct import zs_product_left
from gpdkit.core.errors import CertificationError, StructureError
from gpdkit.core.fell import (FellBundle, FellLeftAction, FellRightAction, check_fell_left_action,
                              check_fell_right_action, crossed_product_bundle, full_matrix_bundle, is_saturated,
                              line_bundle, structure_constants_match, validate_fell)
from gpdkit.core.fell_construct import (check_bundle_compatibility, certify_fell_system, one_sided_fell_system,
                                        product_bundle_left, quotient_bundle_consistency, quotient_bundle_left,
                                        quotient_fell_actions, transport_left)
from gpdkit.core.groupoid import cyclic_group, identity_morphism, pair_groupoid
from gpdkit.core.selfsimilar import certify_para_equivalence
from gpdkit.models import CheckStatus


def test_line_and_matrix_bundles():
    g = pair_groupoid(2)
    for b in (line_bundle(g), full_matrix_bundle(g, {g.units[0]: 1, g.units[1]: 2})):
        report = validate_fell(b)
        assert report.ok, report.failures
        assert is_saturated(b).passed


def test_fiber_dimensions_are_checked():
    g = pair_groupoid(2)
    with pytest.raises(StructureError):
        FellBundle.build("mal", g, {g.units[0]: 1, g.units[1]: 1}, [np.ones((1, 2, 1))] * g.size)
    with pytest.raises(StructureError):
        FellBundle.build("mal", g, {g.units[0]: 1}, [np.ones((1, 1, 1))] * g.size)


def test_bundle_not_closed_under_products():
    """S_1 = span(E11) sobre Z2: E11·E11 no cae en S_e = span(I)"""
    g = cyclic_group(2)
    e11 = np.array([[1, 0], [0, 0]])
    b = FellBundle.build("roto", g, {g.identity: 2}, [np.eye(2)[None], e11[None]])
    report = validate_fell(b)
    assert not report.get("F1-closure").passed
    assert report.get("F3-associativity").status.value == "skipped"


def test_crossed_product_bundle(cp_fixture):
    b = cp_fixture.bundle
    assert b.dims[b.base.units[0]] == 2
    assert validate_fell(b).ok
    assert is_saturated(b).passed
    assert check_fell_left_action(cp_fixture.fell_action).ok


def test_crossed_product_rejects_non_homomorphism(cp_fixture):
    unitaries = [np.eye(2)] * cp_fixture.action.X.size
    unitaries[1] = -np.eye(2)
    with pytest.raises(StructureError):
        crossed_product_bundle("mal", cp_fixture.action.X, unitaries)


def test_product_bundle_structure_constants(cp_fixture):
    """B⋈H coincide con el producto cruzado de X⋈H por U_(x,h) = ρ(t)ρ(h)"""
    product = zs_product_left(cp_fixture.action)
    realized = product_bundle_left(cp_fixture.fell_action, product)
    assert validate_fell(realized).ok
    unitaries = [cp_fixture.product_unitary(x, h) for x, h in product.pairs]
    reference = crossed_product_bundle("CPS3xC2", product.base, unitaries)
    report = structure_constants_match(realized, reference, identity_morphism(product.base))
    assert report.ok, report.failures


def test_quotient_bundle(s4_action):
    fa = examples.s4_line_action(s4_action)
    quotient = quotient_bundle_left(fa)
    assert quotient.base.size == 9
    assert validate_fell(quotient).ok
    assert quotient_bundle_consistency(fa.bundle, transport_left(fa)).ok


def test_mutated_fell_action_fails(cp_fixture):
    fa = cp_fixture.fell_action
    maps = dict(fa.maps)
    p = fa.action.domain[-1]
    maps[p] = 2 * maps[p]
    report = check_fell_left_action(FellLeftAction("cpB*", fa.action, fa.bundle, maps))
    assert not report.ok
    assert not report.get("isometry").passed


def test_s4_fell_system_and_bimodule(s4_fell_system):
    assert s4_fell_system.report.ok
    w = build_bimodule(s4_fell_system)
    assert w.A_bundle.base.size == 576
    assert w.C_bundle.base.size == 9
    report = verify_bimodule(w)
    assert report.ok, report.failures


def test_crossed_product_bimodule(cp_fixture):
    system = one_sided_fell_system(cp_fixture.fell_action)
    report = verify_bimodule(build_bimodule(system))
    assert report.ok, report.failures


def test_semidirect_bimodule():
    system = examples.semidirect_fell_system()
    assert system.report.ok
    w = build_bimodule(system)
    report = verify_bimodule(w)
    assert report.ok, report.failures
    assert report.get("FE1-commutation").passed


def test_incompatible_bundle_actions():
    left, right = examples.semidirect_fell_actions()
    maps = dict(right.maps)
    G = right.action.G
    p = next(q for q in right.action.domain if q[1] != G.identity)
    maps[p] = -maps[p]
    broken = FellRightAction("shift2B*", right.action, right.bundle, maps)
    assert not check_bundle_compatibility(left, broken).get("BC1").passed
    with pytest.raises(CertificationError):
        certify_fell_system(certify_para_equivalence(left.action, right.action), left, broken)


def test_mutated_inner_product_is_detected():
    w = build_bimodule(examples.semidirect_fell_system())
    key = next(p for p in sorted(w.lip) if p[0] != p[1])
    fiber, P = w.lip[key]
    lip = dict(w.lip)
    lip[key] = (fiber, 2 * P)
    report = verify_bimodule(dataclasses.replace(w, lip=lip))
    assert not report.get("FE2b-left-inner-adjoint").passed


def test_right_action_checks_on_semidirect():
    _, right = examples.semidirect_fell_actions()
    assert check_fell_right_action(right).ok


def test_quotient_fell_actions_on_semidirect():
    right_q, left_q = quotient_fell_actions(examples.semidirect_fell_system())
    assert right_q.bundle.base.size == 18
    assert left_q.bundle.base.size == 12
    assert check_fell_right_action(right_q).ok
    assert check_fell_left_action(left_q).ok


def test_matrix_model_laws_are_checked_numerically(cp_fixture):
    report = validate_fell(cp_fixture.bundle)
    for name in ("F4-norm", "F6-F8-involution-laws", "F7-F10-positivity"):
        result = report.get(name)
        assert result.status == CheckStatus.PASS
        assert result.counts > 0
