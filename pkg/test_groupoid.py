#!/usr/bin/env python3
"""
Pruebas del núcleo de grupoides finitos: leyes, testigos, isomorfismos y constructores
"""

from hypothesis import given, settings
from hypothesis import strategies as st

from gpdkit.core.groupoid import (FiniteGroupoid, GroupoidMorphism, components, compose_perm, cyclic_group,
                                  direct_product_group, disjoint_union, element_order, identity_morphism, iso_check,
                                  one_line, pair_groupoid, subgroup_closure, symmetric_group, transformation_groupoid,
                                  unit_space_groupoid, validate_groupoid)
from gpdkit.core.orbits import find_orbits
from gpdkit.models import CheckStatus


def _with_mul(g: FiniteGroupoid, key, value) -> FiniteGroupoid:
    mul = dict(g.mul)
    mul[key] = value
    return FiniteGroupoid.build(g.name + "'", list(g.src), list(g.rng), list(g.inv), mul,
                                labels=list(g.labels), units=list(g.units))


def test_standard_groupoids_validate():
    """Grupos, grupoides de pares y de transformación cumplen todas las leyes"""
    z3 = cyclic_group(3)
    for g in (cyclic_group(1), z3, symmetric_group(3), pair_groupoid(3),
              transformation_groupoid(z3, ["a", "b", "c"], lambda t, x: (t + x) % 3)):
        report = validate_groupoid(g)
        assert report.ok, report.failures


def test_pair_groupoid_shape():
    g = pair_groupoid(3, "P3")
    assert g.size == 9
    assert len(g.units) == 3
    x = g.index("p0_2")
    assert g.label(g.src[x]) == "p2_2"
    assert g.label(g.rng[x]) == "p0_0"
    assert g.label(g.inv[x]) == "p2_0"


def test_broken_multiplication_reports_witness():
    """Un producto alterado se detecta con testigo, sin excepción"""
    g = pair_groupoid(2, "P2")
    a, b = g.index("p0_1"), g.index("p1_0")
    broken = _with_mul(g, (a, b), g.index("p0_1"))
    report = validate_groupoid(broken)
    assert not report.ok
    failure = report.failures[0]
    assert failure.status == CheckStatus.FAIL
    assert failure.witness


def test_symmetric_group_labels_and_composition():
    s3 = symmetric_group(3)
    assert s3.size == 6
    assert s3.label(s3.identity) == "123"
    p, q = (1, 2, 0), (1, 0, 2)
    assert compose_perm(p, q) == (2, 1, 0)
    assert one_line(p) == "231"
    assert len(subgroup_closure(s3, [s3.index("231")])) == 3


def test_regular_transformation_groupoid_is_pair_groupoid():
    """Z3 actuando regularmente sobre sí mismo es el grupoide de pares de 3 puntos"""
    z3 = cyclic_group(3)
    t = transformation_groupoid(z3, ["0", "1", "2"], lambda s, x: (s + x) % 3, "Z3xZ3")
    morphism = iso_check(t, pair_groupoid(3))
    assert morphism is not None
    assert morphism.validate(isomorphism=True).ok


def test_iso_check_distinguishes_groups():
    z4 = cyclic_group(4)
    klein = direct_product_group(cyclic_group(2), cyclic_group(2))
    assert iso_check(z4, klein) is None
    assert iso_check(z4, cyclic_group(4, "otro")) is not None


def test_components_and_isotropy():
    g = transformation_groupoid(cyclic_group(2), ["a", "b", "c"], lambda t, x: x if x == 2 else (x + t) % 2)
    comps = components(g)
    assert sorted(len(c) for c in comps) == [1, 2]
    fixed = g.index("0:c")
    assert len(g.isotropy(fixed)) == 2


def test_identity_morphism_and_rejected_map():
    g = cyclic_group(3)
    assert identity_morphism(g).validate(isomorphism=True).ok
    constant = GroupoidMorphism(g, g, (1, 1, 1))
    assert not constant.validate().ok


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=1, max_value=9))
def test_cyclic_groups(n):
    g = cyclic_group(n)
    assert validate_groupoid(g).ok
    for x in g.elements:
        assert n % element_order(g, x) == 0


@settings(max_examples=15, deadline=None)
@given(st.integers(min_value=1, max_value=5))
def test_pair_groupoids_are_principal(n):
    g = pair_groupoid(n)
    assert validate_groupoid(g).ok
    assert all(len(g.isotropy(u)) == 1 for u in g.units)
    assert len(components(g)) == 1


def test_disjoint_union_and_unit_space():
    g = disjoint_union(cyclic_group(2), pair_groupoid(2))
    assert g.size == 6
    assert validate_groupoid(g).ok
    assert sorted(len(c) for c in components(g)) == [1, 2]
    units, inclusion = unit_space_groupoid(g)
    assert units.size == 3
    assert validate_groupoid(units).ok
    assert all(g.is_unit(u) for u in inclusion)
    a, b = g.units[1], g.units[2]
    assert len(g.hom(a, b)) == 1


def test_iso_check_on_broken_table_returns_none():
    """x·x = x en Z3: las potencias de x no vuelven a la unidad"""
    z3 = cyclic_group(3)
    x = next(y for y in z3.elements if y != z3.identity)
    bad = _with_mul(z3, (x, x), x)
    assert element_order(bad, x) == 0
    assert iso_check(bad, cyclic_group(3)) is None
    assert iso_check(cyclic_group(3), bad) is None


def test_find_orbits_orders_classes_by_minimum():
    classes, class_of = find_orbits([(4, 1), (3, 0), (1, 2)], [0, 1, 2, 3, 4, 5])
    assert classes == [[0, 3], [1, 2, 4], [5]]
    assert class_of == [0, 1, 1, 0, 1, 2]
