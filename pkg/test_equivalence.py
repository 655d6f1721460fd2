#!/usr/bin/env python3
"""
Pruebas del teorema de equivalencia, del caso unilateral y de los bloques
del álgebra de convolución
"""
import pytest

from gpdkit.core.algebra import (algebra_summary, convolution_product, matrix_units, morita_compatible,
                                 verify_matrix_units)
from gpdkit.core.equivalence import build_equivalence, one_sided_equivalence, verify_equivalence
from gpdkit.core.errors import StructureError
from gpdkit.core.groupoid import cyclic_group, pair_groupoid
from gpdkit.core.selfsimilar import certify_para_equivalence, trivial_group_action, unit_space_action


@pytest.fixture(scope="module")
def s4_equivalence(s4_action):
    return one_sided_equivalence(s4_action)


def test_s4_one_sided_equivalence(s4_equivalence):
    w = s4_equivalence
    assert w.A.base.size == 576
    assert w.C.base.size == 9
    report = verify_equivalence(w)
    assert report.ok, report.failures
    for name in ("principal-r-fibers-are-orbits", "principal-s-fibers-are-orbits", "commutation",
                 "range-source-left", "range-source-right"):
        assert report.get(name).passed, name


def test_s4_morita_pair(s4_equivalence):
    """X⋈H ≅ M₂₄ y H\\X ≅ M₃: un solo bloque en cada lado"""
    a = algebra_summary(s4_equivalence.A.base)
    c = algebra_summary(s4_equivalence.C.base)
    assert a.principal and c.principal
    assert a.block_dims == [24]
    assert c.block_dims == [3]
    assert morita_compatible(a, c)


def test_semidirect_two_sided_equivalence(semidirect):
    left, right = semidirect
    w = build_equivalence(certify_para_equivalence(left, right))
    assert w.X_mod_G.base.size == 12
    assert w.H_mod_X.base.size == 18
    assert w.A.base.size == 12 * 2
    assert w.C.base.size == 3 * 18
    assert verify_equivalence(w).ok


@pytest.mark.parametrize("make", [unit_space_action, trivial_group_action], ids=["unit-space", "trivial"])
def test_trivial_actions_give_trivial_equivalences(make):
    X = pair_groupoid(3)
    w = one_sided_equivalence(make(X))
    assert verify_equivalence(w).ok
    assert algebra_summary(w.A.base).block_dims == [3]
    assert algebra_summary(w.C.base).block_dims == [3]


def test_non_principal_groupoid_summary():
    summary = algebra_summary(cyclic_group(3))
    assert not summary.principal
    assert summary.block_dims is None
    assert summary.isotropy_witness is not None
    with pytest.raises(StructureError):
        morita_compatible(summary, algebra_summary(pair_groupoid(2)))
    report = verify_matrix_units(cyclic_group(3))
    assert not report.get("principal").passed


def test_matrix_units_of_pair_groupoid():
    g = pair_groupoid(3)
    assert verify_matrix_units(g).ok
    e = matrix_units(g)
    u0, u1, u2 = g.units
    assert convolution_product(g, e[(u0, u1)], e[(u1, u2)]) == e[(u0, u2)]
    assert convolution_product(g, e[(u0, u1)], e[(u0, u1)]) == {}
