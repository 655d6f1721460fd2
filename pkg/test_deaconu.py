#!/usr/bin/env python3
"""
Pruebas de sistemas *-conmutativos y grupoides de Deaconu–Renault con ventana
"""
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gpdkit.core import examples
from gpdkit.core.deaconu import (StarCommutingSystem, check_star_commuting, dr_freeness, dr_groupoid,
                                 dr_ss_action)
from gpdkit.core.errors import StructureError


def _shifts(n: int, a: int, b: int, name: str = "shift") -> StarCommutingSystem:
    return StarCommutingSystem(name, tuple((x + a) % n for x in range(n)), tuple((x + b) % n for x in range(n)))


def test_z6_is_star_commuting():
    sys = examples.z6_system()
    report = check_star_commuting(sys)
    assert report.ok, report.failures
    assert sys.t_order == 2
    assert sys.theta(1, 1, 0) == 5


def test_declared_fill_table_is_checked():
    swap = (1, 0)
    good = StarCommutingSystem("swap", swap, swap, fill={(0, 0): 1, (1, 1): 0})
    assert check_star_commuting(good).ok
    forged = StarCommutingSystem("swap*", swap, swap, fill={(0, 0): 0, (1, 1): 1})
    report = check_star_commuting(forged)
    assert report.get("fill-in-unique").passed
    assert not report.get("fill-table").passed


def test_identity_system():
    ident = (0, 1, 2)
    assert check_star_commuting(StarCommutingSystem("id", ident, ident)).ok


def test_non_surjective_map_is_rejected():
    with pytest.raises(StructureError):
        StarCommutingSystem("mal", (0, 0, 1), (0, 1, 2))


def test_windowed_groupoid():
    sys = examples.z6_system()
    w = dr_groupoid(sys, 2)
    assert w.groupoid.size == 6 * 25
    assert w.window == 2
    assert not w.closed
    assert all(w.groupoid.mul.get(p) is None for p in w.excluded)
    s_only = dr_groupoid(sys, 2, "S")
    assert s_only.groupoid.size == 6 * 5
    assert len(s_only.groupoid.units) == 6


def test_zero_window_is_unit_space():
    w = dr_groupoid(examples.z6_system(), 0, "S")
    assert w.closed
    assert w.groupoid.size == 6
    assert all(w.groupoid.is_unit(x) for x in w.groupoid.elements)


@pytest.mark.parametrize("maps, window", [("SU", 1), ("S", -1)])
def test_bad_window_arguments(maps, window):
    with pytest.raises(StructureError):
        dr_groupoid(examples.z6_system(), window, maps)


def test_deaconu_action_tables():
    dr = dr_ss_action(examples.z6_system(), 1)
    a = dr.action
    assert a.H.size == 18
    assert a.X.size == 18
    for u in a.X.units:
        assert a.H.is_unit(a.rho0[u])


def test_periodicity_witness():
    result = dr_freeness(examples.z6_system(), 1)
    assert not result.free
    assert result.period == 2
    assert len(result.witness) == 2


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=1, max_value=8), st.integers(min_value=0, max_value=7),
       st.integers(min_value=0, max_value=7))
def test_commuting_shifts(n, a, b):
    sys = _shifts(n, a, b)
    assert check_star_commuting(sys).ok
    assert sys.t_order == n // math.gcd(n, b)
