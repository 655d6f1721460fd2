#!/usr/bin/env python3
"""
Script de verificación de extremo a extremo sobre los ejemplos incorporados de gpdkit
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from gpdkit.core import examples
from gpdkit.core.algebra import algebra_summary, morita_compatible
from gpdkit.core.bimodule import build_bimodule, verify_bimodule
from gpdkit.core.construct import orbit_groupoid_left
from gpdkit.core.deaconu import check_star_commuting, dr_freeness
from gpdkit.core.equivalence import one_sided_equivalence, verify_equivalence
from gpdkit.core.fell_construct import one_sided_fell_system
from gpdkit.core.groupoid import cyclic_group, iso_check
from gpdkit.core.selfsimilar import check_left_axioms, is_free


def check_s4():
    """D4 sobre C3⋉S4: axiomas, libertad, equivalencia y bloques M₂₄ / M₃"""
    print("🔷 Probando S4 = C3⋈D4...")
    try:
        action = examples.s4_action()
        if not (check_left_axioms(action).ok and is_free(action).free):
            print("❌ S4: la acción no cumple los axiomas o no es libre")
            return False
        w = one_sided_equivalence(action)
        a, c = algebra_summary(w.A.base), algebra_summary(w.C.base)
        if verify_equivalence(w).ok and morita_compatible(a, c):
            print(f"✅ S4: bloques {a.block_dims} y {c.block_dims}")
            return True
        print("❌ S4: la equivalencia no verifica")
        return False
    except Exception as e:
        print(f"❌ S4: Error - {e}")
        return False


def check_skew():
    """Z/2 \\ Z/4(c) ≅ Z/4"""
    print("🔀 Probando producto torcido...")
    try:
        quotient = orbit_groupoid_left(examples.skew_action())
        if iso_check(quotient.base, cyclic_group(4)) is not None:
            print("✅ Producto torcido: el cociente es Z/4")
            return True
        print("❌ Producto torcido: el cociente no es Z/4")
        return False
    except Exception as e:
        print(f"❌ Producto torcido: Error - {e}")
        return False


def check_fell(name, system_factory):
    print(f"🧮 Probando bimódulo {name}...")
    try:
        report = verify_bimodule(build_bimodule(system_factory()))
        if report.ok:
            print(f"✅ {name}: {len(report.checks)} verificaciones")
            return True
        print(f"❌ {name}: falla {report.failures[0].check}")
        return False
    except Exception as e:
        print(f"❌ {name}: Error - {e}")
        return False


def check_dr():
    print("🔁 Probando Deaconu–Renault sobre Z/6...")
    try:
        sys_ = examples.z6_system()
        if not check_star_commuting(sys_).ok:
            print("❌ DR: el sistema no es *-conmutativo")
            return False
        result = dr_freeness(sys_, 2)
        print(f"✅ DR: período {result.period}, libre = {result.free}")
        return True
    except Exception as e:
        print(f"❌ DR: Error - {e}")
        return False


def main():
    """Ejecuta todas las verificaciones"""
    print("🔍 VERIFICACIÓN DE EJEMPLOS GPDKIT")
    print("=" * 40)

    checks = [
        ("S4", check_s4),
        ("Producto torcido", check_skew),
        ("Producto cruzado", lambda: check_fell(
            "producto cruzado", lambda: one_sided_fell_system(examples.crossed_product_fixture().fell_action))),
        ("Semidirecto", lambda: check_fell("semidirecto", examples.semidirect_fell_system)),
        ("Deaconu–Renault", check_dr),
    ]

    results = []
    for name, check in checks:
        results.append((name, check()))
        print()

    print("=" * 40)
    print("📊 RESUMEN DE RESULTADOS:")

    all_passed = True
    for name, passed in results:
        status = "✅ PASS" if passed else "❌ FAIL"
        print(f"   {name}: {status}")
        if not passed:
            all_passed = False

    print("=" * 40)
    if all_passed:
        print("🎉 ¡TODOS LOS EJEMPLOS VERIFICAN!")
    else:
        print("⚠️  ALGUNOS EJEMPLOS FALLAN")
        print("   Revisa los errores arriba.")
    return 0 if all_passed else 1


if __name__ == "__main__":
    sys.exit(main())
