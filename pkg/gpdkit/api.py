import argparse
import hashlib
import logging
import math
from functools import partial
from pathlib import Path
from typing import Any, Callable, Dict, Tuple

import orjson

from . import __version__
from .config import get_settings
from .core.algebra import algebra_summary, morita_compatible, verify_matrix_units
from .core.bimodule import build_bimodule, verify_bimodule
from .core.checks import run_check, skipped
from .core.construct import (matched_lift_iso, matched_pair_lift, orbit_groupoid_left, orbit_groupoid_right,
                             validate_matched_pair, zs_product_left, zs_product_right)
from .core.deaconu import check_star_commuting, dr_freeness, dr_groupoid
from .core.dsl import Workspace, elaborate, parse, print_document
from .core.equivalence import build_equivalence, verify_equivalence
from .core.errors import ConsistencyError, DslError, GpdkitError, UsageError
from .core.examples import EXAMPLES, example_document
from .core.fell import (FellLeftAction, FellRightAction, check_fell_left_action, check_fell_right_action,
                        is_saturated, validate_fell)
from .core.fell_construct import certify_fell_system, one_sided_fell_system
from .core.groupoid import validate_groupoid
from .core.job_manager import CheckJobManager
from .core.selfsimilar import (LeftSelfSimilarAction, certify_para_equivalence, check_left_axioms,
                               check_right_axioms, check_unique_orbit_rep, check_unique_orbit_rep_right,
                               counting_haar_invariance, is_free, is_free_right, trivial_group_right_action)
from .models import CheckResult, CheckStatus, Report

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


def _load(path: str) -> Tuple[Workspace, str]:
    """Lee y elabora un documento; devuelve también el md5 de los bytes de entrada"""
    try:
        raw = Path(path).read_bytes()
    except OSError as e:
        raise UsageError(f"no se puede leer {path}: {e.strerror}")
    digest = hashlib.md5(raw).hexdigest()
    return elaborate(parse(raw.decode("utf-8"))), digest


def _block(ws: Workspace, name: str, *kinds: str) -> Any:
    try:
        return ws.get(name, *kinds)
    except KeyError:
        raise UsageError(f"el documento no define {name}")
    except TypeError as e:
        raise UsageError(str(e))


def _validators() -> Dict[str, Callable[[Any], Any]]:
    return {
        "groupoid": validate_groupoid,
        "left-action": check_left_axioms,
        "right-action": check_right_axioms,
        "fell-bundle": validate_fell,
        "fell-action": lambda fa: (check_fell_left_action(fa) if isinstance(fa, FellLeftAction)
                                   else check_fell_right_action(fa)),
        "dr-system": check_star_commuting,
    }


def cmd_check(args: argparse.Namespace) -> Report:
    """
    Valida cada bloque del documento con su verificador
    """
    ws, digest = _load(args.file)
    job = CheckJobManager("check", digest)
    validators = _validators()
    for name in ws.names("fell-bundle"):
        job.add_data(f"{name}.saturated", is_saturated(ws.objects[name]).passed)
    stages = [(name, partial(validators[ws.kinds[name]], ws.objects[name])) for name in ws.names()]
    return job.run(stages)


def cmd_product(args: argparse.Namespace) -> Report:
    """
    Producto X⋈H (o G⋈X) y su validación; para acciones izquierdas también el
    levantamiento al par emparejado
    """
    ws, digest = _load(args.file)
    action = _block(ws, args.action, "left-action", "right-action")
    job = CheckJobManager("product", digest)
    left = isinstance(action, LeftSelfSimilarAction)
    state: Dict[str, Any] = {}

    def product() -> Any:
        state["p"] = zs_product_left(action) if left else zs_product_right(action)
        base = state["p"].base
        job.add_data("product", {"name": base.name, "size": base.size, "units": len(base.units)})
        return validate_groupoid(base)

    def lift() -> Any:
        lifted = matched_pair_lift(action)
        report = validate_matched_pair(lifted)
        try:
            matched_lift_iso(action, lifted)
            report.add(CheckResult(check="lift-isomorphism", status=CheckStatus.PASS))
        except ConsistencyError as e:
            report.add(CheckResult(check="lift-isomorphism", status=CheckStatus.FAIL, witness=e.witness,
                                   detail=str(e)))
        return report

    stages = [("axioms", partial(check_left_axioms if left else check_right_axioms, action)),
              ("product", product)]
    if left:
        stages.append(("matched-lift", lift))
    return job.run(stages)


def cmd_quotient(args: argparse.Namespace) -> Report:
    """
    Grupoide de órbitas de una acción libre, con unicidad de representantes
    e invariancia de la medida de conteo
    """
    ws, digest = _load(args.file)
    action = _block(ws, args.action, "left-action", "right-action")
    job = CheckJobManager("quotient", digest)
    left = isinstance(action, LeftSelfSimilarAction)

    def free() -> CheckResult:
        result = is_free(action) if left else is_free_right(action)
        job.add_data("freeness", result.model_dump(mode="json"))
        return CheckResult(check="free", status=CheckStatus.PASS if result.free else CheckStatus.FAIL,
                           witness=result.witness, counts=result.counts, detail=result.detail)

    def orbits() -> Any:
        q = orbit_groupoid_left(action) if left else orbit_groupoid_right(action)
        job.add_data("orbit_groupoid", {"name": q.base.name, "size": q.base.size, "units": len(q.base.units),
                                        "representatives": [q.rep(k) for k in range(len(q.classes))]})
        return validate_groupoid(q.base)

    stages = [("free", free), ("orbits", orbits),
              ("representatives", partial(check_unique_orbit_rep if left else check_unique_orbit_rep_right,
                                          action))]
    if left:
        stages.append(("haar", partial(counting_haar_invariance, action)))
    return job.run(stages)


def cmd_equiv(args: argparse.Namespace) -> Report:
    """
    Certifica la para-equivalencia (unilateral si no hay acción derecha),
    construye (X/G)⋈H ~ G⋈(H\\X) y compara las álgebras de convolución
    """
    ws, digest = _load(args.file)
    left = _block(ws, args.left, "left-action")
    right = (_block(ws, args.right, "right-action") if args.right
             else trivial_group_right_action(left.X))
    job = CheckJobManager("equiv", digest)
    state: Dict[str, Any] = {}

    def para() -> Any:
        state["para"] = certify_para_equivalence(left, right)
        return state["para"].report

    def witness() -> Any:
        state["w"] = build_equivalence(state["para"])
        return verify_equivalence(state["w"])

    def algebra() -> Any:
        w = state["w"]
        a, c = algebra_summary(w.A.base), algebra_summary(w.C.base)
        job.add_data("A", a.model_dump(mode="json"))
        job.add_data("C", c.model_dump(mode="json"))
        if not (a.principal and c.principal):
            return skipped("morita-compatible", "algún grupoide no es principal")
        return run_check("morita-compatible", [(a.source, c.source)], lambda _: morita_compatible(a, c))

    return job.run([("para", para), ("equivalence", witness), ("algebra", algebra)])


def cmd_fell(args: argparse.Namespace) -> Report:
    """
    Sistema de Fell certificado y verificación del bimódulo de imprimitividad
    """
    ws, digest = _load(args.file)
    left = _block(ws, args.left, "fell-action")
    if not isinstance(left, FellLeftAction):
        raise UsageError(f"{args.left} no es una acción izquierda sobre un fibrado")
    right = _block(ws, args.right, "fell-action") if args.right else None
    if right is not None and not isinstance(right, FellRightAction):
        raise UsageError(f"{args.right} no es una acción derecha sobre un fibrado")
    job = CheckJobManager("fell", digest)
    state: Dict[str, Any] = {}

    def system() -> Any:
        if right is None:
            state["system"] = one_sided_fell_system(left)
        else:
            para = certify_para_equivalence(left.action, right.action)
            state["system"] = certify_fell_system(para, left, right)
        return state["system"].report

    def bimodule() -> Any:
        w = build_bimodule(state["system"])
        job.add_data("A", {"name": w.A_bundle.base.name, "size": w.A_bundle.base.size})
        job.add_data("C", {"name": w.C_bundle.base.name, "size": w.C_bundle.base.size})
        return verify_bimodule(w)

    return job.run([("system", system), ("bimodule", bimodule)])


def cmd_algebra(args: argparse.Namespace) -> Report:
    """
    Resumen de bloques del álgebra de convolución y unidades matriciales
    """
    ws, digest = _load(args.file)
    g = _block(ws, args.groupoid, "groupoid")
    job = CheckJobManager("algebra", digest)
    summary = algebra_summary(g)
    job.add_data("summary", summary.model_dump(mode="json"))

    def units() -> Any:
        if not summary.principal:
            return skipped("matrix-units", "grupoide no principal")
        return verify_matrix_units(g)

    return job.run([("groupoid", partial(validate_groupoid, g)), ("matrix-units", units)])


def cmd_dr(args: argparse.Namespace) -> Report:
    """
    Sistema *-conmutativo, grupoide con ventana y testigo de periodicidad
    """
    ws, digest = _load(args.file)
    sys_ = _block(ws, args.system, "dr-system")
    window = ws.windows[args.system]
    job = CheckJobManager("dr", digest)

    def windowed() -> Any:
        dr = dr_groupoid(sys_, window)
        job.add_data("groupoid", {"name": dr.groupoid.name, "size": dr.groupoid.size, "window": window,
                                  "closed": dr.closed, "excluded": len(dr.excluded)})
        return None

    def periodicity() -> CheckResult:
        result = dr_freeness(sys_, window)
        job.add_data("freeness", result.model_dump(mode="json"))
        return CheckResult(check="periodicity-witness", status=CheckStatus.PASS, witness=result.witness,
                           counts=result.counts, detail=result.detail)

    return job.run([("star-commuting", partial(check_star_commuting, sys_)), ("groupoid", windowed),
                    ("freeness", periodicity)])


def cmd_example(args: argparse.Namespace) -> Report:
    """
    Escribe un ejemplo del registro como documento `.gpd` (o lo lista)
    """
    if args.name not in EXAMPLES:
        raise UsageError(f"ejemplo desconocido {args.name!r}; disponibles: {', '.join(EXAMPLES)}")
    doc = example_document(args.name)
    text = print_document(doc)
    job = CheckJobManager("example")
    job.add_data("example", args.name)
    job.add_data("description", EXAMPLES[args.name].description)
    job.add_data("blocks", [{"kind": b.kind, "name": b.name} for b in doc.blocks])
    if args.emit:
        Path(args.emit).write_text(text, encoding="utf-8")
        job.add_data("path", str(args.emit))
        logger.info(f"💾 Ejemplo {args.name} escrito en {args.emit}")
    else:
        job.add_data("document", text)
    report = job.run([])
    report.input_digest = hashlib.md5(text.encode("utf-8")).hexdigest()
    return report


COMMANDS: Dict[str, Callable[[argparse.Namespace], Report]] = {
    "check": cmd_check,
    "product": cmd_product,
    "quotient": cmd_quotient,
    "equiv": cmd_equiv,
    "fell": cmd_fell,
    "algebra": cmd_algebra,
    "dr": cmd_dr,
    "example": cmd_example,
}


def _error_report(command: str, e: GpdkitError) -> Report:
    error: Dict[str, Any] = {"type": type(e).__name__, "message": str(e)}
    if isinstance(e, DslError):
        error.update({"kind": e.kind, "line": e.line, "col": e.col, "message": e.message})
    return Report(tool_version=__version__, command=command, ok=False, data={"error": error})


def run(command: str, args: argparse.Namespace) -> Tuple[int, Report]:
    """
    Despacha un verbo. 0 si todas las verificaciones pasan, 1 si alguna
    falla, 2 ante errores de uso o del documento de entrada.
    """
    if command not in COMMANDS:
        return EXIT_USAGE, _error_report(command, UsageError(f"verbo desconocido {command!r}"))
    try:
        report = COMMANDS[command](args)
    except (DslError, UsageError) as e:
        logger.error(f"Error de entrada en {command}: {e}")
        return EXIT_USAGE, _error_report(command, e)
    except Exception as e:
        logger.error(f"Error ejecutando {command}: {str(e)}")
        raise
    return (EXIT_OK if report.ok else EXIT_FAILED), report


def _round(value: Any, digits: int) -> Any:
    if isinstance(value, float):
        return float(f"{value:.{digits}g}") if math.isfinite(value) else value
    if isinstance(value, dict):
        return {k: _round(v, digits) for k, v in value.items()}
    if isinstance(value, list):
        return [_round(v, digits) for v in value]
    return value


def dump_report(report: Report) -> bytes:
    """JSON con el orden de declaración de los campos y flotantes redondeados"""
    payload = _round(report.model_dump(mode="json"), get_settings().float_digits)
    return orjson.dumps(payload, option=orjson.OPT_INDENT_2)
