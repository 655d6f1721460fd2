import argparse
import logging
import os
import sys
from typing import List, Optional

from loguru import logger

from .api import COMMANDS, dump_report, run
from .config import get_settings


class InterceptHandler(logging.Handler):
    """Redirige los registros de logging estándar hacia loguru"""

    def emit(self, record: logging.LogRecord) -> None:
        try:
            level = logger.level(record.levelname).name
        except ValueError:
            level = record.levelno
        frame, depth = logging.currentframe(), 2
        while frame and frame.f_code.co_filename == logging.__file__:
            frame = frame.f_back
            depth += 1
        logger.opt(depth=depth, exception=record.exc_info).log(level, record.getMessage())


def configure_logging(level: str) -> None:
    """
    Un único sumidero en stderr; stdout queda reservado para el reporte JSON
    """
    logger.remove()
    logger.add(sys.stderr, level=level,
               format="<green>{time:HH:mm:ss}</green> - {name} - <level>{level}</level> - {message}")
    logging.basicConfig(handlers=[InterceptHandler()], level=0, force=True)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gpdkit", description="Verificador de grupoides, acciones autosimilares "
                                                            "y fibrados de Fell finitos")
    noise = ap.add_mutually_exclusive_group()
    noise.add_argument("--verbose", action="store_true", help="Registro en nivel DEBUG")
    noise.add_argument("--quiet", action="store_true", help="Sólo advertencias y errores")
    ap.add_argument("--threads", type=int, default=None, help="Máximo de hilos por verificador")
    sub = ap.add_subparsers(dest="cmd", required=True)

    c = sub.add_parser("check", help="Valida cada bloque del documento")
    c.add_argument("file")

    for verb, help_ in (("product", "Producto de Zappa–Szép de una acción"),
                        ("quotient", "Grupoide de órbitas de una acción libre")):
        p = sub.add_parser(verb, help=help_)
        p.add_argument("file")
        p.add_argument("action")

    e = sub.add_parser("equiv", help="Certifica la para-equivalencia y la equivalencia de grupoides")
    e.add_argument("file")
    e.add_argument("left")
    e.add_argument("right", nargs="?", default=None)

    f = sub.add_parser("fell", help="Sistema de Fell y bimódulo de imprimitividad")
    f.add_argument("file")
    f.add_argument("left")
    f.add_argument("right", nargs="?", default=None)

    a = sub.add_parser("algebra", help="Bloques del álgebra de convolución")
    a.add_argument("file")
    a.add_argument("groupoid")

    d = sub.add_parser("dr", help="Sistema de Deaconu–Renault")
    d.add_argument("file")
    d.add_argument("system")

    x = sub.add_parser("example", help="Documento de un ejemplo incorporado")
    x.add_argument("name")
    x.add_argument("--emit", default=None, help="Ruta donde escribir el documento .gpd")
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if args.threads is not None:
        if args.threads < 1:
            sys.stderr.write("gpdkit: --threads debe ser al menos 1\n")
            return 2
        os.environ["GPDKIT_THREADS"] = str(args.threads)
        get_settings.cache_clear()
    level = "DEBUG" if args.verbose else "WARNING" if args.quiet else get_settings().log_level
    configure_logging(level)
    logger.debug(f"🚀 gpdkit {args.cmd} ({', '.join(sorted(COMMANDS))})")

    code, report = run(args.cmd, args)
    sys.stdout.write(dump_report(report).decode("utf-8") + "\n")
    sys.stdout.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
