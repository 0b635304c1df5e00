from __future__ import annotations
import argparse
import logging
import os
import sys
from typing import List, Optional

from pydantic import ValidationError

from .config import Config
from .errors import (BothFailed, DegreeTooLarge, InvalidExperimentSpec, InvalidFamilySpec, PolyraceError,
                     UnsupportedEvalMode)
from .families import FAMILY_GRAMMAR, SHORT_NAMES, default_degrees, parse_degrees, parse_family_spec
from .harness import HULL_C_VALUES, ExperimentSpec, Runner

"""
CLI de polyrace

    python -m polyrace solve --family iterquad:c=0+1i,n=8 --method race
    python -m polyrace bench --family cheb --degrees 2^4..2^10 --methods newton,aberth --out data/results/cheb.csv
    python -m polyrace families
    python -m polyrace hull --family randdisk:d=64,seed=7

Códigos de salida: 0 éxito, 2 alguna corrida sin todas sus raíces, 3 especificación inválida.
"""

logger = logging.getLogger("polyrace")

EXIT_OK = 0
EXIT_UNMATCHED = 2
EXIT_INVALID_SPEC = 3

SPEC_ERRORS = (InvalidFamilySpec, InvalidExperimentSpec, UnsupportedEvalMode, DegreeTooLarge, ValidationError)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polyrace",
                                     description="Newton con refinamiento iterado vs Ehrlich–Aberth, contando operaciones")
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="resuelve un polinomio de una familia")
    solve.add_argument("--family", required=True, help="p.ej. iterquad:c=0+1i,n=8")
    solve.add_argument("--method", default="newton", choices=["newton", "aberth", "hybrid", "race", "newton_then_ea"])
    _common_options(solve)
    solve.add_argument("--json", action="store_true", help="imprime el SolveReport como JSON")

    bench = sub.add_parser("bench", help="barre grados × métodos y escribe el CSV")
    bench.add_argument("--family", required=True)
    bench.add_argument("--degrees", default=None, help="p.ej. 2^4..2^12 o 4..10 (default: barrido de la familia)")
    bench.add_argument("--methods", default="newton,aberth")
    _common_options(bench)
    bench.add_argument("--out", default=None, help="ruta del CSV (default: <POLYRACE_OUT_DIR>/<familia>.csv)")

    sub.add_parser("families", help="muestra la gramática de familias")

    hull = sub.add_parser("hull", help="experimento de la cápsula convexa con ⌈c·d⌉ puntos")
    hull.add_argument("--family", required=True)
    hull.add_argument("--c", default=",".join(str(c) for c in HULL_C_VALUES))
    hull.add_argument("--seed", type=int, default=None)
    hull.add_argument("--json", action="store_true")
    return parser


def _common_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--eval", dest="eval_mode", choices=["fast", "slow"], default=None)
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--seed", type=int, default=None)


def _family(args: argparse.Namespace):
    spec = parse_family_spec(args.family)
    update = {}
    if getattr(args, "eval_mode", None):
        update["eval_mode"] = args.eval_mode
    if args.seed is not None:
        update["seed"] = args.seed
    return spec.model_copy(update=update) if update else spec


def _config(args: argparse.Namespace) -> Config:
    cfg = Config.from_env()
    if getattr(args, "eps", None) is not None:
        cfg.eps = args.eps
    if getattr(args, "delta", None) is not None:
        cfg.delta = args.delta
    if args.seed is not None:
        cfg.seed = args.seed
    if cfg.eps >= cfg.delta:
        raise InvalidExperimentSpec("eps debe ser menor que delta")
    return cfg


# ----------- Subcomandos -----------
def cmd_solve(args: argparse.Namespace) -> int:
    cfg = _config(args)
    runner = Runner(cfg)
    report = runner.solve(_family(args), args.method)
    if args.json:
        print(report.model_dump_json(indent=2))
    else:
        print(f"método={report.method} grado={report.degree} ops={report.total_ops} "
              f"(adds={report.real_adds}, muls={report.real_muls}) iters={report.iterations}")
        print(f"raíces={report.roots_found}/{report.expected_roots} matched={report.matched} "
              f"max_residual={report.max_residual:.3e} stop={report.stop_reason}")
        if report.winner:
            print(f"ganador={report.winner}")
    return EXIT_OK if report.matched else EXIT_UNMATCHED


def cmd_bench(args: argparse.Namespace) -> int:
    cfg = _config(args)
    family = _family(args)
    degrees = parse_degrees(args.degrees) if args.degrees else default_degrees(family.family)
    out = args.out or os.path.join(cfg.out_dir, f"{SHORT_NAMES[family.family]}.csv")
    spec = ExperimentSpec(family=family, degrees=degrees, methods=args.methods, eval_mode=args.eval_mode,
                          seed=args.seed, eps=args.eps, delta=args.delta, out_path=out)

    runner = Runner(cfg)
    runner.run_experiment(spec)
    runner.print_slopes(spec.methods)
    runner.print_summary()
    unmatched = runner.stats["unmatched"] + runner.stats["failed"]
    return EXIT_UNMATCHED if unmatched else EXIT_OK


def cmd_hull(args: argparse.Namespace) -> int:
    cfg = _config(args)
    try:
        c_values = [float(c) for c in args.c.split(",") if c.strip()]
    except ValueError as exc:
        raise InvalidExperimentSpec(f"Valores de c inválidos: {args.c!r}") from exc
    report = Runner(cfg).hull(_family(args), c_values)
    if args.json:
        print(report.model_dump_json(indent=2))
        return EXIT_OK
    print(f"=== HULL {report.family} d={report.degree} ===")
    for row in report.rows:
        print(f"c={row.c:<4} puntos={row.starts:<6} borde={row.covered}/{row.boundary_roots} "
              f"({row.coverage:.0%}) ops={row.real_adds + row.real_muls}")
    print(f"c mínimo con cobertura total: {report.min_c}")
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    """
    Punto de entrada de la CLI:
    1) Parsea los argumentos y configura el logging.
    2) Ejecuta el subcomando.
    3) Traduce los errores de especificación al código de salida 3.
    """
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=os.getenv("POLYRACE_LOG_LEVEL", "WARNING").upper(),
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s")

    if args.command == "families":
        print(FAMILY_GRAMMAR)
        return EXIT_OK
    try:
        if args.command == "solve":
            return cmd_solve(args)
        if args.command == "bench":
            return cmd_bench(args)
        return cmd_hull(args)
    except SPEC_ERRORS as exc:
        print(f"Especificación inválida: {exc}", file=sys.stderr)
        return EXIT_INVALID_SPEC
    except BothFailed as exc:
        print(f"race: {exc}", file=sys.stderr)
        return EXIT_UNMATCHED
    except PolyraceError as exc:
        logger.error("%s: %s", type(exc).__name__, exc)
        return EXIT_UNMATCHED


# Permite que el módulo se ejecute con "python -m polyrace.main"
if __name__ == "__main__":
    sys.exit(main())
