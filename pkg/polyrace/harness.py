from __future__ import annotations
import logging
import math
import time
from dataclasses import replace
from typing import Dict, Generator, List, Literal, Optional, Sequence

import numpy as np
from pydantic import BaseModel, Field, field_validator
from scipy.spatial import ConvexHull, QhullError

from .aberth_solver import AberthConfig, ea_postprocess, iter_aberth, run_aberth
from .config import Config
from .errors import BothFailed, InsufficientData, InvalidExperimentSpec, PolyraceError
from .families import (FamilySpec, family_degree, family_label, make_family, resolved_eval_mode, root_bound,
                       with_degree)
from .matching import a_posteriori_check, match_roots
from .newton_solver import (NewtonConfig, NewtonReport, iter_refinement, run_iterated_refinement,
                            run_plain_newton, starting_points)
from .numeric_core import OpCounter
from .polynomials import PolyRepr, degree
from .reports import BenchRow, SolveReport, emit_csv, to_row

"""
Runner de experimentos de polyrace

Este módulo orquesta las corridas: arma el polinomio de cada familia, resuelve
con el método pedido, verifica las raíces y acumula las filas del CSV.

Métodos
-------
- `newton`: refinamiento iterado.
- `aberth`: Ehrlich–Aberth (modo reference si la familia tiene raíces conocidas).
- `hybrid`: Newton y, si faltan raíces, post-proceso Ehrlich–Aberth sobre lo encontrado.
- `race`: Newton y Ehrlich–Aberth alternando tajadas iguales de operaciones;
  gana el primero que termina con éxito verificado.

Interfaz principal
------------------
- `Runner.solve(...)`, `Runner.run_experiment(...)`, `Runner.print_summary()`.
- `fit_loglog`, `race`, `convex_hull_experiment`, `convergence_order`.
"""

logger = logging.getLogger(__name__)

Method = Literal["newton", "aberth", "hybrid", "race"]
METHOD_ALIASES = {"newton_then_ea": "hybrid", "ea": "aberth"}
HULL_C_VALUES = (1.0, 1.5, 2.0, 2.6, 3.0)


# ----------- Definición de clases -----------
class ExperimentSpec(BaseModel):
    """Barrido método × grado sobre una familia."""
    family: FamilySpec
    degrees: List[int] = Field(min_length=1)
    methods: List[Method] = Field(default_factory=lambda: ["newton", "aberth"], min_length=1)
    eval_mode: Optional[Literal["fast", "slow"]] = None
    seed: Optional[int] = Field(default=None, ge=0)
    eps: Optional[float] = Field(default=None, gt=0.0)
    delta: Optional[float] = Field(default=None, gt=0.0)
    out_path: Optional[str] = None

    @field_validator("methods", mode="before")
    @classmethod
    def _aliases(cls, value):
        if isinstance(value, str):
            value = [m.strip() for m in value.split(",") if m.strip()]
        return [METHOD_ALIASES.get(m, m) for m in value]

    @field_validator("degrees")
    @classmethod
    def _positive(cls, value: List[int]) -> List[int]:
        if any(v < 1 for v in value):
            raise ValueError("Los grados deben ser >= 1")
        return value


class LogLogFit(BaseModel):
    slope: float
    intercept: float
    r2: float
    points: int


class HullRow(BaseModel):
    c: float
    starts: int
    boundary_roots: int
    covered: int
    coverage: float
    real_adds: int
    real_muls: int


class HullReport(BaseModel):
    family: str
    degree: int
    rows: List[HullRow]
    min_c: Optional[float]


# ----------- Verificación y conversión -----------
def newton_to_report(nrep: NewtonReport, reference: Optional[Sequence[complex]], delta: float,
                     method: str = "newton") -> SolveReport:
    """Verifica las raíces de Newton (reference o a posteriori) y arma el `SolveReport`."""
    d = nrep.degree
    roots = nrep.root_values
    if reference:
        result = match_roots(roots, reference, delta)
        matched, found, missed = result.success, len(result.pairs), result.missed
    else:
        matched = a_posteriori_check(roots, [r.residual for r in nrep.roots], d, delta)
        found = min(len(roots), d)
        missed = d - found
    if nrep.orbit_budget_exceeded:
        stop = "orbit_budget"
    elif nrep.max_steps_reached:
        stop = "max_steps"
    else:
        stop = "complete" if len(roots) >= d else "no_active_orbits"
    return SolveReport(
        method=method,
        degree=d,
        expected_roots=d,
        real_adds=nrep.real_adds,
        real_muls=nrep.real_muls,
        iterations=nrep.global_steps,
        roots_found=found,
        max_residual=nrep.max_residual,
        matched=matched,
        missed=0 if matched else missed,
        roots=roots,
        stop_reason=stop,
    )


def _failed_report(method: str, d: int, exc: Exception) -> SolveReport:
    return SolveReport(method=method, degree=d, expected_roots=d, matched=False, missed=d,
                       stop_reason="error", error=f"{type(exc).__name__}: {exc}")


# ----------- Operaciones del harness -----------
def fit_loglog(rows: Sequence) -> LogLogFit:
    """
    Ajuste por mínimos cuadrados de log2(ops totales) contra log2(grado),
    usando solo filas matched con ops > 0. Necesita al menos 3 filas.
    """
    usable = [r for r in rows if r.matched and r.total_ops > 0 and r.degree > 0]
    if len(usable) < 3:
        raise InsufficientData(f"Se necesitan >= 3 filas válidas, hay {len(usable)}")
    x = np.log2([float(r.degree) for r in usable])
    y = np.log2([float(r.total_ops) for r in usable])
    if np.ptp(x) == 0:
        raise InsufficientData("Todas las filas tienen el mismo grado")
    slope, intercept = np.polyfit(x, y, 1)
    fitted = slope * x + intercept
    ss_res = float(np.sum((y - fitted) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    return LogLogFit(slope=float(slope), intercept=float(intercept), r2=r2, points=len(usable))


def convergence_order(errors: Sequence[float]) -> list[float]:
    """Órdenes empíricos log|e_{t+1}| / log|e_t| (se saltean errores nulos o >= 1)."""
    orders = []
    for e0, e1 in zip(errors, errors[1:]):
        if 0.0 < e0 < 1.0 and 0.0 < e1 < 1.0:
            orders.append(math.log(e1) / math.log(e0))
    return orders


def _advance_until(gen: Generator, ctx: OpCounter, target: int):
    """Avanza el generador hasta gastar `target` ops; devuelve el reporte si terminó."""
    try:
        while ctx.total < target:
            next(gen)
    except StopIteration as stop:
        return stop.value
    return None


def race(poly: PolyRepr, newton_cfg: NewtonConfig, aberth_cfg: AberthConfig, budget_step: int,
         reference: Optional[Sequence[complex]] = None) -> SolveReport:
    """
    Corre Newton y Ehrlich–Aberth alternando tajadas de `budget_step`
    operaciones (cada uno con su contador, suspendido entre pasos/barridos).
    Gana el primero que termina con éxito verificado; el reporte lleva la
    suma de operaciones de ambos. Levanta `BothFailed` si ninguno lo logra.
    """
    if budget_step < 1:
        raise InvalidExperimentSpec("budget_step debe ser >= 1")
    ctxs = {"newton": OpCounter(), "aberth": OpCounter()}
    gens = {
        "newton": iter_refinement(ctxs["newton"], poly, newton_cfg),
        "aberth": iter_aberth(ctxs["aberth"], poly, aberth_cfg),
    }
    finished: Dict[str, SolveReport] = {}
    winner: Optional[str] = None

    while winner is None and len(finished) < 2:
        for name in ("newton", "aberth"):
            if name in finished:
                continue
            target = ctxs[name].total + budget_step
            result = _advance_until(gens[name], ctxs[name], target)
            if result is None:
                continue
            if isinstance(result, NewtonReport):
                result = newton_to_report(result, reference, newton_cfg.sep_delta)
            finished[name] = result
            logger.debug("race: %s terminó (matched=%s, ops=%d)", name, result.matched, result.total_ops)
            if result.matched:
                winner = name
                break

    if winner is None:
        raise BothFailed("Ni Newton ni Ehrlich–Aberth verificaron todas las raíces")
    best = finished[winner]
    total_adds = sum(c.real_adds for c in ctxs.values())
    total_muls = sum(c.real_muls for c in ctxs.values())
    return best.model_copy(update={"method": "race", "winner": winner,
                                   "real_adds": total_adds, "real_muls": total_muls})


def hull_boundary(roots: Sequence[complex], tol: float = 1e-12) -> list[int]:
    """
    Índices de las raíces sobre el borde de su cápsula convexa (vértices y
    puntos sobre aristas). Si la cápsula es degenerada todas cuentan.
    """
    pts = np.column_stack([np.real(roots), np.imag(roots)])
    if len(pts) < 3:
        return list(range(len(pts)))
    try:
        hull = ConvexHull(pts)
    except QhullError:
        return list(range(len(pts)))
    scale = max(1.0, float(np.max(np.abs(pts))))
    # equations: normal·x + offset <= 0 dentro; = 0 sobre la faceta
    dist = pts @ hull.equations[:, :2].T + hull.equations[:, 2]
    return [i for i in range(len(pts)) if np.max(dist[i]) >= -tol * scale]


def convex_hull_experiment(poly: PolyRepr, reference: Sequence[complex], newton_cfg: NewtonConfig,
                           c_values: Sequence[float] = HULL_C_VALUES, label: str = "") -> HullReport:
    """
    Newton sin refinamiento desde ⌈c·d⌉ puntos del círculo, para cada c.
    Informa cuántas raíces del borde de la cápsula convexa fueron alcanzadas
    por alguna órbita y el menor c que las cubre todas.
    """
    d = degree(poly)
    if len(reference) != d:
        raise InvalidExperimentSpec("El experimento necesita todas las raíces de referencia")
    boundary = [reference[i] for i in hull_boundary(reference)]
    rows = []
    for c in sorted(c_values):
        count = max(1, math.ceil(c * d))
        ctx = OpCounter()
        starts = starting_points(d, newton_cfg.start_radius, count)
        nrep = run_plain_newton(ctx, poly, starts, newton_cfg)
        result = match_roots(nrep.root_values, boundary, newton_cfg.sep_delta)
        covered = len(result.pairs)
        rows.append(HullRow(c=c, starts=count, boundary_roots=len(boundary), covered=covered,
                            coverage=covered / len(boundary) if boundary else 1.0,
                            real_adds=ctx.real_adds, real_muls=ctx.real_muls))
    min_c = next((r.c for r in rows if r.covered == r.boundary_roots), None)
    return HullReport(family=label, degree=d, rows=rows, min_c=min_c)


# ----------- Runner -----------
class Runner:
    """
    Ejecuta corridas y barridos de experimentos:
    - `solve` resuelve una familia con un método y verifica el resultado.
    - `run_experiment` barre grados × métodos; una corrida que falla queda
      registrada con matched=False y el barrido sigue.
    - `print_summary` muestra las métricas acumuladas.
    """

    def __init__(self, cfg: Config) -> None:
        self.cfg = cfg
        self.rows: List[BenchRow] = []

        # Diccionario de métricas acumuladas
        self.stats: Dict[str, int] = {
            "runs": 0,  # corridas intentadas
            "matched": 0,  # corridas con todas las raíces verificadas
            "unmatched": 0,  # corridas terminadas sin verificar todas las raíces
            "failed": 0,  # corridas abortadas por un error
        }

    def solve(self, family: FamilySpec, method: str, cfg: Optional[Config] = None) -> SolveReport:
        cfg = cfg or self.cfg
        method = METHOD_ALIASES.get(method, method)
        poly, ref = make_family(family)
        reference = list(ref.roots) if ref.roots is not None else None
        bound = root_bound(family)
        ncfg = cfg.newton_config(bound)
        acfg = cfg.aberth_config(bound, reference)

        start = time.perf_counter()
        if method == "newton":
            report = newton_to_report(run_iterated_refinement(OpCounter(), poly, ncfg), reference, cfg.delta)
        elif method == "aberth":
            report = run_aberth(OpCounter(), poly, acfg)
        elif method == "hybrid":
            report = self._hybrid(poly, ncfg, acfg, reference)
        elif method == "race":
            report = race(poly, ncfg, acfg, cfg.race_budget, reference)
        else:
            raise InvalidExperimentSpec(f"Método desconocido: {method!r}")
        wall_ms = (time.perf_counter() - start) * 1000.0 if cfg.record_wall_time else 0.0
        return report.model_copy(update={"wall_ms": wall_ms})

    @staticmethod
    def _hybrid(poly: PolyRepr, ncfg: NewtonConfig, acfg: AberthConfig,
                reference: Optional[list[complex]]) -> SolveReport:
        """Newton primero; si faltan raíces, Ehrlich–Aberth sobre lo encontrado (mismo contador)."""
        ctx = OpCounter()
        nrep = run_iterated_refinement(ctx, poly, ncfg)
        first = newton_to_report(nrep, reference, ncfg.sep_delta, method="hybrid")
        if first.matched:
            return first
        found = nrep.root_values[:nrep.degree]
        report = ea_postprocess(ctx, poly, found, acfg)
        return report.model_copy(update={"method": "hybrid",
                                         "iterations": nrep.global_steps + report.iterations})

    def run_experiment(self, spec: ExperimentSpec) -> list[SolveReport]:
        """
        Para cada grado y método: arma el polinomio, resuelve, verifica y
        agrega una fila. Si `spec.out_path` está definido escribe el CSV.
        """
        cfg = self.cfg
        overrides = {k: v for k, v in (("seed", spec.seed), ("eps", spec.eps), ("delta", spec.delta)) if v is not None}
        if overrides:
            cfg = replace(cfg, **overrides)
        family = spec.family
        if spec.eval_mode is not None:
            family = family.model_copy(update={"eval_mode": spec.eval_mode})
        if spec.seed is not None:
            family = family.model_copy(update={"seed": spec.seed})

        label = family_label(family)
        mode = resolved_eval_mode(family)
        print(f"=== {label} ({mode}) grados={spec.degrees} métodos={','.join(spec.methods)} ===")
        reports, rows = [], []
        for param in spec.degrees:
            fam = with_degree(family, param)
            for method in spec.methods:
                self.stats["runs"] += 1
                try:
                    report = self.solve(fam, method, cfg)
                except (PolyraceError, ArithmeticError) as exc:
                    logger.warning("%s n=%d %s falló: %s", label, param, method, exc)
                    self.stats["failed"] += 1
                    report = _failed_report(method, self._safe_degree(fam), exc)
                except Exception as exc:
                    logger.exception("%s n=%d %s: error inesperado", label, param, method)
                    self.stats["failed"] += 1
                    report = _failed_report(method, self._safe_degree(fam), exc)
                else:
                    self.stats["matched" if report.matched else "unmatched"] += 1
                print(f"{label} d={report.degree:<6} {method:<7} ops={report.total_ops:<12} "
                      f"iters={report.iterations:<6} raíces={report.roots_found}/{report.expected_roots} "
                      f"matched={report.matched}")
                reports.append(report)
                rows.append(to_row(report, family=label, eval_mode=mode, seed=family.seed))

        self.rows.extend(rows)
        if spec.out_path:
            emit_csv(rows, spec.out_path)
            print(f"CSV guardado en: {spec.out_path}")
        return reports

    @staticmethod
    def _safe_degree(family: FamilySpec) -> int:
        try:
            return family_degree(family)
        except PolyraceError:
            return 0

    def hull(self, family: FamilySpec, c_values: Sequence[float] = HULL_C_VALUES) -> HullReport:
        poly, ref = make_family(family)
        if ref.roots is None:
            raise InvalidExperimentSpec(f"La familia {family.family} no tiene raíces de referencia")
        ncfg = self.cfg.newton_config(root_bound(family))
        return convex_hull_experiment(poly, list(ref.roots), ncfg, c_values, label=family_label(family))

    def print_slopes(self, methods: Sequence[str], eval_mode: Optional[str] = None) -> Dict[str, LogLogFit]:
        """Ajuste log-log por método sobre las filas acumuladas; los métodos sin datos se saltean."""
        fits = {}
        for method in methods:
            rows = [r for r in self.rows if r.method == method and (eval_mode is None or r.eval_mode == eval_mode)]
            try:
                fit = fit_loglog(rows)
            except InsufficientData as exc:
                logger.info("Sin ajuste log-log para %s: %s", method, exc)
                continue
            fits[method] = fit
            mode = f" ({eval_mode})" if eval_mode else ""
            print(f"pendiente log-log {method}{mode}: {fit.slope:.3f} (r²={fit.r2:.4f}, {fit.points} puntos)")
        return fits

    def print_summary(self) -> None:
        """Imprime métricas simples al final de la corrida."""
        s = self.stats
        print("\n=== POLYRACE SUMMARY ===")
        print(f"runs:       {s['runs']}")
        print(f"matched:    {s['matched']}")
        print(f"unmatched:  {s['unmatched']}")
        print(f"failed:     {s['failed']}")
        print("========================\n")
