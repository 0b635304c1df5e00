from __future__ import annotations
import cmath
import logging
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Generator, List, Literal, Optional

from pydantic import BaseModel, Field, model_validator

from .errors import CoordinateCollision, DerivativeZero, MaxSweepsExceeded, NumericError, ZeroDenominator
from .matching import RESIDUAL_TOL, RootCollector, a_posteriori_check, match_roots
from .numeric_core import Complex, OpCounter, modulus, recip
from .polynomials import PolyRepr, degree, newton_ratio
from .reports import SolveReport

"""
Método de Ehrlich–Aberth

Iteración simultánea sobre el vector (z_1, ..., z_d):

    z'_k = z_k - 1 / (p'(z_k)/p(z_k) - Σ_{i≠k} 1/(z_k - z_i))

(forma "electrostática": las raíces atraen, las demás aproximaciones repelen).
Cada barrido actualiza todas las coordenadas, en estilo Jacobi (usa solo el
vector previo) o Gauss–Seidel (usa cada coordenada nueva en cuanto existe, en
orden ascendente de índice).

Modos de parada
---------------
- step_size: max_k |z'_k - z_k| < ε
- residual: max_k |p(z_k)/p'(z_k)| < ε
- reference: `match_roots` contra raíces conocidas con tolerancia δ

En step_size y residual también se para cuando el máximo ya está por debajo de
δ·1e-3 y dejó de bajar a la mitad (piso de ruido del doble).
En step_size, residual y piso de ruido el barrido que dispara la parada solo
confirma que el vector previo ya había convergido: `iterations` cuenta los
barridos hasta ese vector (grado 1: un barrido; raíces exactas: cero). El
costo del barrido de confirmación se cobra igual.
"""

logger = logging.getLogger(__name__)

NOISE_FLOOR_FACTOR = 1e-3
SUSPICIOUS_SUM = 1e250
CONFIRMING_STOPS = ("step_size", "residual", "noise_floor")


# ----------- Definición de clases -----------
class AberthConfig(BaseModel):
    """Configuración de una corrida de Ehrlich–Aberth."""
    style: Literal["jacobi", "gauss_seidel"] = "gauss_seidel"
    start_radius: float = Field(default=1.1, gt=0.0)
    max_sweeps: int = Field(default=500, ge=1)
    stop_mode: Literal["step_size", "reference", "residual"] = "step_size"
    eps: float = Field(default=1e-13, gt=0.0)
    delta: float = Field(default=1e-8, gt=0.0)
    reference: Optional[List[complex]] = None
    collision_eps: Optional[float] = Field(default=None, gt=0.0)
    start_vector: Optional[List[complex]] = None
    phase: Optional[float] = None
    cycle_window: int = Field(default=0, ge=0)

    @model_validator(mode="after")
    def _reference_needed(self) -> "AberthConfig":
        if self.stop_mode == "reference" and not self.reference:
            raise ValueError("stop_mode='reference' necesita raíces de referencia")
        return self

    @property
    def effective_collision_eps(self) -> float:
        return self.collision_eps if self.collision_eps is not None else 1e-12 * self.start_radius


@dataclass
class AberthState:
    z: List[Complex]
    sweep: int = 0
    converged_mask: List[bool] = field(default_factory=list)
    max_step: float = math.inf
    max_ratio: float = math.inf
    held: int = 0
    collisions: int = 0


# ----------- Corrección y barrido -----------
def _correction(ctx: OpCounter, poly: PolyRepr, zvec: List[Complex], k: int,
                collision_eps: float = 0.0) -> tuple[Complex, float]:
    """Devuelve (z'_k, |p(z_k)/p'(z_k)|)."""
    zk = zvec[k]
    try:
        r = newton_ratio(ctx, poly, zk)
        if r == 0:
            return zk, 0.0
        logderiv = recip(ctx, r)
        ratio_size = modulus(ctx, r)
    except DerivativeZero:
        # p'(z_k) = 0: la carga propia no aporta, solo repelen las demás
        logderiv, ratio_size = 0j, math.inf

    total = 0j
    for i, zi in enumerate(zvec):
        if i == k:
            continue
        diff = zk - zi
        if diff == 0:
            raise CoordinateCollision(k, i)
        total += 1.0 / diff
    others = len(zvec) - 1
    ctx.charge(cadd=2 * others, crecip=others)
    if abs(total) > SUSPICIOUS_SUM or (collision_eps > 0.0 and abs(total) > 1.0 / collision_eps):
        for i, zi in enumerate(zvec):
            if i != k and abs(zk - zi) < collision_eps:
                raise CoordinateCollision(k, i)

    den = logderiv - total
    if den == 0:
        raise ZeroDenominator(f"Carga neta nula en la coordenada {k}")
    ctx.charge(cadd=2)
    return zk - recip(ctx, den), ratio_size


def aberth_correction(ctx: OpCounter, poly: PolyRepr, zvec: List[Complex], k: int,
                      collision_eps: float = 0.0) -> Complex:
    """
    z'_k en forma electrostática. Si p(z_k) = 0 devuelve z_k sin cambios.
    Levanta `CoordinateCollision` si z_k coincide con otra coordenada y
    `ZeroDenominator` si la carga neta es cero.
    """
    return _correction(ctx, poly, zvec, k, collision_eps)[0]


def aberth_sweep(ctx: OpCounter, poly: PolyRepr, state: AberthState, style: str,
                 collision_eps: float = 0.0, eps: float = 0.0) -> AberthState:
    """
    Un barrido completo. Todas las coordenadas se actualizan aunque ya hayan
    convergido individualmente. Colisiones: z_k se desplaza en
    collision_eps·e^{ik}, o en ±collision_eps si el vector es real (el
    desplazamiento no saca al vector de la recta real); denominador nulo: la
    coordenada se mantiene.
    """
    old = list(state.z)
    work = list(state.z)
    source = old if style == "jacobi" else work
    max_step = 0.0
    max_ratio = 0.0
    held = collisions = 0
    mask = []
    real_vector = all(z.imag == 0.0 for z in old)

    for k in range(len(work)):
        try:
            new, ratio_size = _correction(ctx, poly, source, k, collision_eps)
        except CoordinateCollision:
            collisions += 1
            kick = collision_eps * (1.0 if k % 2 else -1.0) if real_vector else cmath.rect(collision_eps, k)
            new, ratio_size = old[k] + kick, math.inf
            ctx.charge(cadd=1)
        except NumericError as exc:
            logger.debug("Coordenada %d retenida: %s", k, exc)
            held += 1
            new, ratio_size = old[k], math.inf
        work[k] = new
        step = modulus(ctx, new - old[k])
        ctx.charge(cadd=1)
        max_step = max(max_step, step)
        max_ratio = max(max_ratio, ratio_size)
        mask.append(step < eps)

    return AberthState(z=work, sweep=state.sweep + 1, converged_mask=mask, max_step=max_step,
                       max_ratio=max_ratio, held=state.held + held, collisions=state.collisions + collisions)


# ----------- Corridas -----------
def start_vector(d: int, radius: float, phase: Optional[float] = None) -> list[Complex]:
    """d puntos equidistribuidos en el círculo de radio `radius` (θ₀ = π/(2d))."""
    theta0 = math.pi / (2 * d) if phase is None else phase
    return [cmath.rect(radius, 2 * math.pi * j / d + theta0) for j in range(d)]


def _finite(values: List[Complex]) -> list[Complex]:
    """Las coordenadas representables; un vector que desbordó no empareja esas entradas."""
    return [z for z in values if cmath.isfinite(z)]


def _final_residuals(poly: PolyRepr, values: List[Complex]) -> list[float]:
    """Residuo |p/p'| de cada coordenada; contador aparte (verificación)."""
    scratch = OpCounter()
    out = []
    for z in values:
        try:
            out.append(abs(newton_ratio(scratch, poly, z)))
        except NumericError:
            out.append(math.inf)
    return out


def iter_aberth(ctx: OpCounter, poly: PolyRepr, cfg: AberthConfig,
                method: str = "aberth") -> Generator[None, None, SolveReport]:
    d = degree(poly)
    z0 = list(cfg.start_vector) if cfg.start_vector is not None else start_vector(d, cfg.start_radius, cfg.phase)
    if len(z0) != d:
        raise ValueError(f"El vector inicial tiene {len(z0)} coordenadas, se esperaban {d}")
    state = AberthState(z=[complex(z) for z in z0])
    collision_eps = cfg.effective_collision_eps
    recent: deque = deque(maxlen=cfg.cycle_window)
    stop_reason = ""
    cycle = False
    prev_max = math.inf

    def reference_ok(values: List[Complex]) -> bool:
        return match_roots(_finite(values), cfg.reference, cfg.delta).success

    if cfg.stop_mode == "reference" and reference_ok(state.z):
        stop_reason = "reference"

    while not stop_reason:
        if state.sweep >= cfg.max_sweeps:
            stop_reason = "max_sweeps"
            break
        state = aberth_sweep(ctx, poly, state, cfg.style, collision_eps, cfg.eps)

        if cfg.stop_mode == "reference":
            if reference_ok(state.z):
                stop_reason = "reference"
        else:
            current = state.max_step if cfg.stop_mode == "step_size" else state.max_ratio
            if current < cfg.eps:
                stop_reason = cfg.stop_mode
            elif current < cfg.delta * NOISE_FLOOR_FACTOR and current >= 0.5 * prev_max:
                stop_reason = "noise_floor"
            prev_max = current

        if cfg.cycle_window and not stop_reason:
            key = tuple(state.z)
            if key in recent:
                cycle = True
                stop_reason = "cycle"
            recent.append(key)
        if not stop_reason:
            yield

    return _aberth_report(method, ctx, poly, cfg, state, stop_reason, cycle)


def _aberth_report(method: str, ctx: OpCounter, poly: PolyRepr, cfg: AberthConfig, state: AberthState,
                   stop_reason: str, cycle: bool) -> SolveReport:
    d = degree(poly)
    residuals = _final_residuals(poly, state.z)
    if cfg.reference:
        result = match_roots(_finite(state.z), cfg.reference, cfg.delta)
        matched = result.success
        found = len(result.pairs)
        missed = result.missed
    else:
        matched = a_posteriori_check(state.z, residuals, d, cfg.delta)
        collector = RootCollector(cfg.delta)
        for z, res in zip(state.z, residuals):
            if res < RESIDUAL_TOL:
                collector.add(z, res)
        found = len(collector)
        missed = 0 if matched else d - found
    if stop_reason == "max_sweeps":
        logger.info("%s: %d barridos sin converger (grado %d)", method, state.sweep, d)
    return SolveReport(
        method=method,
        degree=d,
        expected_roots=d,
        real_adds=ctx.real_adds,
        real_muls=ctx.real_muls,
        iterations=max(0, state.sweep - 1) if stop_reason in CONFIRMING_STOPS else state.sweep,
        roots_found=min(found, d),
        max_residual=max(residuals, default=math.inf),
        matched=matched,
        missed=0 if matched else missed,
        roots=list(state.z),
        stop_reason=stop_reason,
        cycle_detected=cycle,
    )


def _drain(gen: Generator[None, None, SolveReport]) -> SolveReport:
    while True:
        try:
            next(gen)
        except StopIteration as stop:
            return stop.value


def run_aberth(ctx: OpCounter, poly: PolyRepr, cfg: AberthConfig, strict: bool = False) -> SolveReport:
    """
    Barre hasta el criterio de parada de `cfg.stop_mode`. Al agotar
    `max_sweeps` devuelve el reporte parcial (stop_reason='max_sweeps'), o
    levanta `MaxSweepsExceeded` si `strict`.
    """
    report = _drain(iter_aberth(ctx, poly, cfg))
    if strict and report.stop_reason == "max_sweeps":
        raise MaxSweepsExceeded(f"Sin convergencia en {cfg.max_sweeps} barridos")
    return report


def postprocess_start(d: int, found: List[Complex], radius: float, phase: Optional[float] = None) -> list[Complex]:
    """Raíces encontradas más d - m puntos nuevos del círculo, intercalados por ángulo."""
    found = [complex(z) for z in found]
    if len(found) > d:
        raise ValueError("Hay más raíces encontradas que el grado")
    missing = d - len(found)
    fresh = start_vector(missing, radius, phase) if missing else []
    return sorted(found + fresh, key=lambda z: (cmath.phase(z) % (2 * math.pi), abs(z)))


def ea_postprocess(ctx: OpCounter, poly: PolyRepr, found: List[Complex], cfg: AberthConfig) -> SolveReport:
    """
    Ehrlich–Aberth arrancando de las raíces que encontró otro método (tal
    cual) completadas con puntos del círculo de arranque.
    """
    z0 = postprocess_start(degree(poly), found, cfg.start_radius, cfg.phase)
    report = _drain(iter_aberth(ctx, poly, cfg.model_copy(update={"start_vector": z0}), method="ea_postprocess"))
    return report
