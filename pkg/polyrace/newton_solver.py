from __future__ import annotations
import cmath
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Generator, Iterable, List, Literal, Optional

from pydantic import BaseModel, Field, model_validator

from .errors import (DegenerateTriple, DerivativeZero, DivisionByZero, EvaluationOverflow,
                     OrbitBudgetExceeded)
from .matching import RootCollector
from .numeric_core import Complex, OpCounter, div, modulus, recip, sub
from .polynomials import PolyRepr, degree, newton_ratio

"""
Método de Newton con refinamiento iterado

Las órbitas arrancan equidistribuidas en un círculo de radio r (fuera del
disco que contiene las raíces) y se iteran todas a la vez ("lockstep").
Mientras tres órbitas vecinas se mueven "en paralelo" siguen siendo una
muestra recta de la curva imagen del círculo: la razón cruzada (a, b; c, ∞)
vale lo mismo que para tres puntos alineados con la separación angular de sus
puntos de partida. Cuando deja de ser así se inserta una órbita nueva en el
hueco.

Reglas del refinamiento
-----------------------
- cada hueco entre vecinas recuerda su último "ancla": el paso global en el que
  ambas órbitas todavía se movían en paralelo, con sus posiciones;
- hueco "doblado" (alguna de las dos vecinas se desvía más que τ): órbita nueva
  en el punto medio de las posiciones del ancla, reproducida desde ese paso
  hasta el paso actual; no se bisecan huecos de ángulo menor que 2π/(c·d);
- hueco "en desacuerdo" (las dos vecinas terminaron en raíces distintas, o una
  quedó estancada): se biseca igual, hasta `max_futile_splits` bisecciones
  seguidas que no descubren ninguna raíz nueva.

Reglas de cada órbita
---------------------
- converge con 3 pasos seguidos |Δz| < ε, o cuando |Δz| ya está por debajo de
  δ·1e-3 y dejó de bajar a la mitad (piso de ruido del doble);
- escapa cuando |z| > 4r y sale del anillo de vecinas;
- queda estancada si vuelve a una de sus 3 posiciones anteriores con un paso
  mayor que δ (ciclo atractor de período 2 a 4);
- con p'(z) = 0 se perturba en ε·e^{iθ(id)}; a la tercera vez queda estancada.

Las corridas son generadores que ceden el control tras cada paso global, así
el harness puede repartir el presupuesto de operaciones entre Newton y
Ehrlich–Aberth (`race`); `run_iterated_refinement` y `run_plain_newton` los
consumen hasta el final.
"""

logger = logging.getLogger(__name__)

GOLDEN_ANGLE = math.pi * (3.0 - math.sqrt(5.0))
TWO_PI = 2.0 * math.pi
DEGENERATE_GAP = 1e-300
MIN_SPLIT_ANGLE = 1e-12
CONSECUTIVE_SMALL_STEPS = 3
MAX_ZERO_DERIVATIVES = 3
NOISE_FLOOR_FACTOR = 1e-3
CYCLE_MEMORY = 3
CYCLE_TOL = 1e-6
MAX_REFINE_ROUNDS = 20

OrbitStatus = Literal["active", "converged", "escaped", "stalled"]
SplitReason = Literal["shape", "limit"]


# ----------- Definición de clases -----------
class NewtonConfig(BaseModel):
    """Parámetros de una corrida de Newton (radio, órbitas iniciales, tolerancias, presupuestos)."""
    start_radius: float = Field(default=3.0, gt=1.0)
    initial_orbits: int = Field(default=64, ge=4)
    refine_threshold: float = Field(default=0.05, gt=0.0)
    max_steps: int = Field(default=20000, ge=1)
    conv_eps: float = Field(default=1e-13, gt=0.0)
    sep_delta: float = Field(default=1e-8, gt=0.0)
    max_orbits: int = Field(default=65536, ge=4)
    max_generations: int = Field(default=40, ge=0)
    resolution: float = Field(default=2.0, gt=0.0)  # huecos doblados: ángulo mínimo 2π/(resolution·d)
    max_futile_splits: int = Field(default=3, ge=0)
    stop_when_complete: bool = True

    @model_validator(mode="after")
    def _eps_below_delta(self) -> "NewtonConfig":
        if not self.conv_eps < self.sep_delta:
            raise ValueError("conv_eps debe ser menor que sep_delta")
        return self


@dataclass
class GapAnchor:
    """Posiciones de una órbita y su vecina derecha en el último paso en que se movían en paralelo."""
    partner: int
    step: int
    left: Complex
    right: Complex


@dataclass
class OrbitState:
    id: int
    z: Complex
    steps: int = 0
    status: OrbitStatus = "active"
    left: Optional[int] = None
    right: Optional[int] = None
    last_cross_ratio: Optional[Complex] = None
    residual: Optional[float] = None
    generation: int = 0
    small_steps: int = 0
    zero_derivs: int = 0
    last_step: Optional[float] = None
    theta: float = 0.0  # ángulo de partida sobre el círculo
    clock: int = 0  # paso global al que corresponde z
    root: Optional[int] = None  # cluster de RootCollector al converger
    anchor: Optional[GapAnchor] = None  # del hueco hacia la derecha
    futile: int = 0
    recent: List[Complex] = field(default_factory=list)


class RootHit(BaseModel):
    z: complex
    residual: float
    hits: int


class NewtonReport(BaseModel):
    method: str
    degree: int
    roots: List[RootHit]
    orbits_total: int
    converged: int
    escaped: int
    stalled: int
    global_steps: int
    real_adds: int
    real_muls: int
    steps_histogram: Dict[str, int]
    missed_count: int
    insertions: Dict[str, int] = Field(default_factory=dict)
    orbit_budget_exceeded: bool = False
    max_steps_reached: bool = False

    @property
    def root_values(self) -> list[complex]:
        return [r.z for r in self.roots]

    @property
    def max_residual(self) -> float:
        return max((r.residual for r in self.roots), default=math.inf)


# ----------- Pasos y puntos iniciales -----------
def newton_step(ctx: OpCounter, poly: PolyRepr, z: Complex) -> Complex:
    """z - p(z)/p'(z); una raíz exacta queda fija. Propaga `DerivativeZero`."""
    r = newton_ratio(ctx, poly, z)
    if r == 0:
        return z
    return sub(ctx, z, r)


def starting_points(d: int, r: float, count: Optional[int] = None, phase: Optional[float] = None) -> list[Complex]:
    """
    `count` puntos r·e^{2πij/count + iθ₀} (por defecto count = d), con
    θ₀ = π/(2·count) para no arrancar simétricos respecto del eje real.
    """
    count = d if count is None else count
    if count < 1:
        raise ValueError("count debe ser >= 1")
    if r <= 1.0:
        raise ValueError("El radio inicial debe ser > 1")
    theta0 = math.pi / (2 * count) if phase is None else phase
    return [cmath.rect(r, 2 * math.pi * j / count + theta0) for j in range(count)]


def cross_ratio_deviation(ctx: OpCounter, a: Complex, b: Complex, c: Complex,
                          prev: Optional[Complex]) -> tuple[float, Complex]:
    """
    Razón cruzada (a, b; c, ∞) = (a-c)/(b-c) y su deriva |cr - prev|
    respecto del paso anterior (0 si no hay previa).
    """
    if abs(b - c) < DEGENERATE_GAP:
        raise DegenerateTriple("Órbitas vecinas coincidentes")
    cr = div(ctx, sub(ctx, a, c), sub(ctx, b, c))
    if prev is None:
        return 0.0, cr
    return modulus(ctx, sub(ctx, cr, prev)), cr


def parallel_deviation(ctx: OpCounter, cr: Complex, t: float) -> float:
    """
    |1/cr - (1 - t)| para cr = (a, b; c, ∞): es 0 exactamente cuando b está
    sobre el segmento a-c a fracción t de a, y mide |b - (a + t(c-a))| / |a - c|.
    """
    if cr == 0:
        raise DegenerateTriple("Órbitas vecinas a y c coincidentes")
    w = recip(ctx, cr)
    ctx.charge(radd=1)
    return modulus(ctx, w - (1.0 - t))


def _angle_gap(a: float, b: float) -> float:
    """Ángulo recorrido de a hacia b en sentido positivo, en [0, 2π)."""
    return (b - a) % TWO_PI


def _perturbation(orbit_id: int, eps: float) -> Complex:
    return cmath.rect(eps, GOLDEN_ANGLE * orbit_id)


def _advance(ctx: OpCounter, poly: PolyRepr, orbit: OrbitState, cfg: NewtonConfig, escape_radius: float) -> None:
    """Un paso de Newton sobre una órbita activa, con sus reglas de parada."""
    orbit.clock += 1
    try:
        r = newton_ratio(ctx, poly, orbit.z)
    except DerivativeZero:
        orbit.zero_derivs += 1
        if orbit.zero_derivs >= MAX_ZERO_DERIVATIVES:
            orbit.status = "stalled"
        else:
            orbit.z += _perturbation(orbit.id, cfg.conv_eps)
            ctx.charge(cadd=1)
        return
    except (EvaluationOverflow, DivisionByZero):
        orbit.status = "escaped"
        return

    orbit.zero_derivs = 0
    if r == 0:
        orbit.status = "converged"
        orbit.residual = 0.0
        return

    orbit.steps += 1
    z_new = sub(ctx, orbit.z, r)
    step = modulus(ctx, r)
    if step > cfg.sep_delta and any(abs(z_new - w) < CYCLE_TOL * step for w in orbit.recent):
        orbit.z = z_new
        orbit.status = "stalled"
        return
    orbit.recent = (orbit.recent + [orbit.z])[-CYCLE_MEMORY:]
    orbit.z = z_new
    if not cmath.isfinite(z_new) or abs(z_new) > escape_radius:
        orbit.status = "escaped"
        return

    orbit.small_steps = orbit.small_steps + 1 if step < cfg.conv_eps else 0
    at_noise_floor = (step < cfg.sep_delta * NOISE_FLOOR_FACTOR and orbit.last_step is not None
                      and step >= 0.5 * orbit.last_step)
    orbit.last_step = step
    orbit.residual = step
    if orbit.small_steps >= CONSECUTIVE_SMALL_STEPS or at_noise_floor:
        orbit.status = "converged"


# ----------- Agrupación de raíces -----------
def collect_roots(orbits: Iterable[OrbitState], delta: float) -> list[RootHit]:
    """Raíces distintas (radio 2δ) entre las órbitas convergidas, en orden de id."""
    collector = RootCollector(delta)
    for orbit in sorted(orbits, key=lambda o: o.id):
        if orbit.status == "converged":
            collector.add(orbit.z, orbit.residual or 0.0)
    return _root_hits(collector)


def _root_hits(collector: RootCollector) -> list[RootHit]:
    return [RootHit(z=z, residual=res, hits=h)
            for z, res, h in zip(collector.centers, collector.residuals, collector.hits)]


# ----------- Anillo de órbitas -----------
class OrbitRing:
    """
    Órbitas enlazadas en orden circular (izquierda / derecha) según su ángulo
    de partida sobre el círculo de radio `radius`. Las escapadas salen del
    anillo; las convergidas y estancadas siguen enlazadas.
    """

    def __init__(self, starts: list[Complex], max_orbits: int, linked: bool = True,
                 radius: Optional[float] = None) -> None:
        self.max_orbits = max_orbits
        self.radius = radius if radius is not None else max((abs(z) for z in starts), default=1.0)
        self.orbits: Dict[int, OrbitState] = {}
        self.insertions: Dict[str, int] = {"shape": 0, "limit": 0}
        n = len(starts)
        for i, z in enumerate(starts):
            z = complex(z)
            orbit = OrbitState(id=i, z=z, theta=cmath.phase(z) % TWO_PI)
            if linked and n > 1:
                orbit.left, orbit.right = (i - 1) % n, (i + 1) % n
                orbit.anchor = GapAnchor(partner=orbit.right, step=0, left=z, right=complex(starts[orbit.right]))
            self.orbits[i] = orbit
        self.next_id = n

    def active(self) -> list[OrbitState]:
        return [o for o in self.orbits.values() if o.status == "active"]

    def right_of(self, orbit: OrbitState) -> Optional[OrbitState]:
        if orbit.right is None or orbit.right == orbit.id:
            return None
        return self.orbits[orbit.right]

    def unlink(self, orbit: OrbitState) -> None:
        """Saca una órbita escapada del anillo, uniendo a sus vecinas."""
        if orbit.left is None or orbit.right is None:
            return
        left, right = self.orbits[orbit.left], self.orbits[orbit.right]
        if left is orbit:
            orbit.left = orbit.right = None
            return
        left.right, right.left = right.id, left.id
        left.last_cross_ratio = right.last_cross_ratio = None
        orbit.left = orbit.right = None

    def anchor_of(self, x: OrbitState, y: OrbitState) -> GapAnchor:
        """Ancla del hueco x-y; sin ancla vigente, los puntos de partida (paso 0)."""
        if x.anchor is not None and x.anchor.partner == y.id:
            return x.anchor
        return GapAnchor(partner=y.id, step=0, left=cmath.rect(self.radius, x.theta),
                         right=cmath.rect(self.radius, y.theta))

    def insert_between(self, ctx: OpCounter, x: OrbitState, y: OrbitState) -> OrbitState:
        """
        Nueva órbita en el hueco x-y (vecinas), a mitad de ángulo. Arranca en el
        punto medio de las posiciones del ancla del hueco (en el paso 0, sobre
        el círculo) y queda con `clock` = paso del ancla: falta reproducirla.
        """
        if len(self.orbits) >= self.max_orbits:
            raise OrbitBudgetExceeded(f"Se alcanzó max_orbits={self.max_orbits}")
        anchor = self.anchor_of(x, y)
        theta = x.theta + _angle_gap(x.theta, y.theta) / 2.0
        if anchor.step == 0:
            z = cmath.rect(self.radius, theta)
        else:
            z = (anchor.left + anchor.right) * 0.5
            ctx.charge(cadd=1, cscale=1)
        orbit = OrbitState(id=self.next_id, z=z, left=x.id, right=y.id, theta=theta, clock=anchor.step,
                           generation=max(x.generation, y.generation) + 1)
        orbit.anchor = GapAnchor(partner=y.id, step=anchor.step, left=z, right=anchor.right)
        x.anchor = GapAnchor(partner=orbit.id, step=anchor.step, left=anchor.left, right=z)
        self.next_id += 1
        self.orbits[orbit.id] = orbit
        x.right = y.left = orbit.id
        x.last_cross_ratio = y.last_cross_ratio = None
        return orbit


@dataclass
class _Lockstep:
    """Estado compartido de una corrida: contador, anillo y raíces encontradas."""
    ctx: OpCounter
    poly: PolyRepr
    cfg: NewtonConfig
    ring: OrbitRing
    collector: RootCollector
    escape_radius: float
    degree: int
    step: int = 0

    def advance(self, orbit: OrbitState) -> bool:
        """Avanza una órbita; devuelve True si al converger abrió una raíz nueva."""
        _advance(self.ctx, self.poly, orbit, self.cfg, self.escape_radius)
        if orbit.status == "converged":
            orbit.root, new = self.collector.locate(orbit.z, orbit.residual or 0.0)
            return new
        if orbit.status == "escaped":
            self.ring.unlink(orbit)
        return False

    def replay(self, orbit: OrbitState) -> bool:
        """Lleva una órbita recién insertada hasta el paso global actual."""
        found = False
        while orbit.status == "active" and orbit.clock < self.step:
            found = self.advance(orbit) or found
        return found

    @property
    def complete(self) -> bool:
        return self.cfg.stop_when_complete and len(self.collector) >= self.degree


def _deviations(ctx: OpCounter, ring: OrbitRing) -> Dict[int, float]:
    """Desvío de paralelismo de cada órbita activa con sus dos vecinas activas."""
    deviation: Dict[int, float] = {}
    for orbit in ring.active():
        if orbit.left is None or orbit.right is None or orbit.left == orbit.right:
            continue
        a, c = ring.orbits[orbit.left], ring.orbits[orbit.right]
        if a.status != "active" or c.status != "active":
            continue
        g1, g2 = _angle_gap(a.theta, orbit.theta), _angle_gap(orbit.theta, c.theta)
        try:
            _, cr = cross_ratio_deviation(ctx, a.z, orbit.z, c.z, None)
            measure = parallel_deviation(ctx, cr, g1 / (g1 + g2))
        except (DegenerateTriple, DivisionByZero):
            cr, measure = None, math.inf
        orbit.last_cross_ratio = cr
        deviation[orbit.id] = measure
    return deviation


def _bent(x: OrbitState, y: OrbitState, deviation: Dict[int, float], cfg: NewtonConfig, min_gap: float) -> bool:
    tau = cfg.refine_threshold
    return (x.status == "active" and y.status == "active"
            and (deviation.get(x.id, 0.0) > tau or deviation.get(y.id, 0.0) > tau)
            and _angle_gap(x.theta, y.theta) > min_gap
            and abs(x.z - y.z) > 2.0 * cfg.sep_delta
            and max(x.generation, y.generation) < cfg.max_generations)


def _disagree(x: OrbitState, y: OrbitState, cfg: NewtonConfig) -> bool:
    if x.status == "active" or y.status == "active":
        return False
    if x.status == "stalled" and y.status == "stalled":
        return False
    if x.status == "converged" and y.status == "converged" and x.root == y.root:
        return False
    return x.futile < cfg.max_futile_splits and _angle_gap(x.theta, y.theta) > MIN_SPLIT_ANGLE


def _refine(run: _Lockstep) -> int:
    """
    Actualiza las anclas de los huecos que siguen en paralelo y bisecta los
    huecos doblados o en desacuerdo, reproduciendo cada órbita nueva desde el
    ancla. Repite mientras haya bisecciones. Devuelve las órbitas creadas.
    """
    ring, cfg = run.ring, run.cfg
    tau = cfg.refine_threshold
    min_gap = TWO_PI / (cfg.resolution * run.degree)
    created = 0
    for _ in range(MAX_REFINE_ROUNDS):
        deviation = _deviations(run.ctx, ring)
        for orbit in ring.active():
            right = ring.right_of(orbit)
            if (right is not None and right.status == "active"
                    and deviation.get(orbit.id, 0.0) <= tau and deviation.get(right.id, 0.0) <= tau):
                orbit.anchor = GapAnchor(partner=right.id, step=run.step, left=orbit.z, right=right.z)

        splits: list[tuple[OrbitState, OrbitState, SplitReason]] = []
        for orbit in list(ring.orbits.values()):
            right = ring.right_of(orbit)
            if right is None:
                continue
            if _bent(orbit, right, deviation, cfg, min_gap):
                splits.append((orbit, right, "shape"))
            elif _disagree(orbit, right, cfg):
                splits.append((orbit, right, "limit"))
        if not splits:
            break

        for x, y, reason in splits:
            futile = x.futile
            orbit = ring.insert_between(run.ctx, x, y)
            found = run.replay(orbit)
            if reason == "limit":
                x.futile = orbit.futile = 0 if found else futile + 1
            ring.insertions[reason] += 1
            created += 1
    return created


# ----------- Corridas -----------
def _steps_histogram(orbits: Iterable[OrbitState]) -> Dict[str, int]:
    """Histograma de pasos de las órbitas convergidas, por potencias de 2."""
    hist: Dict[str, int] = {}
    for orbit in orbits:
        if orbit.status != "converged":
            continue
        bucket = 1 if orbit.steps <= 1 else 2 ** math.ceil(math.log2(orbit.steps))
        key = f"<={bucket}"
        hist[key] = hist.get(key, 0) + 1
    return dict(sorted(hist.items(), key=lambda kv: int(kv[0][2:])))


def _build_report(method: str, run: _Lockstep, budget_exceeded: bool, max_steps_reached: bool) -> NewtonReport:
    ring = run.ring
    for orbit in ring.orbits.values():
        if orbit.status == "active":
            orbit.status = "stalled"
    orbits = list(ring.orbits.values())
    roots = _root_hits(run.collector)
    return NewtonReport(
        method=method,
        degree=run.degree,
        roots=roots,
        orbits_total=len(orbits),
        converged=sum(o.status == "converged" for o in orbits),
        escaped=sum(o.status == "escaped" for o in orbits),
        stalled=sum(o.status == "stalled" for o in orbits),
        global_steps=run.step,
        real_adds=run.ctx.real_adds,
        real_muls=run.ctx.real_muls,
        steps_histogram=_steps_histogram(orbits),
        missed_count=max(0, run.degree - len(roots)),
        insertions=dict(ring.insertions),
        orbit_budget_exceeded=budget_exceeded,
        max_steps_reached=max_steps_reached,
    )


def _iterate(ctx: OpCounter, poly: PolyRepr, cfg: NewtonConfig, ring: OrbitRing, method: str,
             refine: bool) -> Generator[None, None, NewtonReport]:
    run = _Lockstep(ctx=ctx, poly=poly, cfg=cfg, ring=ring, collector=RootCollector(cfg.sep_delta),
                    escape_radius=4.0 * cfg.start_radius, degree=degree(poly))
    budget_exceeded = False

    while True:
        active = ring.active()
        if active:
            if run.step >= cfg.max_steps:
                break
            for orbit in active:
                run.advance(orbit)
            run.step += 1
        if run.complete:
            break

        created = 0
        if refine and not budget_exceeded:
            try:
                created = _refine(run)
            except OrbitBudgetExceeded:
                budget_exceeded = True
                created = 1
                logger.warning("%s: presupuesto de órbitas agotado (%d)", method, cfg.max_orbits)
        if run.complete:
            break
        if not active and not created:
            break
        yield

    if run.complete:
        logger.debug("%s: %d raíces tras %d pasos", method, len(run.collector), run.step)
    max_steps_reached = run.step >= cfg.max_steps and bool(ring.active())
    return _build_report(method, run, budget_exceeded, max_steps_reached)


def iter_refinement(ctx: OpCounter, poly: PolyRepr, cfg: NewtonConfig, phase: Optional[float] = None,
                    ring: Optional[OrbitRing] = None) -> Generator[None, None, NewtonReport]:
    """Generador del refinamiento iterado; `ring` permite mirar el anillo entre pasos."""
    if ring is None:
        starts = starting_points(degree(poly), cfg.start_radius, cfg.initial_orbits, phase)
        ring = OrbitRing(starts, cfg.max_orbits, linked=True, radius=cfg.start_radius)
    return _iterate(ctx, poly, cfg, ring, "newton", refine=True)


def iter_plain_newton(ctx: OpCounter, poly: PolyRepr, starts: list[Complex],
                      cfg: NewtonConfig) -> Generator[None, None, NewtonReport]:
    ring = OrbitRing(starts, max(cfg.max_orbits, len(starts)), linked=False, radius=cfg.start_radius)
    return _iterate(ctx, poly, cfg, ring, "newton_plain", refine=False)


def _drain(gen: Generator[None, None, NewtonReport]) -> NewtonReport:
    while True:
        try:
            next(gen)
        except StopIteration as stop:
            return stop.value


def run_iterated_refinement(ctx: OpCounter, poly: PolyRepr, cfg: NewtonConfig,
                            phase: Optional[float] = None) -> NewtonReport:
    """
    Newton con refinamiento iterado desde `cfg.initial_orbits` puntos del
    círculo de radio `cfg.start_radius`. Termina cuando se juntan `degree`
    raíces, cuando no quedan órbitas activas ni huecos por bisecar, o al
    llegar a `max_steps`.
    """
    return _drain(iter_refinement(ctx, poly, cfg, phase))


def run_plain_newton(ctx: OpCounter, poly: PolyRepr, starts: list[Complex], cfg: NewtonConfig) -> NewtonReport:
    """Newton sin refinamiento desde los puntos dados (línea base)."""
    return _drain(iter_plain_newton(ctx, poly, starts, cfg))