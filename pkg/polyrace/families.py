from __future__ import annotations
import cmath
import logging
import math
import re
from dataclasses import dataclass
from typing import Literal, Optional

from pydantic import BaseModel, Field, ValidationError

from .errors import DegreeTooLargeForSlowMode, InvalidFamilySpec, UnsupportedEvalMode
from .polynomials import (SLOW_MODE_MAX_DEGREE, ChebyshevCoeff, ChebyshevFast, IterQuad, LegendreRec,
                          MandelCenter, PolyRepr, Roots, expand_to_coefficients)

"""
Familias de polinomios de los experimentos

Este módulo construye, a partir de un `FamilySpec`, el polinomio a resolver y
sus raíces de referencia cuando se conocen. También parsea las
especificaciones de familia que llegan desde la línea de comandos.

Gramática de familia
--------------------
    <familia>[:clave=valor,clave=valor,...]

Claves: `n` o `d` (parámetro de grado), `c` (solo iterquad, p.ej. `0+1i`),
`eval` (`fast` | `slow`), `seed` (familias aleatorias).

Generador aleatorio
-------------------
Las familias aleatorias usan SplitMix64 (constantes 0x9E3779B97F4A7C15,
0xBF58476D1CE4E5B9, 0x94D049BB133111EB) y `u = (x >> 11) * 2^-53`, de modo que
la misma semilla da exactamente las mismas raíces en cualquier plataforma.
"""

logger = logging.getLogger(__name__)

MASK64 = 0xFFFFFFFFFFFFFFFF
SPLITMIX_GAMMA = 0x9E3779B97F4A7C15
SPLITMIX_M1 = 0xBF58476D1CE4E5B9
SPLITMIX_M2 = 0x94D049BB133111EB

FamilyTag = Literal["iter_quad", "mandel_center", "chebyshev", "legendre", "random_circle",
                    "random_disk", "grid", "random_semicircle", "random_segment"]

FAST_FAMILIES = ("iter_quad", "mandel_center", "chebyshev")
RANDOM_FAMILIES = ("random_circle", "random_disk", "random_semicircle", "random_segment")

# alias aceptados en la línea de comandos -> tag canónico
FAMILY_ALIASES = {
    "iterquad": "iter_quad", "iter_quad": "iter_quad",
    "mandel": "mandel_center", "mandel_center": "mandel_center", "mandelbrot": "mandel_center",
    "cheb": "chebyshev", "chebyshev": "chebyshev",
    "legendre": "legendre", "leg": "legendre",
    "randcircle": "random_circle", "random_circle": "random_circle",
    "randdisk": "random_disk", "random_disk": "random_disk",
    "grid": "grid",
    "randsemi": "random_semicircle", "random_semicircle": "random_semicircle",
    "randseg": "random_segment", "random_segment": "random_segment",
}

# etiqueta corta que se usa al imprimir la familia (columna `family` del CSV)
SHORT_NAMES = {
    "iter_quad": "iterquad", "mandel_center": "mandel", "chebyshev": "cheb", "legendre": "legendre",
    "random_circle": "randcircle", "random_disk": "randdisk", "grid": "grid",
    "random_semicircle": "randsemi", "random_segment": "randseg",
}

FAMILY_GRAMMAR = """\
Familias (<familia>[:clave=valor,...]):
  iterquad:c=<complejo>,n=<N>[,eval=fast|slow]   P_{n,c}(z) = p_c^n(z) - z, grado 2^n
  mandel:n=<N>[,eval=fast|slow]                  centros de período n de Mandelbrot, grado 2^(n-1)
  cheb:d=<D>[,eval=fast|slow]                    Chebyshev T_d (fast requiere d = 2^k)
  legendre:d=<D>                                 Legendre P_d por recurrencia
  randcircle:d=<D>[,seed=<S>]                    d raíces uniformes en el círculo unidad
  randdisk:d=<D>[,seed=<S>]                      d raíces r e^{i phi} con (r, phi) uniformes
  grid:n=<N>                                     grilla {1..n} + i{1..n} reescalada al disco unidad
  randsemi:d=<D>[,seed=<S>]                      d raíces uniformes en el semicírculo superior
  randseg:d=<D>[,seed=<S>]                       d raíces uniformes en [-1, 1]
Complejos: 1, -0.5, 0+1i, i, 0.25-0.3i.
Barridos de grado (--degrees): 5, 2^6, 4..10, 2^4..2^12 (separados por comas).
"""


# ----------- Definición de clases -----------
class FamilySpec(BaseModel):
    """
    Especificación de una familia:
    - degree_param: n para iter_quad / mandel_center / grid, d para el resto
    - eval_mode: None elige el modo natural de la familia (fast si existe)
    """
    family: FamilyTag
    degree_param: Optional[int] = Field(default=None, ge=1)
    c: complex = 1j
    eval_mode: Optional[Literal["fast", "slow"]] = None
    seed: int = Field(default=7, ge=0, le=MASK64)


@dataclass(frozen=True)
class ReferenceRoots:
    roots: Optional[tuple[complex, ...]]
    kind: Literal["exact_formula", "constructed", "unknown"]


class SplitMix64:
    """Generador de 64 bits, determinista y portable."""

    def __init__(self, seed: int) -> None:
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + SPLITMIX_GAMMA) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * SPLITMIX_M1) & MASK64
        z = ((z ^ (z >> 27)) * SPLITMIX_M2) & MASK64
        return z ^ (z >> 31)

    def uniform(self) -> float:
        """Real uniforme en [0, 1) con 53 bits."""
        return (self.next_u64() >> 11) * 2.0 ** -53


# ----------- Parser de la línea de comandos -----------
def parse_complex(text: str) -> complex:
    """Acepta la notación con `i` (0+1i, i, -2.5i) además de la de Python."""
    s = text.strip().replace(" ", "").replace("I", "i").replace("i", "j")
    s = re.sub(r"(^|[+-])j", r"\g<1>1j", s)
    try:
        return complex(s)
    except ValueError as exc:
        raise InvalidFamilySpec(f"Número complejo inválido: {text!r}") from exc


def format_complex(c: complex) -> str:
    re_part = f"{c.real:g}"
    im_part = f"{abs(c.imag):g}"
    sign = "-" if c.imag < 0 or (c.imag == 0 and math.copysign(1.0, c.imag) < 0) else "+"
    return f"{re_part}{sign}{im_part}i"


def parse_family_spec(text: str) -> FamilySpec:
    """
    Convierte `iterquad:c=0+1i,n=12,eval=fast` en un `FamilySpec`.
    Cualquier error de formato se reporta como `InvalidFamilySpec`.
    """
    name, _, rest = text.strip().partition(":")
    tag = FAMILY_ALIASES.get(name.strip().lower())
    if tag is None:
        raise InvalidFamilySpec(f"Familia desconocida: {name!r}")

    fields: dict = {"family": tag}
    for item in filter(None, (p.strip() for p in rest.split(","))):
        key, sep, value = item.partition("=")
        key = key.strip().lower()
        if not sep:
            raise InvalidFamilySpec(f"Se esperaba clave=valor en {item!r}")
        try:
            if key in ("n", "d"):
                fields["degree_param"] = int(value)
            elif key == "c":
                fields["c"] = parse_complex(value)
            elif key == "eval":
                fields["eval_mode"] = value.strip().lower()
            elif key == "seed":
                fields["seed"] = int(value)
            else:
                raise InvalidFamilySpec(f"Clave desconocida {key!r} en {text!r}")
        except ValueError as exc:
            if isinstance(exc, InvalidFamilySpec):
                raise
            raise InvalidFamilySpec(f"Valor inválido para {key!r}: {value!r}") from exc

    try:
        return FamilySpec(**fields)
    except ValidationError as exc:
        raise InvalidFamilySpec(f"Especificación inválida {text!r}: {exc.errors()[0]['msg']}") from exc


def family_label(spec: FamilySpec) -> str:
    """Etiqueta estable sin el parámetro de grado (columna `family` del CSV)."""
    label = SHORT_NAMES[spec.family]
    if spec.family == "iter_quad":
        label += f":c={format_complex(spec.c)}"
    return label


def parse_degrees(text: str) -> list[int]:
    """
    Barrido de grados: enteros, `2^k`, rangos `a..b` y rangos geométricos
    `2^a..2^b`, separados por comas. Devuelve la lista en orden de aparición.
    """
    values: list[int] = []
    for item in filter(None, (p.strip() for p in text.split(","))):
        try:
            if ".." in item:
                lo_txt, hi_txt = item.split("..", 1)
                if lo_txt.strip().startswith("2^") and hi_txt.strip().startswith("2^"):
                    lo, hi = int(lo_txt.strip()[2:]), int(hi_txt.strip()[2:])
                    values.extend(2 ** k for k in range(lo, hi + 1))
                else:
                    lo, hi = _parse_degree_atom(lo_txt), _parse_degree_atom(hi_txt)
                    values.extend(range(lo, hi + 1))
            else:
                values.append(_parse_degree_atom(item))
        except ValueError as exc:
            raise InvalidFamilySpec(f"Barrido de grados inválido: {item!r}") from exc
    if not values or any(v < 1 for v in values):
        raise InvalidFamilySpec(f"Barrido de grados vacío o con valores < 1: {text!r}")
    return values


def _parse_degree_atom(text: str) -> int:
    text = text.strip()
    if text.startswith("2^"):
        return 2 ** int(text[2:])
    return int(text)


# ----------- Propiedades de cada familia -----------
def with_degree(spec: FamilySpec, degree_param: int) -> FamilySpec:
    return spec.model_copy(update={"degree_param": degree_param})


def resolved_eval_mode(spec: FamilySpec) -> str:
    if spec.eval_mode is not None:
        return spec.eval_mode
    return "fast" if spec.family in FAST_FAMILIES else "slow"


def family_degree(spec: FamilySpec) -> int:
    n = _require_degree(spec)
    if spec.family == "iter_quad":
        return 2 ** n
    if spec.family == "mandel_center":
        return 2 ** (n - 1)
    if spec.family == "grid":
        return n * n
    return n


def root_bound(spec: FamilySpec) -> float:
    """Radio de un disco que contiene todas las raíces de la familia."""
    if spec.family == "iter_quad":
        return (1.0 + math.sqrt(1.0 + 4.0 * abs(spec.c))) / 2.0
    if spec.family == "mandel_center":
        return 2.0
    return 1.0


def default_degrees(family: str) -> list[int]:
    """Barrido por defecto del parámetro de grado de cada familia."""
    tag = FAMILY_ALIASES.get(family, family)
    if tag == "iter_quad":
        return list(range(4, 11))
    if tag == "mandel_center":
        return list(range(4, 12))
    if tag == "chebyshev":
        return [2 ** k for k in range(4, 11)]
    if tag == "grid":
        return [4, 6, 9, 13, 20, 30, 40]
    if tag in ("random_semicircle", "random_segment"):
        return [2 ** k for k in range(4, 9)]
    return [2 ** k for k in range(4, 10)]


def _require_degree(spec: FamilySpec) -> int:
    if spec.degree_param is None:
        raise InvalidFamilySpec(f"Falta el parámetro de grado (n= o d=) para {spec.family}")
    return spec.degree_param


# ----------- Generadores -----------
def grid_points(n: int) -> list[complex]:
    """Los n^2 puntos {1..n} + i{1..n}, sin reescalar."""
    return [complex(a, b) for a in range(1, n + 1) for b in range(1, n + 1)]


def rescale_grid(points: list[complex], n: int) -> list[complex]:
    """Centra la grilla en (n+1)/2 (1+i) y la escala por sqrt(2)/(n+1): queda dentro del disco unidad."""
    center = complex((n + 1) / 2, (n + 1) / 2)
    factor = math.sqrt(2.0) / (n + 1)
    return [(z - center) * factor for z in points]


def chebyshev_roots(d: int) -> list[complex]:
    return [complex(math.cos((2 * j - 1) * math.pi / (2 * d)), 0.0) for j in range(1, d + 1)]


def _random_roots(spec: FamilySpec, d: int) -> list[complex]:
    rng = SplitMix64(spec.seed)
    roots = []
    for _ in range(d):
        if spec.family == "random_circle":
            z = cmath.rect(1.0, 2 * math.pi * rng.uniform())
        elif spec.family == "random_disk":
            r = rng.uniform()
            z = cmath.rect(r, 2 * math.pi * rng.uniform())
        elif spec.family == "random_semicircle":
            z = cmath.rect(1.0, math.pi * rng.uniform())
        else:
            z = complex(2.0 * rng.uniform() - 1.0, 0.0)
        roots.append(z)
    return roots


def make_family(spec: FamilySpec) -> tuple[PolyRepr, ReferenceRoots]:
    """
    Construye el polinomio de la familia y sus raíces de referencia.
    - fast solo es válido para iter_quad, mandel_center y chebyshev (d = 2^k).
    - slow en familias recursivas expande a coeficientes (grado <= 2^14).
    """
    n = _require_degree(spec)
    mode = resolved_eval_mode(spec)
    d = family_degree(spec)

    if mode == "fast" and spec.family not in FAST_FAMILIES:
        raise UnsupportedEvalMode(f"La familia {spec.family} no tiene evaluación rápida")
    if mode == "fast" and spec.family == "chebyshev" and d & (d - 1):
        raise UnsupportedEvalMode(f"Chebyshev rápido requiere d = 2^k (d={d})")
    if mode == "slow" and spec.family in FAST_FAMILIES and d > SLOW_MODE_MAX_DEGREE:
        raise DegreeTooLargeForSlowMode(f"Grado {d} excede {SLOW_MODE_MAX_DEGREE} en modo slow")

    logger.debug("make_family %s grado=%d modo=%s", spec.family, d, mode)
    unknown = ReferenceRoots(roots=None, kind="unknown")

    if spec.family == "iter_quad":
        poly: PolyRepr = IterQuad(c=spec.c, n=n)
        return (poly if mode == "fast" else expand_to_coefficients(poly)), unknown
    if spec.family == "mandel_center":
        poly = MandelCenter(n=n)
        return (poly if mode == "fast" else expand_to_coefficients(poly)), unknown
    if spec.family == "chebyshev":
        ref = ReferenceRoots(roots=tuple(chebyshev_roots(d)), kind="exact_formula")
        if mode == "fast":
            return ChebyshevFast(k=d.bit_length() - 1), ref
        return ChebyshevCoeff(d=d), ref
    if spec.family == "legendre":
        return LegendreRec(d=d), unknown
    if spec.family == "grid":
        roots = tuple(rescale_grid(grid_points(n), n))
        return Roots(roots=roots), ReferenceRoots(roots=roots, kind="constructed")

    roots = tuple(_random_roots(spec, d))
    return Roots(roots=roots), ReferenceRoots(roots=roots, kind="constructed")
