from __future__ import annotations
from dataclasses import dataclass
from typing import Sequence

from .errors import DivisionByZero

"""
Aritmética compleja contada

Cada suma y multiplicación real que hace un solver pasa por un `OpCounter`
explícito, de modo que los benchmarks miden operaciones exactas y
deterministas (no tiempo).

Convenciones de conteo (adds, muls reales):
- suma / resta compleja ............ (2, 0)
- multiplicación compleja .......... (2, 4)   fórmula escolar 4M+2A
- complejo por real ................ (0, 2)
- división a/b con escalado ........ (3, 12)  las divisiones reales cuentan como muls
- recíproco 1/w (Smith) ............ (3, 6)
- módulo |z| (tipo hypot) .......... (1, 6)

El valor `Complex` es el `complex` nativo de Python: su producto es
exactamente la fórmula escolar, así que el resultado coincide bit a bit con
hacerlo componente por componente.
"""

Complex = complex

CADD = (2, 0)
CMUL = (2, 4)
CSCALE = (0, 2)
CDIV = (3, 12)
CRECIP = (3, 6)
CABS = (1, 6)


@dataclass
class OpCounter:
    """
    Contador de operaciones reales de una corrida.
    - Solo crece dentro de una corrida; se pone en cero con `reset()`.
    - Un contador por corrida; nunca se comparte entre corridas concurrentes.
    """
    real_adds: int = 0
    real_muls: int = 0

    def charge(self, *, cadd: int = 0, cmul: int = 0, cscale: int = 0, cdiv: int = 0,
               crecip: int = 0, cabs: int = 0, radd: int = 0, rmul: int = 0) -> None:
        """Carga en bloque el costo de varias operaciones complejas y reales."""
        self.real_adds += (cadd * CADD[0] + cmul * CMUL[0] + cscale * CSCALE[0] + cdiv * CDIV[0]
                           + crecip * CRECIP[0] + cabs * CABS[0] + radd)
        self.real_muls += (cmul * CMUL[1] + cscale * CSCALE[1] + cdiv * CDIV[1]
                           + crecip * CRECIP[1] + cabs * CABS[1] + rmul)

    def merge(self, other: "OpCounter") -> None:
        """Suma los conteos de un sub-contador (por ejemplo, de una órbita)."""
        self.real_adds += other.real_adds
        self.real_muls += other.real_muls

    @property
    def total(self) -> int:
        return self.real_adds + self.real_muls


def counter_snapshot(ctx: OpCounter) -> tuple[int, int]:
    """Lectura pura: (real_adds, real_muls)."""
    return ctx.real_adds, ctx.real_muls


def counter_reset(ctx: OpCounter) -> None:
    ctx.real_adds = 0
    ctx.real_muls = 0


def add(ctx: OpCounter, a: Complex, b: Complex) -> Complex:
    ctx.real_adds += 2
    return a + b


def sub(ctx: OpCounter, a: Complex, b: Complex) -> Complex:
    ctx.real_adds += 2
    return a - b


def mul(ctx: OpCounter, a: Complex, b: Complex) -> Complex:
    ctx.real_adds += 2
    ctx.real_muls += 4
    return a * b


def scale(ctx: OpCounter, a: Complex, s: float) -> Complex:
    """Producto de un complejo por un real."""
    ctx.real_muls += 2
    return complex(a.real * s, a.imag * s)


def div(ctx: OpCounter, a: Complex, b: Complex) -> Complex:
    """
    a/b con guardia de escalado: numerador y denominador se dividen por
    max(|re b|, |im b|) antes de la fórmula con el conjugado, así los cuadrados
    intermedios no desbordan.
    """
    br, bi = b.real, b.imag
    s = max(abs(br), abs(bi))
    if s == 0.0:
        raise DivisionByZero("División por cero compleja")
    ctx.charge(cdiv=1)
    br, bi = br / s, bi / s
    ar, ai = a.real / s, a.imag / s
    den = br * br + bi * bi
    return complex((ar * br + ai * bi) / den, (ai * br - ar * bi) / den)


def recip(ctx: OpCounter, w: Complex) -> Complex:
    """1/w con el algoritmo escalado de Smith (el de la división nativa)."""
    if w == 0:
        raise DivisionByZero("Recíproco de cero")
    ctx.charge(crecip=1)
    return 1.0 / w


def modulus(ctx: OpCounter, z: Complex) -> float:
    """|z| escalado tipo hypot; también se cuenta (es parte de los criterios de parada)."""
    ctx.charge(cabs=1)
    return abs(z)


def horner(ctx: OpCounter, coeffs: Sequence[Complex], z: Complex) -> Complex:
    """
    Evalúa un polinomio de coeficientes (grado menor primero) con Horner.
    Costo exacto para grado d: d multiplicaciones y d sumas complejas,
    es decir (4d adds, 4d muls) reales.
    """
    d = len(coeffs) - 1
    v = complex(coeffs[d])
    for k in range(d - 1, -1, -1):
        v = v * z + coeffs[k]
    ctx.charge(cmul=d, cadd=d)
    return v
