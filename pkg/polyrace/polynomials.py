from __future__ import annotations
import cmath
import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np
from numpy.polynomial import chebyshev as npcheb
from numpy.polynomial import legendre as npleg
from numpy.polynomial import polynomial as nppoly

from .errors import (CoefficientOverflow, DegreeTooLarge, DerivativeZero, EvaluationOverflow,
                     PolyraceError)
from .numeric_core import Complex, OpCounter, div, recip

"""
Representaciones de polinomios y su evaluación contada

Un polinomio no se supone dado por coeficientes: lo único que piden los solvers
es poder evaluar p, p' y sobre todo p/p'. Cada representación usa su esquema
nativo:

- `Coefficients`: Horner para valor y derivada a la vez, O(d).
- `Roots`: producto con mantisa/exponente separados para el valor y
  (Σ 1/(z-ξ_i))^{-1} para p/p', O(d).
- `IterQuad`: P_{n,c}(z) = p_c^{∘n}(z) - z por iteración, O(n) = O(log d).
- `MandelCenter`: q_n(c) con q_0 = 0, q_{k+1} = q_k^2 + c, O(log d).
- `ChebyshevFast`: T_{2^k} por duplicación, O(log d).
- `ChebyshevCoeff`: T_d en forma de coeficientes (monicos escalados), O(d).
- `LegendreRec`: P_d por la recurrencia de tres términos, O(d).

Las formas rápidas pasan al régimen asintótico (r <- r/2 por duplicación)
cuando el iterado supera `ESCAPE_MODULUS`, de modo que `newton_ratio` no
desborda lejos de las raíces; `evaluate` en cambio levanta
`EvaluationOverflow` si el valor mismo no es representable.
"""

ESCAPE_MODULUS = 1e60
SLOW_MODE_MAX_DEGREE = 2 ** 14
LEGENDRE_RESCALE = 2.0 ** 200
D4_GUARD = 1e-12
_PRODUCT_RESCALE = 2.0 ** 500


# ----------- Representaciones -----------
@dataclass(frozen=True)
class Coefficients:
    """Polinomio mónico por coeficientes, grado menor primero."""
    coeffs: tuple[Complex, ...]

    def __post_init__(self) -> None:
        if len(self.coeffs) < 2:
            raise PolyraceError("Un polinomio por coeficientes necesita grado >= 1")
        if self.coeffs[-1] != 1:
            raise PolyraceError("El polinomio por coeficientes debe ser mónico")


@dataclass(frozen=True)
class Roots:
    roots: tuple[Complex, ...]

    def __post_init__(self) -> None:
        if not self.roots:
            raise PolyraceError("La lista de raíces no puede estar vacía")


@dataclass(frozen=True)
class IterQuad:
    """P_{n,c}(z) = p_c^{∘n}(z) - z con p_c(z) = z^2 + c; grado 2^n."""
    c: Complex
    n: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise PolyraceError("IterQuad necesita n >= 1")


@dataclass(frozen=True)
class MandelCenter:
    """q_n(c): centros de componentes hiperbólicas de período n; grado 2^(n-1)."""
    n: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise PolyraceError("MandelCenter necesita n >= 1")


@dataclass(frozen=True)
class ChebyshevFast:
    """T_{2^k} por duplicación T_{2m} = 2 T_m^2 - 1."""
    k: int

    def __post_init__(self) -> None:
        if self.k < 0:
            raise PolyraceError("ChebyshevFast necesita k >= 0")


@dataclass(frozen=True)
class ChebyshevCoeff:
    """T_d en forma de coeficientes; guarda los coeficientes de T_d / 2^(d-1)."""
    d: int
    monic: tuple[Complex, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.d < 1:
            raise PolyraceError("ChebyshevCoeff necesita d >= 1")
        with np.errstate(over="ignore", invalid="ignore"):
            monic = _monic_tuple(npcheb.cheb2poly([0] * self.d + [1]))
        if not np.isfinite(monic).all():
            raise CoefficientOverflow(f"Los coeficientes de T_{self.d} no son representables")
        object.__setattr__(self, "monic", monic)


@dataclass(frozen=True)
class LegendreRec:
    d: int

    def __post_init__(self) -> None:
        if self.d < 1:
            raise PolyraceError("LegendreRec necesita d >= 1")


PolyRepr = Union[Coefficients, Roots, IterQuad, MandelCenter, ChebyshevFast, ChebyshevCoeff, LegendreRec]

FAST_REPRS = (IterQuad, MandelCenter, ChebyshevFast)


@dataclass(frozen=True)
class EvalOut:
    value: Complex
    deriv: Complex
    newton_ratio: Complex


# ----------- Funciones auxiliares -----------
def _monic_tuple(coeffs) -> tuple[Complex, ...]:
    arr = np.asarray(coeffs, dtype=complex)
    return tuple(complex(c) for c in arr / arr[-1])


def _checked(value: Complex, what: str = "valor") -> Complex:
    if not cmath.isfinite(value):
        raise EvaluationOverflow(f"El {what} del polinomio no es representable")
    return value


def _ldexp_complex(m: Complex, e: int) -> Complex:
    try:
        return complex(math.ldexp(m.real, e), math.ldexp(m.imag, e))
    except OverflowError as exc:
        raise EvaluationOverflow("El valor del polinomio no es representable") from exc


def _ratio(ctx: OpCounter, value: Complex, deriv: Complex) -> Complex:
    if value == 0:
        return 0j
    if deriv == 0:
        raise DerivativeZero("p'(z) = 0")
    return div(ctx, value, deriv)


def degree(poly: PolyRepr) -> int:
    match poly:
        case Coefficients(coeffs=coeffs):
            return len(coeffs) - 1
        case Roots(roots=roots):
            return len(roots)
        case IterQuad(n=n):
            return 2 ** n
        case MandelCenter(n=n):
            return 2 ** (n - 1)
        case ChebyshevFast(k=k):
            return 2 ** k
        case ChebyshevCoeff(d=d) | LegendreRec(d=d):
            return d
    raise PolyraceError(f"Representación desconocida: {poly!r}")


def leading_coefficient(poly: PolyRepr) -> float:
    """Coeficiente principal de la forma nativa (1 salvo Chebyshev y Legendre)."""
    d = degree(poly)
    try:
        if isinstance(poly, (ChebyshevFast, ChebyshevCoeff)):
            return math.ldexp(1.0, d - 1)
        if isinstance(poly, LegendreRec):
            return math.comb(2 * d, d) / 2 ** d
    except OverflowError:
        return math.inf
    return 1.0


def is_fast(poly: PolyRepr) -> bool:
    return isinstance(poly, FAST_REPRS)


# ----------- Evaluadores por representación -----------
def _horner_pair(ctx: OpCounter, coeffs: tuple[Complex, ...], z: Complex) -> tuple[Complex, Complex]:
    """Horner simultáneo para p y p'. Costo: 2d mul + 2d sumas complejas."""
    d = len(coeffs) - 1
    p = coeffs[d]
    dp = 0j
    for k in range(d - 1, -1, -1):
        dp = dp * z + p
        p = p * z + coeffs[k]
    ctx.charge(cmul=2 * d, cadd=2 * d)
    return p, dp


def _coefficients_ratio(ctx: OpCounter, coeffs: tuple[Complex, ...], z: Complex) -> Complex:
    """
    p/p' por coeficientes. Para |z| > 1 se usa el polinomio recíproco
    q(w) = w^d p(1/w), con p/p' = z q / (d q - w q'), que no desborda.
    """
    if max(abs(z.real), abs(z.imag)) <= 1.0:
        return _ratio(ctx, *_horner_pair(ctx, coeffs, z))
    d = len(coeffs) - 1
    w = recip(ctx, z)
    q, dq = _horner_pair(ctx, coeffs[::-1], w)
    num = z * q
    den = d * q - w * dq
    ctx.charge(cmul=2, cscale=1, cadd=1)
    return _ratio(ctx, num, den)


def _roots_parts(ctx: OpCounter, roots: tuple[Complex, ...], z: Complex) -> tuple[Complex, Complex]:
    """
    Valor y derivada desde las raíces. El producto mantiene mantisa y
    exponente por separado para sobrevivir grados altos.
    """
    mant = 1 + 0j
    exp2 = 0
    hit = None
    recip_sum = 0j
    for i, xi in enumerate(roots):
        diff = z - xi
        if diff == 0:
            hit = i
            continue
        mant *= diff
        recip_sum += 1.0 / diff
        size = max(abs(mant.real), abs(mant.imag))
        if size > _PRODUCT_RESCALE or 0.0 < size < 1.0 / _PRODUCT_RESCALE:
            _, e = math.frexp(size)
            mant = complex(math.ldexp(mant.real, -e), math.ldexp(mant.imag, -e))
            exp2 += e
    d = len(roots)
    ctx.charge(cadd=2 * d, cmul=d, crecip=d)
    if hit is not None:
        # z es raíz: p(z) = 0 y p'(z) es el producto de las demás diferencias
        return 0j, _ldexp_complex(mant, exp2)
    value = _ldexp_complex(mant, exp2)
    ctx.charge(cmul=1)
    return value, _checked(value * recip_sum, "derivada")


def _roots_ratio(ctx: OpCounter, roots: tuple[Complex, ...], z: Complex) -> Complex:
    """p/p' = (Σ 1/(z-ξ_i))^{-1}; no necesita el valor."""
    total = 0j
    for xi in roots:
        diff = z - xi
        if diff == 0:
            return 0j
        total += 1.0 / diff
    d = len(roots)
    ctx.charge(cadd=2 * d - 1, crecip=d)
    if total == 0:
        raise DerivativeZero("La suma de recíprocos es cero")
    return recip(ctx, total)


def _escape_ratio(ctx: OpCounter, w: Complex, dw: Complex, remaining: int) -> Complex:
    """Régimen asintótico de las formas rápidas: cada duplicación divide p/p' por 2."""
    r = div(ctx, w, dw)
    ctx.charge(cscale=1)
    return complex(math.ldexp(r.real, -remaining), math.ldexp(r.imag, -remaining))


def _iter_quad(ctx: OpCounter, poly: IterQuad, z: Complex, escape: float):
    """Devuelve (valor, derivada, None) o (None, None, ratio) si entró al régimen asintótico."""
    c = poly.c
    w = z
    dw = 1 + 0j
    for k in range(poly.n):
        if abs(w) > escape:
            ctx.charge(cmul=2 * k, cscale=k, cadd=k)
            return None, None, _escape_ratio(ctx, w, dw, poly.n - k)
        dw = 2 * (w * dw)
        w = w * w + c
    n = poly.n
    ctx.charge(cmul=2 * n, cscale=n, cadd=n + 1, radd=1)
    return w - z, dw - 1, None


def _mandel_center(ctx: OpCounter, poly: MandelCenter, c: Complex, escape: float):
    q = 0j
    dq = 0j
    for k in range(poly.n):
        if abs(q) > escape:
            ctx.charge(cmul=2 * k, cscale=k, cadd=k, radd=k)
            return None, None, _escape_ratio(ctx, q, dq, poly.n - k)
        dq = 2 * (q * dq) + 1
        q = q * q + c
    n = poly.n
    ctx.charge(cmul=2 * n, cscale=n, cadd=n, radd=n)
    return q, dq, None


def _chebyshev_fast(ctx: OpCounter, poly: ChebyshevFast, x: Complex, escape: float):
    t = x
    dt = 1 + 0j
    for k in range(poly.k):
        if abs(t) > escape:
            ctx.charge(cmul=2 * k, cscale=2 * k, radd=k)
            return None, None, _escape_ratio(ctx, t, dt, poly.k - k)
        dt = 4 * (t * dt)
        t = 2 * (t * t) - 1
    k = poly.k
    ctx.charge(cmul=2 * k, cscale=2 * k, radd=k)
    return t, dt, None


def _legendre(ctx: OpCounter, d: int, z: Complex) -> tuple[Complex, Complex, int]:
    """
    P_d y P_{d-1} por (m+1) P_{m+1} = (2m+1) z P_m - m P_{m-1}, reescalando
    ambos por potencias de dos. Devuelve (P_d, P_{d-1}, exponente).
    """
    prev, cur = 1 + 0j, z
    exp2 = 0
    for m in range(1, d):
        nxt = ((2 * m + 1) * (z * cur) - m * prev) / (m + 1)
        prev, cur = cur, nxt
        size = max(abs(cur.real), abs(cur.imag))
        if size > LEGENDRE_RESCALE:
            _, e = math.frexp(size)
            prev = complex(math.ldexp(prev.real, -e), math.ldexp(prev.imag, -e))
            cur = complex(math.ldexp(cur.real, -e), math.ldexp(cur.imag, -e))
            exp2 += e
    steps = d - 1
    ctx.charge(cmul=steps, cscale=3 * steps, cadd=steps)
    return cur, prev, exp2


def _legendre_deriv(ctx: OpCounter, d: int, z: Complex, p_d: Complex, p_prev: Complex) -> Complex:
    """(z^2-1) P'_d = d (z P_d - P_{d-1}); cerca de ±1 usa P'_{m+1} = P'_{m-1} + (2m+1) P_m."""
    z2m1 = z * z - 1
    ctx.charge(cmul=1, radd=1)
    if abs(z2m1) >= D4_GUARD:
        num = d * (z * p_d - p_prev)
        ctx.charge(cmul=1, cadd=1, cscale=1)
        return div(ctx, num, z2m1)
    # recurrencia de la derivada, sin reescalar (|z| ~ 1)
    p_prev2, p_cur = 1 + 0j, z
    dp_prev, dp_cur = 0j, 1 + 0j
    for m in range(1, d):
        p_next = ((2 * m + 1) * (z * p_cur) - m * p_prev2) / (m + 1)
        dp_next = dp_prev + (2 * m + 1) * p_cur
        p_prev2, p_cur = p_cur, p_next
        dp_prev, dp_cur = dp_cur, dp_next
    ctx.charge(cmul=d - 1, cscale=4 * (d - 1), cadd=2 * (d - 1))
    return dp_cur


# ----------- Operaciones públicas -----------
def evaluate(ctx: OpCounter, poly: PolyRepr, z: Complex) -> EvalOut:
    """
    Devuelve p(z), p'(z) y p(z)/p'(z) con el esquema nativo de la representación.
    Levanta `EvaluationOverflow` si el valor no es representable y
    `DerivativeZero` si p'(z) = 0 con p(z) != 0.
    """
    z = complex(z)
    match poly:
        case Coefficients(coeffs=coeffs):
            value, deriv = _horner_pair(ctx, coeffs, z)
        case Roots(roots=roots):
            value, deriv = _roots_parts(ctx, roots, z)
        case IterQuad():
            value, deriv, _ = _iter_quad(ctx, poly, z, math.inf)
        case MandelCenter():
            value, deriv, _ = _mandel_center(ctx, poly, z, math.inf)
        case ChebyshevFast():
            value, deriv, _ = _chebyshev_fast(ctx, poly, z, math.inf)
        case ChebyshevCoeff(d=d, monic=monic):
            mv, md = _horner_pair(ctx, monic, z)
            lead = math.ldexp(1.0, d - 1)
            value, deriv = mv * lead, md * lead
            ctx.charge(cscale=2)
        case LegendreRec(d=d):
            p_d, p_prev, exp2 = _legendre(ctx, d, z)
            deriv = _ldexp_complex(_legendre_deriv(ctx, d, z, p_d, p_prev), exp2)
            value = _ldexp_complex(p_d, exp2)
        case _:
            raise PolyraceError(f"Representación desconocida: {poly!r}")
    value = _checked(value)
    deriv = _checked(deriv, "derivada")
    return EvalOut(value=value, deriv=deriv, newton_ratio=_ratio(ctx, value, deriv))


def newton_ratio(ctx: OpCounter, poly: PolyRepr, z: Complex) -> Complex:
    """
    p(z)/p'(z) sin pasar necesariamente por el valor: la forma por raíces usa
    solo la suma de recíprocos y las formas rápidas el régimen asintótico.
    Devuelve 0 si p(z) = 0; levanta `DerivativeZero` si p'(z) = 0.
    """
    z = complex(z)
    match poly:
        case Coefficients(coeffs=coeffs):
            return _coefficients_ratio(ctx, coeffs, z)
        case Roots(roots=roots):
            return _roots_ratio(ctx, roots, z)
        case ChebyshevCoeff(monic=monic):
            return _coefficients_ratio(ctx, monic, z)
        case IterQuad():
            value, deriv, r = _iter_quad(ctx, poly, z, ESCAPE_MODULUS)
        case MandelCenter():
            value, deriv, r = _mandel_center(ctx, poly, z, ESCAPE_MODULUS)
        case ChebyshevFast():
            value, deriv, r = _chebyshev_fast(ctx, poly, z, ESCAPE_MODULUS)
        case LegendreRec(d=d):
            p_d, p_prev, _ = _legendre(ctx, d, z)
            return _ratio(ctx, p_d, _legendre_deriv(ctx, d, z, p_d, p_prev))
        case _:
            raise PolyraceError(f"Representación desconocida: {poly!r}")
    if r is not None:
        return r
    return _ratio(ctx, value, deriv)


def expand_to_coefficients(poly: PolyRepr) -> Coefficients:
    """
    Materializa el polinomio como coeficientes mónicos (evaluación "lenta").
    Solo hasta grado 2^14; levanta `CoefficientOverflow` si algún coeficiente
    no es representable (esperable para IterQuad con grado alto).
    """
    if isinstance(poly, Coefficients):
        return poly
    d = degree(poly)
    if d > SLOW_MODE_MAX_DEGREE:
        raise DegreeTooLarge(f"Grado {d} excede el máximo {SLOW_MODE_MAX_DEGREE} para expandir")

    with np.errstate(over="ignore", invalid="ignore"):
        match poly:
            case Roots(roots=roots):
                coeffs = np.poly(np.asarray(roots, dtype=complex))[::-1]
            case IterQuad(c=c, n=n):
                coeffs = np.array([0, 1], dtype=complex)
                for _ in range(n):
                    coeffs = nppoly.polymul(coeffs, coeffs)
                    coeffs[0] += c
                coeffs[1] -= 1
            case MandelCenter(n=n):
                coeffs = np.array([0], dtype=complex)
                for _ in range(n):
                    coeffs = nppoly.polyadd(nppoly.polymul(coeffs, coeffs), [0, 1])
            case ChebyshevFast() | ChebyshevCoeff():
                coeffs = npcheb.cheb2poly([0] * d + [1]).astype(complex)
            case LegendreRec():
                coeffs = npleg.leg2poly([0] * d + [1]).astype(complex)
            case _:
                raise PolyraceError(f"Representación desconocida: {poly!r}")

        if not np.all(np.isfinite(coeffs)):
            raise CoefficientOverflow(f"Los coeficientes de {poly!r} no son representables")
        return Coefficients(coeffs=_monic_tuple(coeffs))
