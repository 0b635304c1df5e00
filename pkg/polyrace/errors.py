"""
Excepciones de polyrace

Todas las excepciones del paquete derivan de `PolyraceError` (que a su vez es un
`ValueError`, igual que los errores de validación del resto del proyecto). Las
fallas aritméticas además derivan de `ArithmeticError` para poder capturarlas
junto con los errores numéricos de Python.

Agrupación:
- Aritmética contada: `DivisionByZero`, `EvaluationOverflow`, `DerivativeZero`.
- Polinomios y familias: `CoefficientOverflow`, `DegreeTooLarge`,
  `DegreeTooLargeForSlowMode`, `UnsupportedEvalMode`, `InvalidFamilySpec`.
- Solvers: `DegenerateTriple`, `OrbitBudgetExceeded`, `CoordinateCollision`,
  `ZeroDenominator`, `MaxSweepsExceeded`.
- Harness: `InsufficientData`, `BothFailed`, `InvalidExperimentSpec`.
- Verificación: `NonFiniteInput`.
"""


class PolyraceError(ValueError):
    """Base de todos los errores del paquete."""


class NumericError(PolyraceError, ArithmeticError):
    """Base de los errores aritméticos."""


class DivisionByZero(NumericError):
    pass


class EvaluationOverflow(NumericError):
    """El valor del polinomio no es representable en doble precisión."""


class DerivativeZero(NumericError):
    """p'(z) = 0 con p(z) != 0: el paso de Newton no está definido."""


class CoefficientOverflow(NumericError):
    """Algún coeficiente de la expansión excede el rango representable."""


class DegreeTooLarge(PolyraceError):
    pass


class DegreeTooLargeForSlowMode(DegreeTooLarge):
    pass


class UnsupportedEvalMode(PolyraceError):
    pass


class InvalidFamilySpec(PolyraceError):
    pass


class InvalidExperimentSpec(PolyraceError):
    pass


class DegenerateTriple(PolyraceError):
    """Dos órbitas vecinas coinciden y la razón cruzada no está definida."""


class OrbitBudgetExceeded(PolyraceError):
    pass


class CoordinateCollision(PolyraceError):
    """Dos coordenadas del vector de Ehrlich–Aberth están a menos de collision_eps."""

    def __init__(self, index: int, other: int) -> None:
        super().__init__(f"Coordenadas {index} y {other} colisionan")
        self.index = index
        self.other = other


class ZeroDenominator(NumericError):
    """La carga neta de la corrección de Ehrlich–Aberth es cero."""


class MaxSweepsExceeded(PolyraceError):
    pass


class InsufficientData(PolyraceError):
    pass


class BothFailed(PolyraceError):
    pass


class NonFiniteInput(PolyraceError):
    """Aproximaciones o raíces de referencia con NaN o infinito."""
