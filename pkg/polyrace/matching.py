from __future__ import annotations
import math
from typing import Dict, List, Sequence

import numpy as np
from pydantic import BaseModel
from scipy.spatial import cKDTree

from .errors import NonFiniteInput

"""
Verificación de conjuntos de raíces

- `match_roots`: criterio "salvo permutación, |z_i - α_i| < δ". Emparejamiento
  greedy por la arista global más corta entre aproximaciones y referencias,
  con los pares candidatos (distancia < δ) obtenidos de un `cKDTree`.
- `a_posteriori_check`: para familias sin raíces de referencia; acepta cuando
  hay exactamente `degree` aproximaciones separadas por más de 2δ y con
  residuo pequeño.
- `RootCollector`: agrupa aproximaciones a menos de 2δ en una grilla hash.

Nada de lo que pasa acá se cuenta en el `OpCounter`: es verificación, no
trabajo del solver.
"""

RESIDUAL_TOL = 1e-6


class MatchedPair(BaseModel):
    approx_index: int
    reference_index: int
    distance: float


class MatchResult(BaseModel):
    pairs: List[MatchedPair]
    unmatched_approx: List[int]
    unmatched_reference: List[int]

    @property
    def success(self) -> bool:
        return not self.unmatched_reference

    @property
    def missed(self) -> int:
        return len(self.unmatched_reference)


def _as_points(values: Sequence[complex]) -> np.ndarray:
    arr = np.asarray(values, dtype=complex).reshape(-1)
    return np.column_stack([arr.real, arr.imag])


def match_roots(approx: Sequence[complex], reference: Sequence[complex], delta: float) -> MatchResult:
    """
    Empareja de a uno el par (aproximación, referencia) más cercano con
    distancia < δ, los retira y repite. El resultado es inyectivo en ambos
    sentidos; es exitoso si no queda ninguna referencia sin pareja.
    Levanta `NonFiniteInput` si algún valor es NaN o infinito.
    """
    n_a, n_r = len(approx), len(reference)
    if n_a == 0 or n_r == 0:
        return MatchResult(pairs=[], unmatched_approx=list(range(n_a)), unmatched_reference=list(range(n_r)))

    pts_a, pts_r = _as_points(approx), _as_points(reference)
    if not (np.isfinite(pts_a).all() and np.isfinite(pts_r).all()):
        raise NonFiniteInput("match_roots recibió valores no finitos")
    neighbours = cKDTree(pts_a).query_ball_tree(cKDTree(pts_r), r=delta)
    candidates = []
    for i, js in enumerate(neighbours):
        for j in js:
            dist = float(np.hypot(*(pts_a[i] - pts_r[j])))
            if dist < delta:
                candidates.append((dist, i, j))
    # orden estable: distancia y luego índices
    candidates.sort()

    used_a: set[int] = set()
    used_r: set[int] = set()
    pairs: list[MatchedPair] = []
    for dist, i, j in candidates:
        if i in used_a or j in used_r:
            continue
        used_a.add(i)
        used_r.add(j)
        pairs.append(MatchedPair(approx_index=i, reference_index=j, distance=dist))

    return MatchResult(
        pairs=pairs,
        unmatched_approx=[i for i in range(n_a) if i not in used_a],
        unmatched_reference=[j for j in range(n_r) if j not in used_r],
    )


def separated(values: Sequence[complex], delta: float) -> bool:
    """True si todos los pares están a más de 2δ."""
    if len(values) < 2:
        return True
    return not cKDTree(_as_points(values)).query_pairs(r=2.0 * delta)


def a_posteriori_check(values: Sequence[complex], residuals: Sequence[float], degree: int, delta: float,
                       residual_tol: float = RESIDUAL_TOL) -> bool:
    if len(values) != degree:
        return False
    if any(not (r < residual_tol) for r in residuals):
        return False
    return separated(values, delta)


class RootCollector:
    """
    Agrupa extremos de órbitas convergidas con radio 2δ usando una grilla de
    celdas de lado 2δ; los centros quedan separados por más de 2δ.
    """

    def __init__(self, delta: float) -> None:
        self.radius = 2.0 * delta
        self.cells: Dict[tuple[int, int], List[int]] = {}
        self.centers: List[complex] = []
        self.residuals: List[float] = []
        self.hits: List[int] = []

    def _cell(self, z: complex) -> tuple[int, int]:
        return math.floor(z.real / self.radius), math.floor(z.imag / self.radius)

    def locate(self, z: complex, residual: float) -> tuple[int, bool]:
        """Registra z y devuelve (índice de su cluster, si el cluster es nuevo)."""
        cx, cy = self._cell(z)
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                for idx in self.cells.get((cx + dx, cy + dy), ()):
                    if abs(z - self.centers[idx]) < self.radius:
                        self.hits[idx] += 1
                        self.residuals[idx] = max(self.residuals[idx], residual)
                        return idx, False
        idx = len(self.centers)
        self.cells.setdefault((cx, cy), []).append(idx)
        self.centers.append(z)
        self.residuals.append(residual)
        self.hits.append(1)
        return idx, True

    def add(self, z: complex, residual: float) -> bool:
        """Devuelve True si z abre un cluster nuevo."""
        return self.locate(z, residual)[1]

    def __len__(self) -> int:
        return len(self.centers)
