from __future__ import annotations
import glob
import io
import math
import os
from typing import Iterable, List, Optional

import pandas as pd
from pydantic import BaseModel, model_validator

"""
Reportes de corridas y formato CSV de los benchmarks

`SolveReport` es el resultado de cualquier método (newton, aberth, hybrid,
race); `BenchRow` es su versión plana, una fila del CSV. El orden de columnas
es fijo para que cualquier herramienta externa pueda graficar los resultados.
"""

CSV_COLUMNS = [
    "family", "degree", "method", "eval_mode", "seed", "real_adds", "real_muls", "iters",
    "roots_found", "expected", "max_residual", "matched", "wall_ms",
]


class SolveReport(BaseModel):
    """
    Resultado de una corrida:
    - iterations: pasos globales (newton) o barridos (aberth)
    - roots_found <= expected_roots; matched implica missed = 0
    """
    method: str
    degree: int
    expected_roots: int
    real_adds: int = 0
    real_muls: int = 0
    iterations: int = 0
    roots_found: int = 0
    max_residual: float = math.inf
    matched: bool = False
    missed: int = 0
    wall_ms: float = 0.0
    roots: List[complex] = []
    stop_reason: str = ""
    winner: Optional[str] = None
    cycle_detected: bool = False
    error: Optional[str] = None

    @model_validator(mode="after")
    def _consistent(self) -> "SolveReport":
        if self.roots_found > self.expected_roots:
            raise ValueError("roots_found no puede superar expected_roots")
        if self.matched and self.missed:
            raise ValueError("Un reporte matched no puede tener raíces perdidas")
        return self

    @property
    def total_ops(self) -> int:
        return self.real_adds + self.real_muls


class BenchRow(BaseModel):
    family: str
    degree: int
    method: str
    eval_mode: str
    seed: int
    real_adds: int
    real_muls: int
    iters: int
    roots_found: int
    expected: int
    max_residual: float
    matched: bool
    wall_ms: float

    @property
    def total_ops(self) -> int:
        return self.real_adds + self.real_muls


def to_row(report: SolveReport, *, family: str, eval_mode: str, seed: int) -> BenchRow:
    return BenchRow(
        family=family,
        degree=report.degree,
        method=report.method,
        eval_mode=eval_mode,
        seed=seed,
        real_adds=report.real_adds,
        real_muls=report.real_muls,
        iters=report.iterations,
        roots_found=report.roots_found,
        expected=report.expected_roots,
        max_residual=report.max_residual,
        matched=report.matched,
        wall_ms=report.wall_ms,
    )


def rows_to_frame(rows: Iterable[BenchRow]) -> pd.DataFrame:
    return pd.DataFrame([r.model_dump() for r in rows], columns=CSV_COLUMNS)


def emit_csv(rows: Iterable[BenchRow], path: Optional[str] = None) -> str:
    """
    Escribe las filas con pandas en el orden de columnas fijo. Devuelve el
    texto CSV; si se da `path` también lo guarda (creando la carpeta).
    """
    text = rows_to_frame(rows).to_csv(index=False, lineterminator="\n")
    if path:
        os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(text)
    return text


def parse_csv(source: str) -> list[BenchRow]:
    """Lee un CSV (ruta o texto) y lo convierte de vuelta en `BenchRow`."""
    if os.path.exists(source):
        df = pd.read_csv(source, dtype={"family": str, "method": str, "eval_mode": str})
    else:
        df = pd.read_csv(io.StringIO(source), dtype={"family": str, "method": str, "eval_mode": str})
    missing = [c for c in CSV_COLUMNS if c not in df.columns]
    if missing:
        raise ValueError(f"Faltan columnas en el CSV: {missing}")
    rows = []
    for rec in df[CSV_COLUMNS].to_dict("records"):
        # escalares de numpy -> tipos nativos
        rows.append(BenchRow(**{k: (v.item() if hasattr(v, "item") else v) for k, v in rec.items()}))
    return rows


def summarize_results(out_dir: str) -> dict[str, pd.DataFrame]:
    """
    Resume cada CSV de benchmark de `out_dir` agrupando por método: corridas,
    verificadas, grado máximo y operaciones totales. Los CSV con otras
    columnas (la tabla de la cápsula convexa) se omiten.
    """
    summary = {}
    for path in sorted(glob.glob(os.path.join(out_dir, "*.csv"))):
        try:
            rows = parse_csv(path)
        except ValueError:
            continue
        if not rows:
            continue
        df = rows_to_frame(rows)
        df["total_ops"] = df["real_adds"] + df["real_muls"]
        summary[os.path.basename(path)] = df.groupby("method").agg(
            runs=("degree", "size"), matched=("matched", "sum"), max_degree=("degree", "max"),
            total_ops=("total_ops", "sum"))
    return summary
