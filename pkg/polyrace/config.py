from __future__ import annotations
import os
from dataclasses import dataclass
from typing import Optional

from dotenv import load_dotenv

from .aberth_solver import AberthConfig
from .newton_solver import NewtonConfig

"""
Configuración de polyrace

Este módulo define la dataclass `Config`, que junta los parámetros de los
solvers y del harness. Los valores se leen desde variables de entorno (o de un
`.env` local cargado con python-dotenv), así los scripts del pipeline y la CLI
corren igual en cualquier máquina.

Los radios de arranque son relativos: el círculo de Newton tiene radio
`start_radius · root_bound` y el de Ehrlich–Aberth `ea_radius_factor · root_bound`,
con `root_bound` el radio que encierra las raíces de la familia.
"""


@dataclass
class Config:
    """
    Clase con la configuración de una corrida.
    Los campos tienen los mismos defaults que las variables POLYRACE_*.
    """
    # Tolerancias
    eps: float = 1e-13  # ε: paso mínimo para declarar convergencia
    delta: float = 1e-8  # δ: tolerancia de emparejamiento y separación de raíces
    seed: int = 7  # semilla de las familias aleatorias

    # Newton
    start_radius: float = 3.0  # múltiplo de root_bound
    initial_orbits: int = 64
    refine_threshold: float = 0.05
    max_steps: int = 20000
    max_orbits: int = 65536

    # Ehrlich–Aberth
    ea_style: str = "gauss_seidel"
    ea_radius_factor: float = 1.1  # múltiplo de root_bound
    max_sweeps: int = 500

    # Harness
    race_budget: int = 100000  # operaciones por turno en el modo race
    out_dir: str = "data/results"
    log_level: str = "WARNING"
    record_wall_time: bool = False  # con False wall_ms queda en 0.0 y el CSV es reproducible

    @classmethod
    def from_env(cls) -> "Config":
        """
        Carga una instancia de Config leyendo las variables de entorno.
        Esto es lo que usan `main.py` y los scripts al inicio.
        """
        load_dotenv()
        return cls(
            eps=float(os.getenv("POLYRACE_EPS", "1e-13")),
            delta=float(os.getenv("POLYRACE_DELTA", "1e-8")),
            seed=int(os.getenv("POLYRACE_SEED", "7")),
            start_radius=float(os.getenv("POLYRACE_START_RADIUS", "3.0")),
            initial_orbits=int(os.getenv("POLYRACE_INITIAL_ORBITS", "64")),
            refine_threshold=float(os.getenv("POLYRACE_REFINE_THRESHOLD", "0.05")),
            max_steps=int(os.getenv("POLYRACE_MAX_STEPS", "20000")),
            max_orbits=int(os.getenv("POLYRACE_MAX_ORBITS", "65536")),
            ea_style=os.getenv("POLYRACE_EA_STYLE", "gauss_seidel"),
            ea_radius_factor=float(os.getenv("POLYRACE_EA_RADIUS_FACTOR", "1.1")),
            max_sweeps=int(os.getenv("POLYRACE_MAX_SWEEPS", "500")),
            race_budget=int(os.getenv("POLYRACE_RACE_BUDGET", "100000")),
            out_dir=os.getenv("POLYRACE_OUT_DIR", "data/results"),
            log_level=os.getenv("POLYRACE_LOG_LEVEL", "WARNING").upper(),
            record_wall_time=os.getenv("POLYRACE_RECORD_WALL_TIME", "0").lower() in ("1", "true", "yes"),
        )

    def to_env(self) -> dict[str, str]:
        """Variables POLYRACE_* que reproducen esta configuración en un proceso hijo."""
        return {
            "POLYRACE_EPS": repr(self.eps),
            "POLYRACE_DELTA": repr(self.delta),
            "POLYRACE_SEED": str(self.seed),
            "POLYRACE_START_RADIUS": repr(self.start_radius),
            "POLYRACE_INITIAL_ORBITS": str(self.initial_orbits),
            "POLYRACE_REFINE_THRESHOLD": repr(self.refine_threshold),
            "POLYRACE_MAX_STEPS": str(self.max_steps),
            "POLYRACE_MAX_ORBITS": str(self.max_orbits),
            "POLYRACE_EA_STYLE": self.ea_style,
            "POLYRACE_EA_RADIUS_FACTOR": repr(self.ea_radius_factor),
            "POLYRACE_MAX_SWEEPS": str(self.max_sweeps),
            "POLYRACE_RACE_BUDGET": str(self.race_budget),
            "POLYRACE_OUT_DIR": self.out_dir,
            "POLYRACE_LOG_LEVEL": self.log_level,
            "POLYRACE_RECORD_WALL_TIME": "1" if self.record_wall_time else "0",
        }

    def newton_config(self, root_bound: float = 1.0) -> NewtonConfig:
        return NewtonConfig(
            start_radius=self.start_radius * root_bound,
            initial_orbits=self.initial_orbits,
            refine_threshold=self.refine_threshold,
            max_steps=self.max_steps,
            conv_eps=self.eps,
            sep_delta=self.delta,
            max_orbits=self.max_orbits,
        )

    def aberth_config(self, root_bound: float = 1.0, reference: Optional[list[complex]] = None) -> AberthConfig:
        """Modo reference si hay raíces conocidas, step_size si no."""
        return AberthConfig(
            style=self.ea_style,
            start_radius=self.ea_radius_factor * root_bound,
            max_sweeps=self.max_sweeps,
            stop_mode="reference" if reference else "step_size",
            eps=self.eps,
            delta=self.delta,
            reference=list(reference) if reference else None,
        )
