import os
import sys

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from polyrace.config import Config
from polyrace.families import parse_family_spec
from polyrace.harness import ExperimentSpec, Runner

#-------------------------------------------------------------------------------------------------------
# Este script resuelve los polinomios de centros de Mandelbrot q_n(c), con q_1 = c y q_{k+1} = q_k^2 + c,
# de grado 2^(n-1). Sus raíces no se conocen en forma cerrada, así que la verificación es a posteriori
# (raíces separadas por más de 2δ y residuo chico).
# Guarda data/results/mandel.csv e imprime la pendiente log-log de cada método.
#-------------------------------------------------------------------------------------------------------

cfg = Config.from_env()
DEGREES = list(range(4, 11))  # n = 4..10, grado 2^(n-1)


def main():
    runner = Runner(cfg)
    spec = ExperimentSpec(family=parse_family_spec("mandel"), degrees=DEGREES, methods=["newton", "aberth"],
                          out_path=os.path.join(cfg.out_dir, "mandel.csv"))
    runner.run_experiment(spec)
    runner.print_slopes(spec.methods)
    runner.print_summary()


if __name__ == "__main__":
    main()

# correr script desde terminal con
# python scripts/b_mandelbrot_centers.py
