import os
import sys

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from polyrace.config import Config
from polyrace.families import parse_family_spec
from polyrace.harness import ExperimentSpec, Runner

#-------------------------------------------------------------------------------------------------------
# Este script resuelve los polinomios de Legendre P_d evaluados con la recurrencia de tres términos
# (costo O(d) por evaluación, sin fórmula rápida). Las raíces son reales y se agrupan hacia ±1.
# También corre el método hybrid: Newton primero y Ehrlich–Aberth sobre lo que falte.
#-------------------------------------------------------------------------------------------------------

cfg = Config.from_env()
DEGREES = [2 ** k for k in range(4, 9)]


def main():
    runner = Runner(cfg)
    spec = ExperimentSpec(family=parse_family_spec("legendre"), degrees=DEGREES,
                          methods=["newton", "aberth", "hybrid"],
                          out_path=os.path.join(cfg.out_dir, "legendre.csv"))
    runner.run_experiment(spec)
    runner.print_summary()


if __name__ == "__main__":
    main()

# correr script desde terminal con
# python scripts/d_legendre.py
