import os
import sys

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from polyrace.config import Config
from polyrace.families import default_degrees, parse_family_spec
from polyrace.harness import ExperimentSpec, Runner

#-------------------------------------------------------------------------------------------------------
# Este script resuelve el polinomio cuyas raíces son la grilla {1..n} + i{1..n}, recentrada y
# reescalada al disco unidad (grado n²). La mayoría de las raíces queda en el interior de la
# cápsula convexa, así que Ehrlich–Aberth debería terminar con menos operaciones que Newton.
#-------------------------------------------------------------------------------------------------------

cfg = Config.from_env()
DEGREES = [n for n in default_degrees("grid") if n <= 20]  # n = 4, 6, 9, 13, 20


def main():
    runner = Runner(cfg)
    reports = runner.run_experiment(ExperimentSpec(family=parse_family_spec("grid"), degrees=DEGREES,
                                                   methods=["newton", "aberth"],
                                                   out_path=os.path.join(cfg.out_dir, "grid.csv")))
    # comparación directa por grado
    by_degree = {}
    for rep in reports:
        by_degree.setdefault(rep.degree, {})[rep.method] = rep.total_ops
    for d, ops in by_degree.items():
        faster = min(ops, key=ops.get)
        print(f"d={d:<5} newton={ops.get('newton')} aberth={ops.get('aberth')} -> más rápido: {faster}")
    runner.print_summary()


if __name__ == "__main__":
    main()

# correr script desde terminal con
# python scripts/g_grid.py
