import os
import sys

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from polyrace.config import Config
from polyrace.families import parse_family_spec
from polyrace.harness import ExperimentSpec, Runner

#-------------------------------------------------------------------------------------------------------
# Este script resuelve polinomios con d raíces uniformes sobre el círculo unidad, dados en forma
# de raíces (producto ∏(z - α_j)). La semilla sale de POLYRACE_SEED para que el CSV sea reproducible.
# Además de newton y aberth corre el modo race (tajadas iguales de operaciones para ambos).
#-------------------------------------------------------------------------------------------------------

cfg = Config.from_env()
DEGREES = [2 ** k for k in range(4, 10)]


def main():
    runner = Runner(cfg)
    spec = ExperimentSpec(family=parse_family_spec(f"randcircle:seed={cfg.seed}"), degrees=DEGREES,
                          methods=["newton", "aberth", "race"],
                          out_path=os.path.join(cfg.out_dir, "randcircle.csv"))
    reports = runner.run_experiment(spec)
    runner.print_slopes(["newton", "aberth"])
    # quién ganó cada carrera
    for rep in (r for r in reports if r.method == "race"):
        print(f"race d={rep.degree}: ganador={rep.winner} ops={rep.total_ops}")
    runner.print_summary()


if __name__ == "__main__":
    main()

# correr script desde terminal con
# python scripts/e_random_circle.py
