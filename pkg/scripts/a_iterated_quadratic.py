import os
import sys

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from polyrace.config import Config
from polyrace.families import parse_family_spec
from polyrace.harness import ExperimentSpec, Runner

#-------------------------------------------------------------------------------------------------------
# Este script corre el experimento de los cuadráticos iterados P_{n,c}(z) = p_c^n(z) - z con c = i.
# Compara Newton con refinamiento iterado y Ehrlich–Aberth, cada uno con evaluación rápida
# (recursión w <- w^2 + c, costo O(n)) y lenta (forma de coeficientes, Horner O(2^n)).
# Al final imprime la pendiente log-log de cada combinación y guarda dos CSV en data/results.
#-------------------------------------------------------------------------------------------------------

# --------- CONFIGURACIÓN ---------
cfg = Config.from_env()
FAMILY = "iterquad:c=0+1i"
DEGREES = list(range(4, 11))  # n = 4..10, grado 2^n
SLOW_DEGREES = list(range(4, 9))  # la forma de coeficientes es cara: se corta en 2^8


def main():
    runner = Runner(cfg)
    family = parse_family_spec(FAMILY)
    for mode, degrees in (("fast", DEGREES), ("slow", SLOW_DEGREES)):
        out = os.path.join(cfg.out_dir, f"iterquad_{mode}.csv")
        spec = ExperimentSpec(family=family, degrees=degrees, methods=["newton", "aberth"], eval_mode=mode,
                              out_path=out)
        runner.run_experiment(spec)

    # Pendientes log-log por método y modo de evaluación
    print("\n--------- Pendientes log-log ---------")
    for mode in ("fast", "slow"):
        runner.print_slopes(["newton", "aberth"], eval_mode=mode)
    runner.print_summary()


if __name__ == "__main__":
    main()

# correr script desde terminal con
# python scripts/a_iterated_quadratic.py
