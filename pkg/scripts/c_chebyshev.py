import os
import sys

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from polyrace.config import Config
from polyrace.families import parse_family_spec
from polyrace.harness import ExperimentSpec, Runner

#-------------------------------------------------------------------------------------------------------
# Este script corre el experimento de Chebyshev T_d con d = 2^k.
# La forma rápida usa T_{2m} = 2 T_m^2 - 1 (k duplicaciones); la lenta, los coeficientes mónicos.
# Las raíces son conocidas (cos((2j-1)π/(2d))), así que Ehrlich–Aberth corre en modo reference.
#-------------------------------------------------------------------------------------------------------

cfg = Config.from_env()
FAST_DEGREES = [2 ** k for k in range(4, 11)]
SLOW_DEGREES = [2 ** k for k in range(4, 8)]  # los coeficientes de T_d crecen como 2^d


def main():
    runner = Runner(cfg)
    family = parse_family_spec("cheb")
    runner.run_experiment(ExperimentSpec(family=family, degrees=FAST_DEGREES, methods=["newton", "aberth"],
                                         eval_mode="fast", out_path=os.path.join(cfg.out_dir, "cheb_fast.csv")))
    runner.run_experiment(ExperimentSpec(family=family, degrees=SLOW_DEGREES, methods=["newton", "aberth"],
                                         eval_mode="slow", out_path=os.path.join(cfg.out_dir, "cheb_slow.csv")))

    runner.print_slopes(["newton", "aberth"], eval_mode="fast")
    runner.print_summary()


if __name__ == "__main__":
    main()

# correr script desde terminal con
# python scripts/c_chebyshev.py
