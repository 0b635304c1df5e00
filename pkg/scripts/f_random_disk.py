import os
import sys

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from polyrace.config import Config
from polyrace.families import parse_family_spec
from polyrace.harness import ExperimentSpec, Runner

#-------------------------------------------------------------------------------------------------------
# Este script resuelve polinomios con raíces r·e^{iφ}, (r, φ) uniformes: las raíces se concentran
# cerca del centro del disco, lejos de la cápsula convexa. Es el caso donde Newton desde un círculo
# grande sufre y Ehrlich–Aberth lleva ventaja.
#-------------------------------------------------------------------------------------------------------

cfg = Config.from_env()
DEGREES = [2 ** k for k in range(4, 10)]


def main():
    runner = Runner(cfg)
    spec = ExperimentSpec(family=parse_family_spec(f"randdisk:seed={cfg.seed}"), degrees=DEGREES,
                          methods=["newton", "aberth"], out_path=os.path.join(cfg.out_dir, "randdisk.csv"))
    runner.run_experiment(spec)
    runner.print_slopes(spec.methods)
    runner.print_summary()


if __name__ == "__main__":
    main()

# correr script desde terminal con
# python scripts/f_random_disk.py
