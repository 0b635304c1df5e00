import os
import sys

import pandas as pd

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from polyrace.config import Config
from polyrace.families import parse_family_spec
from polyrace.harness import HULL_C_VALUES, Runner

#-------------------------------------------------------------------------------------------------------
# Este script corre el experimento de la cápsula convexa: Newton sin refinamiento desde ⌈c·d⌉ puntos
# equidistribuidos en el círculo, para c en {1.0, 1.5, 2.0, 2.6, 3.0}. Para cada c cuenta cuántas raíces
# del borde de la cápsula convexa alcanzó alguna órbita y reporta el menor c con cobertura total.
# El resultado se guarda en data/results/hull.csv.
#-------------------------------------------------------------------------------------------------------

cfg = Config.from_env()
FAMILIES = [
    f"randcircle:d=64,seed={cfg.seed}",
    f"randdisk:d=64,seed={cfg.seed}",
    f"randdisk:d=128,seed={cfg.seed}",
    "grid:n=8",
]


def main():
    runner = Runner(cfg)
    records = []
    for text in FAMILIES:
        report = runner.hull(parse_family_spec(text), HULL_C_VALUES)
        print(f"{text}: c mínimo = {report.min_c}")
        for row in report.rows:
            records.append({"family": text, "degree": report.degree, **row.model_dump()})

    out = os.path.join(cfg.out_dir, "hull.csv")
    os.makedirs(cfg.out_dir, exist_ok=True)
    pd.DataFrame(records).to_csv(out, index=False, lineterminator="\n")
    print(f"CSV guardado en: {out}")


if __name__ == "__main__":
    main()

# correr script desde terminal con
# python scripts/h_convex_hull.py
