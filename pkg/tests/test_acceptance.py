import unittest
import sys
import os
import io
import cmath
import math
import tempfile
from contextlib import redirect_stderr, redirect_stdout

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from polyrace.aberth_solver import AberthConfig, AberthState, aberth_sweep, run_aberth
from polyrace.config import Config
from polyrace.families import FamilySpec
from polyrace.harness import ExperimentSpec, Runner
from polyrace.main import main
from polyrace.numeric_core import OpCounter
from polyrace.polynomials import Coefficients, Roots

"""
Chequeos a escala de benchmark. Tardan minutos, por eso solo corren con
POLYRACE_SLOW_TESTS=1; la suite rápida tiene versiones chicas de los mismos.
"""

SLOW = os.getenv("POLYRACE_SLOW_TESTS") == "1"


@unittest.skipUnless(SLOW, "definir POLYRACE_SLOW_TESTS=1 para correr los chequeos largos")
class TestAcceptance(unittest.TestCase):

    def setUp(self):
        self.runner = Runner(Config())

# Test 1: Ambos métodos recuperan todas las raíces hasta grado 64
    def test_equivalencia_hasta_64(self):
        families = [FamilySpec(family="chebyshev", degree_param=64),
                    FamilySpec(family="random_circle", degree_param=64),
                    FamilySpec(family="random_disk", degree_param=64),
                    FamilySpec(family="grid", degree_param=8)]
        for family in families:
            for method in ("newton", "aberth"):
                report = self.runner.solve(family, method)
                self.assertTrue(report.matched, msg=f"{family.family} {method}")

# Test 2: Ehrlich–Aberth converge en pocos barridos
    def test_pocos_barridos(self):
        report = self.runner.solve(FamilySpec(family="random_circle", degree_param=256), "aberth")
        self.assertTrue(report.matched)
        self.assertLessEqual(report.iterations, 30)
        # Chebyshev arranca de un solo círculo: los barridos crecen con d
        for d in (128, 256):
            report = self.runner.solve(FamilySpec(family="chebyshev", degree_param=d), "aberth")
            self.assertTrue(report.matched)
            self.assertLessEqual(report.iterations, d // 2 + 10, msg=f"d={d}")

# Test 3: Orden cúbico de Ehrlich–Aberth (estilo Jacobi) cerca de raíces simples
    def test_orden_cubico(self):
        roots = (0.6 + 0.2j, -0.5 + 0.4j, 0.1 - 0.7j)
        poly = Roots(roots=roots)
        state = AberthState(z=[r + 0.05 * cmath.rect(1.0, k + 1) for k, r in enumerate(roots)])
        errors = [max(abs(z - r) for z, r in zip(state.z, roots))]
        for _ in range(2):
            state = aberth_sweep(OpCounter(), poly, state, "jacobi")
            errors.append(max(abs(z - r) for z, r in zip(state.z, roots)))
        order = math.log(errors[2] / errors[1]) / math.log(errors[1] / errors[0])
        self.assertGreaterEqual(order, 2.5)
        self.assertLessEqual(order, 3.5)

# Test 4: Iterados reales sobre z^2 + 1 nunca convergen
    def test_trampa_de_simetria(self):
        cfg = AberthConfig(start_vector=[2 + 0j, -0.5 + 0j], max_sweeps=500)
        report = run_aberth(OpCounter(), Coefficients(coeffs=(1, 0, 1)), cfg)
        self.assertFalse(report.matched)
        self.assertEqual(report.stop_reason, "max_sweeps")
        self.assertTrue(all(z.imag == 0.0 for z in report.roots))

# Test 5: Familias recursivas: Newton más barato y con menor pendiente
    def test_recursivas_favorecen_newton(self):
        spec = ExperimentSpec(family=FamilySpec(family="iter_quad", c=1j, eval_mode="fast"),
                              degrees=list(range(5, 11)), methods=["newton", "aberth"])
        with redirect_stdout(io.StringIO()):
            self.runner.run_experiment(spec)
            fits = self.runner.print_slopes(["newton", "aberth"])
        ops = {(r.method, r.degree): r.total_ops for r in self.runner.rows}
        for n in (8, 9, 10):
            d = 2 ** n
            self.assertLess(ops[("newton", d)], ops[("aberth", d)], msg=f"n={n}")
        self.assertLessEqual(fits["newton"].slope, fits["aberth"].slope - 0.3)

# Test 6: Raíces interiores: Ehrlich–Aberth más barato
    def test_disco_favorece_aberth(self):
        wins = 0
        for seed in (1, 2, 3):
            for d in (64, 128, 256):
                family = FamilySpec(family="random_disk", degree_param=d, seed=seed)
                newton = self.runner.solve(family, "newton")
                aberth = self.runner.solve(family, "aberth")
                wins += aberth.total_ops < newton.total_ops
        self.assertGreaterEqual(wins, 8)

# Test 7: El mismo bench dos veces da el mismo CSV
    def test_bench_determinista(self):
        with tempfile.TemporaryDirectory() as tmp:
            texts = []
            for name in ("a.csv", "b.csv"):
                path = os.path.join(tmp, name)
                argv = ["bench", "--family", "randdisk", "--degrees", "2^4..2^6", "--methods", "newton,aberth,race",
                        "--seed", "11", "--out", path]
                with redirect_stdout(io.StringIO()), redirect_stderr(io.StringIO()):
                    main(argv)
                with open(path, encoding="utf-8") as f:
                    texts.append(f.read())
            self.assertEqual(texts[0], texts[1])


class TestAcceptanceReducida(unittest.TestCase):
    """Los mismos chequeos a grados chicos, dentro de la suite rápida."""

    def setUp(self):
        self.runner = Runner(Config())

# Test 8: Equivalencia de ambos métodos en grado 16
    def test_equivalencia_grado_16(self):
        families = [FamilySpec(family="chebyshev", degree_param=16),
                    FamilySpec(family="random_circle", degree_param=16),
                    FamilySpec(family="random_disk", degree_param=16),
                    FamilySpec(family="grid", degree_param=4)]
        for family in families:
            for method in ("newton", "aberth"):
                report = self.runner.solve(family, method)
                self.assertTrue(report.matched, msg=f"{family.family} {method}")

# Test 9: En iter_quad el costo de Newton crece más despacio que el de Ehrlich–Aberth
    def test_recursivas_crecimiento(self):
        ops = {}
        for n in (6, 7):
            family = FamilySpec(family="iter_quad", c=1j, degree_param=n, eval_mode="fast")
            for method in ("newton", "aberth"):
                report = self.runner.solve(family, method)
                self.assertTrue(report.matched, msg=f"n={n} {method}")
                ops[(method, n)] = report.total_ops
        newton_growth = ops[("newton", 7)] / ops[("newton", 6)]
        aberth_growth = ops[("aberth", 7)] / ops[("aberth", 6)]
        self.assertLess(newton_growth, aberth_growth)

# Test 10: En el disco Ehrlich–Aberth gana en grado 64
    def test_disco_grado_64(self):
        wins = 0
        for seed in (1, 2, 3):
            family = FamilySpec(family="random_disk", degree_param=64, seed=seed)
            newton = self.runner.solve(family, "newton")
            aberth = self.runner.solve(family, "aberth")
            self.assertTrue(aberth.matched)
            wins += aberth.total_ops < newton.total_ops
        self.assertGreaterEqual(wins, 2)

# Test 11: Bench determinista con grados chicos
    def test_bench_determinista(self):
        with tempfile.TemporaryDirectory() as tmp:
            texts = []
            for name in ("a.csv", "b.csv"):
                path = os.path.join(tmp, name)
                argv = ["bench", "--family", "randdisk", "--degrees", "2^3..2^4", "--methods", "newton,aberth,race",
                        "--seed", "11", "--out", path]
                with redirect_stdout(io.StringIO()), redirect_stderr(io.StringIO()):
                    main(argv)
                with open(path, encoding="utf-8") as f:
                    texts.append(f.read())
            self.assertEqual(texts[0], texts[1])


if __name__ == "__main__":
    unittest.main()

# correr test con:
# python -m unittest tests/test_acceptance.py
# POLYRACE_SLOW_TESTS=1 python -m unittest tests/test_acceptance.py
