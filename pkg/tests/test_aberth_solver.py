import unittest
import sys
import os

import numpy as np

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from pydantic import ValidationError

from polyrace.aberth_solver import (AberthConfig, AberthState, aberth_correction, aberth_sweep, ea_postprocess,
                                    postprocess_start, run_aberth, start_vector)
from polyrace.config import Config
from polyrace.errors import CoordinateCollision, MaxSweepsExceeded
from polyrace.families import FamilySpec, chebyshev_roots, make_family
from polyrace.harness import Runner
from polyrace.newton_solver import newton_step
from polyrace.numeric_core import OpCounter
from polyrace.polynomials import ChebyshevFast, Coefficients, Roots

Z2_MINUS_1 = Coefficients(coeffs=(-1, 0, 1))


class TestCorrection(unittest.TestCase):

# Test 1: Corrección de Ehrlich–Aberth calculada a mano
    def test_valor_a_mano(self): # 2 - (3/4) / (1 - (3/4)(1/4)) = 14/13
        z = aberth_correction(OpCounter(), Z2_MINUS_1, [2 + 0j, -2 + 0j], 0)
        self.assertAlmostEqual(z, 14 / 13, places=14)

    def test_raiz_queda_fija(self):
        poly = Roots(roots=(1, -1))
        self.assertEqual(aberth_correction(OpCounter(), poly, [1 + 0j, 0.3 + 0.2j], 0), 1)

    def test_grado_uno_es_newton(self):
        poly = Coefficients(coeffs=(-5, 1))
        self.assertAlmostEqual(aberth_correction(OpCounter(), poly, [2 + 0j], 0),
                               newton_step(OpCounter(), poly, 2 + 0j), places=13)

    def test_colision(self):
        with self.assertRaises(CoordinateCollision):
            aberth_correction(OpCounter(), Z2_MINUS_1, [0.5 + 0.5j, 0.5 + 0.5j], 0)


class TestSweep(unittest.TestCase):

# Test 2: Barridos Jacobi y Gauss–Seidel desde (2, -2)
    def test_jacobi_simetrico(self):
        state = aberth_sweep(OpCounter(), Z2_MINUS_1, AberthState(z=[2 + 0j, -2 + 0j]), "jacobi")
        self.assertAlmostEqual(state.z[0], 14 / 13, places=14)
        self.assertAlmostEqual(state.z[1], -14 / 13, places=14)
        self.assertEqual(state.sweep, 1)

    def test_gauss_seidel_mas_cerca(self):
        state = aberth_sweep(OpCounter(), Z2_MINUS_1, AberthState(z=[2 + 0j, -2 + 0j]), "gauss_seidel")
        self.assertAlmostEqual(state.z[0], 14 / 13, places=14)
        self.assertLess(abs(state.z[1] + 1), abs(14 / 13 - 1))

    def test_vector_de_raices_fijo(self):
        roots = [0.5 + 0.1j, -0.4 + 0j, 0.2 - 0.7j]
        poly = Roots(roots=tuple(roots))
        for style in ("jacobi", "gauss_seidel"):
            state = aberth_sweep(OpCounter(), poly, AberthState(z=list(roots)), style)
            self.assertEqual(state.z, roots)
            self.assertEqual(state.max_step, 0.0)

    def test_puntos_fijos_aleatorios(self): # 100 polinomios por raíces de grado <= 16, ambos estilos
        rng = np.random.default_rng(101)
        for _ in range(100):
            d = int(rng.integers(1, 17))
            roots = [complex(z) for z in rng.uniform(-1, 1, d) + 1j * rng.uniform(-1, 1, d)]
            poly = Roots(roots=tuple(roots))
            for style in ("jacobi", "gauss_seidel"):
                state = aberth_sweep(OpCounter(), poly, AberthState(z=list(roots)), style)
                self.assertEqual(state.z, roots)
                self.assertEqual(state.max_ratio, 0.0)

    def test_colision_en_vector_real(self): # el desplazamiento no saca al vector de la recta real
        for style in ("jacobi", "gauss_seidel"):
            state = aberth_sweep(OpCounter(), Z2_MINUS_1, AberthState(z=[0.5 + 0j, 0.5 + 0j]), style,
                                 collision_eps=1e-12)
            self.assertGreaterEqual(state.collisions, 1)
            self.assertNotEqual(state.z[0], state.z[1])
            self.assertTrue(all(z.imag == 0.0 for z in state.z))

    def test_colision_perturba(self): # coordenadas repetidas se separan en vez de abortar
        state = aberth_sweep(OpCounter(), Z2_MINUS_1, AberthState(z=[0.5 + 0.5j, 0.5 + 0.5j]), "jacobi",
                             collision_eps=1e-12)
        self.assertEqual(state.collisions, 2)
        self.assertNotEqual(state.z[0], state.z[1])

    def test_jacobi_equivariante(self):
        poly, _ = make_family(FamilySpec(family="random_circle", degree_param=6, seed=11))
        z0 = start_vector(6, 1.1)
        perm = [3, 0, 5, 1, 4, 2]
        a = AberthState(z=list(z0))
        b = AberthState(z=[z0[i] for i in perm])
        for _ in range(3):
            a = aberth_sweep(OpCounter(), poly, a, "jacobi")
            b = aberth_sweep(OpCounter(), poly, b, "jacobi")
        for j, i in enumerate(perm):
            self.assertAlmostEqual(b.z[j], a.z[i], places=12)

# Test 3: El costo por barrido crece como d^2
    def test_costo_cuadratico(self):
        costs = {}
        for d in (128, 256):
            poly, _ = make_family(FamilySpec(family="random_circle", degree_param=d, seed=5))
            ctx = OpCounter()
            aberth_sweep(ctx, poly, AberthState(z=start_vector(d, 1.1)), "gauss_seidel")
            costs[d] = ctx.total
        ratio = costs[256] / costs[128]
        self.assertGreaterEqual(ratio, 3.5)
        self.assertLessEqual(ratio, 4.5)


class TestRunAberth(unittest.TestCase):

# Test 4: Corridas completas
    def test_chebyshev_modo_referencia(self):
        cfg = AberthConfig(stop_mode="reference", reference=chebyshev_roots(8), delta=1e-10)
        report = run_aberth(OpCounter(), ChebyshevFast(k=3), cfg)
        self.assertTrue(report.matched)
        self.assertEqual(report.roots_found, 8)
        self.assertLessEqual(report.iterations, 20)
        self.assertEqual(report.stop_reason, "reference")

    def test_grado_uno(self):
        report = run_aberth(OpCounter(), Coefficients(coeffs=(-5, 1)), AberthConfig())
        self.assertTrue(report.matched)
        self.assertAlmostEqual(report.roots[0], 5, places=12)
        # el segundo barrido solo confirma el punto fijo
        self.assertEqual(report.iterations, 1)
        self.assertEqual(report.stop_reason, "step_size")

    def test_vector_real_no_converge(self): # z^2 + 1 desde un vector real: los iterados siguen reales
        cfg = AberthConfig(start_vector=[2 + 0j, -0.5 + 0j], max_sweeps=60)
        report = run_aberth(OpCounter(), Coefficients(coeffs=(1, 0, 1)), cfg)
        self.assertFalse(report.matched)
        self.assertTrue(all(z.imag == 0.0 for z in report.roots))
        with self.assertRaises(MaxSweepsExceeded):
            run_aberth(OpCounter(), Coefficients(coeffs=(1, 0, 1)), cfg, strict=True)

    def test_vector_real_con_colision_no_converge(self): # arranque real repetido: sigue atrapado en la recta
        cfg = AberthConfig(start_vector=[0.5 + 0j, 0.5 + 0j], max_sweeps=60)
        report = run_aberth(OpCounter(), Coefficients(coeffs=(1, 0, 1)), cfg)
        self.assertFalse(report.matched)
        self.assertEqual(report.stop_reason, "max_sweeps")
        self.assertTrue(all(z.imag == 0.0 for z in report.roots))

    def test_pocos_barridos(self): # círculo aleatorio: <= 30 barridos; Chebyshev: <= d/2 + 10 desde un solo círculo
        runner = Runner(Config())
        for d in (64, 128):
            report = runner.solve(FamilySpec(family="random_circle", degree_param=d), "aberth")
            self.assertTrue(report.matched)
            self.assertLessEqual(report.iterations, 30, msg=f"d={d}")
        report = runner.solve(FamilySpec(family="chebyshev", degree_param=64), "aberth")
        self.assertTrue(report.matched)
        self.assertLessEqual(report.iterations, 64 // 2 + 10)

    def test_modo_residuo(self):
        cfg = AberthConfig(stop_mode="residual", eps=1e-12)
        report = run_aberth(OpCounter(), Z2_MINUS_1, cfg)
        self.assertTrue(report.matched)
        self.assertLess(report.max_residual, 1e-6)

    def test_detector_de_ciclos(self):
        roots = (0.5 + 0.1j, -0.4 + 0j)
        # con las raíces exactas el vector no cambia; la referencia lejana impide parar antes
        cfg = AberthConfig(stop_mode="reference", reference=[5 + 0j, 6 + 0j], start_vector=list(roots), cycle_window=4)
        report = run_aberth(OpCounter(), Roots(roots=roots), cfg)
        self.assertTrue(report.cycle_detected)
        self.assertEqual(report.stop_reason, "cycle")

    def test_config_referencia_sin_raices(self):
        with self.assertRaises(ValidationError):
            AberthConfig(stop_mode="reference")


class TestPostprocess(unittest.TestCase):

# Test 5: Post-proceso sobre raíces ya encontradas
    def test_todas_las_raices(self):
        roots = [1 + 0j, -1 + 0j]
        report = ea_postprocess(OpCounter(), Roots(roots=(1, -1)), roots, AberthConfig())
        self.assertTrue(report.matched)
        self.assertEqual(report.iterations, 0)
        self.assertEqual(sorted(report.roots, key=lambda z: z.real), [-1, 1])

    def test_recupera_raiz_faltante(self):
        poly, ref = make_family(FamilySpec(family="grid", degree_param=4))
        found = list(ref.roots[:-1])
        cfg = AberthConfig(stop_mode="reference", reference=list(ref.roots))
        report = ea_postprocess(OpCounter(), poly, found, cfg)
        self.assertTrue(report.matched)
        self.assertLessEqual(report.iterations, 10)
        self.assertEqual(report.method, "ea_postprocess")

    def test_vacio_igual_a_run_aberth(self):
        poly, _ = make_family(FamilySpec(family="random_disk", degree_param=12, seed=3))
        cfg = AberthConfig()
        post = ea_postprocess(OpCounter(), poly, [], cfg)
        fresh = run_aberth(OpCounter(), poly, cfg)
        self.assertEqual(post.roots, fresh.roots)
        self.assertEqual((post.real_adds, post.real_muls), (fresh.real_adds, fresh.real_muls))
        self.assertEqual(postprocess_start(12, [], 1.1), start_vector(12, 1.1))

    def test_demasiadas_raices(self):
        with self.assertRaises(ValueError):
            postprocess_start(1, [0j, 1 + 0j], 1.1)


if __name__ == "__main__":
    unittest.main()

# correr test con:
# python -m unittest tests/test_aberth_solver.py
