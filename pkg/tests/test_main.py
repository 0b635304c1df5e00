import unittest
import sys
import os
import io
import json
import tempfile
from contextlib import redirect_stderr, redirect_stdout

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from polyrace.main import EXIT_INVALID_SPEC, EXIT_OK, main
from polyrace.reports import parse_csv


def run_cli(argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(argv)
    return code, out.getvalue(), err.getvalue()


class TestMain(unittest.TestCase):

# Test 1: Subcomandos y códigos de salida
    def test_familias(self):
        code, out, _ = run_cli(["families"])
        self.assertEqual(code, EXIT_OK)
        self.assertIn("iterquad", out)

    def test_solve_json(self):
        code, out, _ = run_cli(["solve", "--family", "cheb:d=8", "--method", "aberth", "--json"])
        self.assertEqual(code, EXIT_OK)
        report = json.loads(out)
        self.assertTrue(report["matched"])
        self.assertEqual(report["degree"], 8)
        self.assertEqual(report["method"], "aberth")

    def test_bench_escribe_csv(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "cheb.csv")
            code, out, _ = run_cli(["bench", "--family", "cheb", "--degrees", "2^3..2^4", "--methods", "aberth",
                                    "--out", path])
            self.assertEqual(code, EXIT_OK)
            rows = parse_csv(path)
            self.assertEqual([r.degree for r in rows], [8, 16])
            self.assertIn("POLYRACE SUMMARY", out)

# Test 2: Especificaciones inválidas salen con código 3
    def test_familia_desconocida(self):
        code, _, err = run_cli(["solve", "--family", "bogus:n=3"])
        self.assertEqual(code, EXIT_INVALID_SPEC)
        self.assertIn("Especificación inválida", err)

    def test_modo_no_soportado(self):
        code, _, _ = run_cli(["solve", "--family", "legendre:d=8,eval=fast"])
        self.assertEqual(code, EXIT_INVALID_SPEC)

    def test_eps_mayor_que_delta(self):
        code, _, _ = run_cli(["solve", "--family", "cheb:d=8", "--eps", "1e-6", "--delta", "1e-8"])
        self.assertEqual(code, EXIT_INVALID_SPEC)

    def test_grado_lento_excesivo(self):
        code, _, _ = run_cli(["solve", "--family", "iterquad:n=15,eval=slow"])
        self.assertEqual(code, EXIT_INVALID_SPEC)


if __name__ == "__main__":
    unittest.main()

# correr test con:
# python -m unittest tests/test_main.py
