import unittest
import sys
import os
import math
import tempfile

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from pydantic import ValidationError

from polyrace.reports import CSV_COLUMNS, BenchRow, SolveReport, emit_csv, parse_csv, summarize_results, to_row


def make_row(**kwargs) -> BenchRow:
    base = dict(family="cheb", degree=16, method="newton", eval_mode="fast", seed=7, real_adds=1200,
                real_muls=3400, iters=12, roots_found=16, expected=16, max_residual=3.5e-15, matched=True,
                wall_ms=0.0)
    base.update(kwargs)
    return BenchRow(**base)


class TestSolveReport(unittest.TestCase):

    def test_total_ops(self):
        report = SolveReport(method="aberth", degree=4, expected_roots=4, real_adds=10, real_muls=32)
        self.assertEqual(report.total_ops, 42)
        self.assertEqual(report.wall_ms, 0.0)

# Test 1: Reportes inconsistentes se rechazan
    def test_inconsistentes(self):
        with self.assertRaises(ValidationError):
            SolveReport(method="newton", degree=4, expected_roots=4, roots_found=5)
        with self.assertRaises(ValidationError):
            SolveReport(method="newton", degree=4, expected_roots=4, matched=True, missed=1)

    def test_to_row(self):
        report = SolveReport(method="race", degree=8, expected_roots=8, real_adds=5, real_muls=6, iterations=3,
                             roots_found=8, max_residual=1e-14, matched=True, winner="aberth")
        row = to_row(report, family="randdisk", eval_mode="slow", seed=3)
        self.assertEqual(row.method, "race")
        self.assertEqual(row.iters, 3)
        self.assertEqual(row.expected, 8)
        self.assertEqual(row.total_ops, 11)


class TestCsv(unittest.TestCase):

# Test 2: Formato CSV de los benchmarks
    def test_encabezado(self):
        text = emit_csv([make_row()])
        self.assertEqual(text.splitlines()[0], ",".join(CSV_COLUMNS))
        self.assertEqual(len(text.splitlines()), 2)

    def test_ida_y_vuelta(self):
        rows = [make_row(), make_row(degree=32, method="aberth", matched=False, roots_found=30, max_residual=math.inf)]
        self.assertEqual(parse_csv(emit_csv(rows)), rows)

    def test_archivo(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "sub", "cheb.csv")
            text = emit_csv([make_row()], path)
            self.assertTrue(os.path.exists(path))
            with open(path, encoding="utf-8") as f:
                self.assertEqual(f.read(), text)
            self.assertEqual(parse_csv(path), [make_row()])

    def test_columnas_faltantes(self):
        with self.assertRaises(ValueError):
            parse_csv("family,degree\ncheb,16\n")

# Test 3: Resumen por método de una carpeta de resultados
    def test_resumen_de_resultados(self):
        with tempfile.TemporaryDirectory() as tmp:
            emit_csv([make_row(), make_row(degree=32, real_adds=10, real_muls=20),
                      make_row(method="aberth", matched=False, roots_found=15)], os.path.join(tmp, "cheb.csv"))
            with open(os.path.join(tmp, "hull.csv"), "w", encoding="utf-8") as f:
                f.write("c,starts,coverage\n1.0,2,1.0\n")
            summary = summarize_results(tmp)
        self.assertEqual(list(summary), ["cheb.csv"])
        table = summary["cheb.csv"]
        self.assertEqual(int(table.loc["newton", "runs"]), 2)
        self.assertEqual(int(table.loc["newton", "matched"]), 2)
        self.assertEqual(int(table.loc["newton", "max_degree"]), 32)
        self.assertEqual(int(table.loc["newton", "total_ops"]), 1200 + 3400 + 10 + 20)
        self.assertEqual(int(table.loc["aberth", "matched"]), 0)

    def test_resumen_carpeta_vacia(self):
        with tempfile.TemporaryDirectory() as tmp:
            self.assertEqual(summarize_results(tmp), {})


if __name__ == "__main__":
    unittest.main()

# correr test con:
# python -m unittest tests/test_reports.py
