"""Component tests for the heighttower command line.

Commands run in-process through ``main(argv)`` with stdout and stderr
captured, so exit codes and the JSON error line can be checked directly.
"""

import hashlib
import io
import json
import os
import sys
import tempfile
import unittest
from contextlib import redirect_stderr, redirect_stdout
from decimal import Decimal
from pathlib import Path
from unittest.mock import patch

from mpmath import MPContext

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent.parent))

from src.main import main


def run_cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(list(argv))
    return code, out.getvalue(), err.getvalue()


def error_record(stderr: str) -> dict:
    lines = [line for line in stderr.splitlines() if line.startswith("{")]
    return json.loads(lines[-1])


class TestSubcommands(unittest.TestCase):
    """Successful invocations."""

    def test_construct_json(self):
        code, out, _ = run_cli("construct", "--delta", "2", "--horizon", "3")
        self.assertEqual(code, 0)
        rows = json.loads(out)
        self.assertEqual([(r["d"], r["p"]) for r in rows], [("2", "5"), ("7", "53"), ("17", "293")])

    def test_construct_csv(self):
        code, out, _ = run_cli("construct", "--epsilon", "1", "--horizon", "2", "--format", "csv")
        self.assertEqual(code, 0)
        lines = out.splitlines()
        self.assertTrue(lines[0].startswith("index,d,p,"))
        self.assertTrue(lines[2].startswith("2,7,17,"))

    def test_certify_json(self):
        code, out, _ = run_cli("certify", "--gamma", "1", "--delta", "2", "--horizon", "3", "--format", "json")
        self.assertEqual(code, 0)
        report = json.loads(out)
        self.assertEqual([level["p"] for level in report["levels"]], ["5", "53", "293"])
        self.assertEqual(report["witness"]["eta"], "0.5")

    def test_certify_csv_header(self):
        code, out, _ = run_cli("certify", "--delta", "2", "--horizon", "2", "--format", "csv")
        self.assertEqual(code, 0)
        self.assertEqual(
            out.splitlines()[0],
            "index,d,p,log_p_lo,log_p_hi,a_lo,a_hi,b_lo,b_hi,"
            "silverman_floor_lo,silverman_floor_hi,f_floor_lo,f_floor_hi",
        )

    def test_certify_levels(self):
        code, out, _ = run_cli("certify", "--levels", "2:5,3:5")
        self.assertEqual(code, 0)
        report = json.loads(out)
        self.assertEqual(report["source"], "sequence")
        self.assertEqual(report["i0"], 2)

    def test_witness(self):
        code, out, _ = run_cli("witness", "--delta", "2", "--epsilon", "0.9", "--eta", "0.5", "--cap", "10")
        self.assertEqual(code, 0)
        result = json.loads(out)
        self.assertTrue(result["reached"])
        self.assertEqual(result["index"], 3)

    def test_height_radical(self):
        code, out, _ = run_cli("height", "--p", "5", "--d", "2")
        self.assertEqual(code, 0)
        value = json.loads(out)["value"]
        ctx = MPContext()
        ctx.prec = 256
        expected = ctx.log(5) / 2
        self.assertTrue(ctx.mpf(value["lo"]) <= expected <= ctx.mpf(value["hi"]))

    def test_poly_values_with_leading_minus(self):
        code, out, _ = run_cli("measure", "--poly", "-5,0,1")
        self.assertEqual(code, 0)
        value = json.loads(out)["value"]
        self.assertTrue(Decimal(value["lo"]) <= 5 <= Decimal(value["hi"]))

        code, out, _ = run_cli("measure", "--poly", "-x^2+2")
        self.assertEqual(code, 0)
        value = json.loads(out)["value"]
        self.assertTrue(Decimal(value["lo"]) <= 2 <= Decimal(value["hi"]))

        code, out, _ = run_cli("height", "--poly", "-5,0,1", "--format", "text")
        self.assertEqual(code, 0)
        self.assertTrue(out.startswith("minpoly(x^2-5) in ["))

    def test_poly_value_with_equals_sign(self):
        code, out, _ = run_cli("measure", "--poly=-2,0,1")
        self.assertEqual(code, 0)
        value = json.loads(out)["value"]
        self.assertTrue(Decimal(value["lo"]) <= 2 <= Decimal(value["hi"]))

    def test_height_minpoly(self):
        code, out, _ = run_cli("height", "--poly", "x^2-2", "--format", "text")
        self.assertEqual(code, 0)
        self.assertTrue(out.startswith("minpoly(x^2-2) in ["))

    def test_measure(self):
        code, out, _ = run_cli("measure", "--poly", "-2,0,1")
        self.assertEqual(code, 0)
        value = json.loads(out)["value"]
        self.assertTrue(Decimal(value["lo"]) <= 2 <= Decimal(value["hi"]))

    def test_output_is_deterministic(self):
        argv = ("certify", "--epsilon", "1", "--horizon", "3", "--format", "json")
        self.assertEqual(run_cli(*argv)[1], run_cli(*argv)[1])

    def test_verbose_progress_on_stderr(self):
        code, out, err = run_cli("construct", "--delta", "2", "--horizon", "1", "--verbose")
        self.assertEqual(code, 0)
        self.assertIn("[1/1] Building tower...", err)
        self.assertNotIn("Building", out)


class TestOutputFiles(unittest.TestCase):
    """--output and the metadata sidecar."""

    def test_output_with_metadata(self):
        with tempfile.TemporaryDirectory() as tmp:
            target = Path(tmp) / "report.json"
            code, out, _ = run_cli(
                "certify", "--delta", "2", "--horizon", "2", "--output", str(target), "--metadata"
            )
            self.assertEqual(code, 0)
            self.assertEqual(out, "")
            payload = target.read_text(encoding="utf-8")
            meta = json.loads((Path(tmp) / "report.json.meta.json").read_text(encoding="utf-8"))
            self.assertEqual(meta["sha256"], hashlib.sha256(payload.encode("utf-8")).hexdigest())
            self.assertIn("certify", meta["command"])

    def test_metadata_requires_output(self):
        code, _, err = run_cli("construct", "--delta", "2", "--horizon", "1", "--metadata")
        self.assertEqual(code, 1)
        self.assertEqual(error_record(err)["error"], "DomainError")

    def test_unwritable_output(self):
        code, _, err = run_cli(
            "construct", "--delta", "2", "--horizon", "1", "--output", "/nonexistent/dir/out.json"
        )
        self.assertEqual(code, 3)
        self.assertEqual(error_record(err)["exit_code"], 3)


class TestErrors(unittest.TestCase):
    """Exit codes and the one-line JSON error record."""

    def test_delta_requires_gamma_one(self):
        code, out, err = run_cli("construct", "--gamma", "0.5", "--delta", "2", "--horizon", "3")
        self.assertEqual(code, 1)
        self.assertEqual(out, "")
        record = error_record(err)
        self.assertEqual(set(record), {"error", "exit_code", "message", "level"})
        self.assertEqual(record["exit_code"], 1)

    def test_missing_variant(self):
        code, _, _ = run_cli("construct", "--horizon", "3")
        self.assertEqual(code, 1)

    def test_unknown_flag(self):
        code, _, err = run_cli("construct", "--delta", "2", "--horizon", "3", "--bogus")
        self.assertEqual(code, 1)
        self.assertEqual(error_record(err)["error"], "DomainError")

    def test_bad_decimal(self):
        code, _, _ = run_cli("construct", "--delta", "two", "--horizon", "3")
        self.assertEqual(code, 1)

    def test_reducible_polynomial(self):
        code, _, _ = run_cli("height", "--poly", "x^2-4")
        self.assertEqual(code, 1)

    def test_witness_not_reached(self):
        code, out, err = run_cli(
            "witness", "--delta", "2", "--epsilon", "0.9", "--eta", "1e-9", "--cap", "3"
        )
        self.assertEqual(code, 2)
        self.assertFalse(json.loads(out)["reached"])
        record = error_record(err)
        self.assertEqual(record["error"], "WitnessNotReached")
        self.assertEqual(record["level"], 3)

    def test_bit_cap_reports_level(self):
        code, _, err = run_cli("construct", "--delta", "2", "--horizon", "4", "--max-p-bits", "10")
        self.assertEqual(code, 2)
        record = error_record(err)
        self.assertEqual(record["error"], "BitSizeExceeded")
        self.assertEqual(record["level"], 4)

    def test_missing_config_file(self):
        code, _, _ = run_cli("construct", "--delta", "2", "--horizon", "1", "--config", "/nonexistent.yaml")
        self.assertEqual(code, 3)


class TestConfiguration(unittest.TestCase):
    """YAML settings and environment overrides."""

    def test_yaml_sets_defaults(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "settings.yaml"
            path.write_text("output:\n  format: csv\n", encoding="utf-8")
            code, out, _ = run_cli("construct", "--delta", "2", "--horizon", "1", "--config", str(path))
            self.assertEqual(code, 0)
            self.assertTrue(out.startswith("index,d,p,"))

            code, out, _ = run_cli(
                "construct", "--delta", "2", "--horizon", "1", "--config", str(path), "--format", "json"
            )
            self.assertEqual(code, 0)
            self.assertTrue(out.startswith("["))

    def test_yaml_unknown_key(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "settings.yaml"
            path.write_text("tower:\n  horizon: 3\n", encoding="utf-8")
            code, _, _ = run_cli("construct", "--delta", "2", "--horizon", "1", "--config", str(path))
            self.assertEqual(code, 1)

    def test_env_override_rejected_when_malformed(self):
        with patch.dict(os.environ, {"HEIGHTTOWER_MAX_BITS": "lots"}):
            code, _, err = run_cli("construct", "--delta", "2", "--horizon", "1")
        self.assertEqual(code, 1)
        self.assertIn("HEIGHTTOWER_MAX_BITS", error_record(err)["message"])

    def test_env_override_applies(self):
        with patch.dict(os.environ, {"HEIGHTTOWER_MAX_BITS": "32"}):
            code, _, _ = run_cli("construct", "--delta", "2", "--horizon", "1")
        # max_bits 32 is below the default initial_bits of 64
        self.assertEqual(code, 1)
        with patch.dict(os.environ, {"HEIGHTTOWER_MAX_BITS": "32"}):
            code, _, _ = run_cli(
                "construct", "--delta", "2", "--horizon", "1", "--initial-bits", "32", "--target-width", "1e-6"
            )
        self.assertEqual(code, 0)


if __name__ == "__main__":
    unittest.main()
