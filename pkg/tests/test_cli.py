"""End-to-end tests of the command-line interface."""

import json
import subprocess
import sys

import pytest

from cpvi.cli import main
from cpvi.hamiltonians import coupled_polynomial
from cpvi.poly import parse_poly


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestVerify:
    def test_holomorphy_json(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "holomorphy", "--json")
        assert code == 0
        doc = json.loads(out)
        assert doc["status"] == "pass"
        ids = [c["check-id"] for c in doc["checks"]]
        assert ids == sorted(ids)
        for c in doc["checks"]:
            assert set(c) == {"check-id", "method", "status", "detail", "elapsed-ms"}

    def test_divisors_human_readable(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "divisors")
        assert code == 0
        assert "suite divisors: OK" in out

    def test_json_stable_modulo_elapsed(self, capsys):
        _, out1, _ = run_cli(capsys, "verify", "holomorphy", "--json")
        _, out2, _ = run_cli(capsys, "verify", "holomorphy", "--json")
        d1, d2 = json.loads(out1), json.loads(out2)
        for d in (d1, d2):
            for c in d["checks"]:
                c["elapsed-ms"] = 0
        assert d1 == d2


class TestIntegrate:
    def test_rejects_bad_relation(self, capsys):
        code, _, err = run_cli(capsys, "integrate", "--alpha", "0,0,0,0,0",
                               "--init", "0,0,0,0", "--span", "0.3,0.6")
        assert code == 2
        assert "relation" in err or "satisfy" in err

    def test_rejects_span_through_singularity(self, capsys):
        code, _, err = run_cli(capsys, "integrate", "--alpha", "1,0,0,0,0",
                               "--init", "0,0,0,0", "--span", "0.5,2")
        assert code == 2
        assert "singularity" in err

    def test_rejects_malformed_alpha(self, capsys):
        code, _, err = run_cli(capsys, "integrate", "--alpha", "1,0,0,0",
                               "--init", "0,0,0,0", "--span", "0.3,0.6")
        assert code == 2

    def test_exact_rational_parameters_and_outputs(self, capsys, tmp_path):
        csv_path = tmp_path / "traj.csv"
        svg_path = tmp_path / "traj.svg"
        code, out, _ = run_cli(
            capsys, "integrate",
            "--alpha", "1/8,1/8,1/8,1/8,0",
            "--init", "3/10,2/5,1/5,1/2",
            "--span", "3/10,3/5",
            "--rtol", "1e-10",
            "--csv", str(csv_path),
            "--plot", str(svg_path),
        )
        assert code == 0
        assert "end state" in out
        assert csv_path.read_text().startswith("t,x,y,z,w")
        assert svg_path.read_text().startswith("<svg")


class TestDump:
    def test_hamiltonian_byte_stable_and_parsable(self, capsys):
        code1, out1, _ = run_cli(capsys, "dump", "hamiltonian")
        code2, out2, _ = run_cli(capsys, "dump", "hamiltonian")
        assert code1 == code2 == 0
        assert out1 == out2
        assert parse_poly(out1.strip()) == coupled_polynomial()

    def test_chart_dump(self, capsys):
        code, out, _ = run_cli(capsys, "dump", "chart", "3")
        assert code == 0
        assert parse_poly(out.strip())  # canonical text parses back

    def test_chart_dump_bad_index(self, capsys):
        code, _, err = run_cli(capsys, "dump", "chart", "9")
        assert code == 2

    def test_pipeline_dump(self, capsys):
        code, out, _ = run_cli(capsys, "dump", "pipeline", "k1")
        assert code == 0
        assert "cumulative position image" in out

    def test_pipeline_dump_bad_name(self, capsys):
        code, _, _ = run_cli(capsys, "dump", "pipeline", "k9")
        assert code == 2


class TestUsageErrors:
    def test_unknown_subcommand_exits_two(self):
        with pytest.raises(SystemExit) as exc_info:
            main(["frobnicate"])
        assert exc_info.value.code == 2

    def test_unknown_suite_exits_two(self):
        with pytest.raises(SystemExit) as exc_info:
            main(["verify", "everything"])
        assert exc_info.value.code == 2


def test_module_entry_point_subprocess():
    proc = subprocess.run(
        [sys.executable, "-m", "cpvi", "verify", "divisors", "--json"],
        capture_output=True, text=True, timeout=600,
    )
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    assert doc["status"] == "pass"
