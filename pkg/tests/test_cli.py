"""CLI surface: exit codes, output schemas, and flag validation."""

import io
import json
import math

import pytest
from numpy.testing import assert_allclose

from svbound.cli import EXIT_INPUT, EXIT_MAX_ITER, EXIT_OK, EXIT_VERIFY, main
from svbound.ensemble import BENCH_COLUMNS
from svbound.oracle import Spectrum

DIAG12_MM = """%%MatrixMarket matrix array real general
2 2
1
0
0
2
"""


@pytest.fixture
def diag12_file(tmp_path):
    path = tmp_path / "diag12.mtx"
    path.write_text(DIAG12_MM)
    return str(path)


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestBoundJson:
    def test_schema_and_values(self, capsys, diag12_file):
        code, out, err = run_cli(capsys, "bound", diag12_file, "--output", "json")
        assert code == EXIT_OK
        report = json.loads(out)
        assert list(report) == ["input", "context", "seeds", "lower", "upper"]
        assert report["context"] == {
            "n": 2,
            "frob_sq": 5.0,
            "log_abs_det": math.log(2.0),
        }
        seeds = report["seeds"]
        assert_allclose(seeds["l"], 2.0 / math.sqrt(5.0), rtol=1e-14)
        assert_allclose(seeds["l0"], 2.0 / math.sqrt(4.2), rtol=1e-14)
        assert_allclose(seeds["a"], 1.0, rtol=1e-9)
        assert_allclose(seeds["frob"], math.sqrt(5.0), rtol=1e-14)
        for direction, target in (("lower", 1.0), ("upper", 2.0)):
            block = report[direction]
            assert block["status"] == "converged"
            assert_allclose(block["bound"], target, rtol=1e-9)
            assert [row["k"] for row in block["trace"]] == list(
                range(1, len(block["trace"]) + 1)
            )
            for row in block["trace"]:
                assert set(row) == {"k", "lambda", "a", "correction"}

    def test_verify_adds_oracle_block(self, capsys, diag12_file):
        code, out, _ = run_cli(
            capsys, "bound", diag12_file, "--output", "json", "--verify"
        )
        assert code == EXIT_OK
        report = json.loads(out)
        assert_allclose(report["oracle"]["sigma_min"], 1.0, rtol=1e-12)
        assert_allclose(report["oracle"]["sigma_max"], 2.0, rtol=1e-12)

    def test_json_round_trips_byte_identical(self, capsys, diag12_file):
        code, out, _ = run_cli(capsys, "bound", diag12_file, "--output", "json")
        assert code == EXIT_OK
        assert json.dumps(json.loads(out), indent=2) + "\n" == out

    def test_custom_seed_trace_prefix(self, capsys, diag12_file):
        code, out, _ = run_cli(
            capsys,
            "bound", diag12_file,
            "--mode", "lower",
            "--seed", "custom",
            "--seed-value", "0.5",
            "--output", "json",
        )
        assert code == EXIT_OK
        report = json.loads(out)
        assert "upper" not in report
        lams = [row["lambda"] for row in report["lower"]["trace"][:3]]
        assert_allclose(lams, [0.25, 16.0 / 19.0, 1444.0 / 1501.0], rtol=1e-13)

    def test_human_output_prints_identical_numbers(self, capsys, diag12_file):
        code, json_out, _ = run_cli(capsys, "bound", diag12_file, "--output", "json")
        assert code == EXIT_OK
        report = json.loads(json_out)
        code, human_out, _ = run_cli(capsys, "bound", diag12_file)
        assert code == EXIT_OK
        assert f"bound={report['lower']['bound']!r}" in human_out
        assert f"bound={report['upper']['bound']!r}" in human_out
        assert f"l0={report['seeds']['l0']!r}" in human_out

    def test_csv_output_lists_both_traces(self, capsys, diag12_file):
        code, json_out, _ = run_cli(capsys, "bound", diag12_file, "--output", "json")
        report = json.loads(json_out)
        code, csv_out, _ = run_cli(capsys, "bound", diag12_file, "--output", "csv")
        assert code == EXIT_OK
        lines = csv_out.strip().splitlines()
        assert lines[0] == "direction,k,lambda,a,correction"
        expected = len(report["lower"]["trace"]) + len(report["upper"]["trace"])
        assert len(lines) == 1 + expected
        assert {line.split(",")[0] for line in lines[1:]} == {"lower", "upper"}

    def test_reads_stdin_with_auto_format(self, capsys, monkeypatch):
        monkeypatch.setattr("sys.stdin", io.StringIO("1, 0\n0, 2\n"))
        code, out, _ = run_cli(capsys, "bound", "-", "--output", "json")
        assert code == EXIT_OK
        assert json.loads(out)["context"]["frob_sq"] == 5.0

    def test_one_by_one_convenience(self, capsys, tmp_path):
        path = tmp_path / "scalar.csv"
        path.write_text("3+4i\n")
        code, out, _ = run_cli(capsys, "bound", str(path), "--output", "json")
        assert code == EXIT_OK
        report = json.loads(out)
        assert report["context"]["n"] == 1
        assert report["sigma_min"] == 5.0
        assert report["sigma_max"] == 5.0

    def test_identity_root_seed_finishes_in_one_iteration(self, capsys, tmp_path):
        path = tmp_path / "eye3.mtx"
        path.write_text(
            "%%MatrixMarket matrix array real general\n"
            "3 3\n1\n0\n0\n0\n1\n0\n0\n0\n1\n"
        )
        code, out, _ = run_cli(
            capsys,
            "bound", str(path),
            "--mode", "lower",
            "--seed", "lin-xie",
            "--output", "json",
        )
        assert code == EXIT_OK
        report = json.loads(out)
        block = report["lower"]
        assert block["status"] == "converged"
        assert len(block["trace"]) == 1
        # The root seed already equals sigma_min here, up to the sqrt(eps)
        # accuracy the flat extremum allows; one pass only mops up rounding.
        assert_allclose(block["bound"], 1.0, rtol=1e-7)


class TestBoundErrors:
    def test_missing_file(self, capsys):
        code, _, err = run_cli(capsys, "bound", "/nonexistent/m.mtx")
        assert code == EXIT_INPUT
        assert "error:" in err

    def test_singular_matrix(self, capsys, tmp_path):
        path = tmp_path / "sing.csv"
        path.write_text("1, 2\n2, 4\n")
        code, _, err = run_cli(capsys, "bound", str(path))
        assert code == EXIT_INPUT
        assert "singular" in err

    def test_rectangular_matrix(self, capsys, tmp_path):
        path = tmp_path / "rect.csv"
        path.write_text("1, 2, 3\n4, 5, 6\n")
        code, _, err = run_cli(capsys, "bound", str(path))
        assert code == EXIT_INPUT
        assert "square" in err

    def test_parse_error_carries_line_number(self, capsys, tmp_path):
        path = tmp_path / "bad.mtx"
        path.write_text("%%MatrixMarket matrix array real general\n2 2\n1\nbogus\n2\n4\n")
        code, _, err = run_cli(capsys, "bound", str(path))
        assert code == EXIT_INPUT
        assert "line 4" in err

    def test_seed_value_requires_custom(self, capsys, diag12_file):
        code, _, err = run_cli(capsys, "bound", diag12_file, "--seed-value", "0.5")
        assert code == EXIT_INPUT
        assert "--seed custom" in err

    def test_custom_seed_requires_value(self, capsys, diag12_file):
        code, _, err = run_cli(capsys, "bound", diag12_file, "--seed", "custom")
        assert code == EXIT_INPUT
        assert "--seed-value" in err

    def test_custom_seed_rejected_in_both_mode(self, capsys, diag12_file):
        code, _, err = run_cli(
            capsys, "bound", diag12_file, "--seed", "custom", "--seed-value", "0.5"
        )
        assert code == EXIT_INPUT
        assert "--mode" in err

    def test_direction_mismatched_seed(self, capsys, diag12_file):
        code, _, err = run_cli(
            capsys, "bound", diag12_file, "--mode", "lower", "--seed", "frobenius"
        )
        assert code == EXIT_INPUT
        assert "upper" in err

    def test_max_iter_exhaustion_is_exit_two(self, capsys, diag12_file):
        code, out, _ = run_cli(
            capsys,
            "bound", diag12_file,
            "--mode", "lower",
            "--seed", "custom",
            "--seed-value", "0.5",
            "--max-iter", "1",
            "--output", "json",
        )
        assert code == EXIT_MAX_ITER
        assert json.loads(out)["lower"]["status"] == "max-iter"


class TestVerify:
    def test_ok(self, capsys, diag12_file):
        code, out, _ = run_cli(capsys, "verify", diag12_file)
        assert code == EXIT_OK
        assert out.startswith("verify ok:")
        assert "lower=" in out and "upper=" in out

    def test_lying_oracle_is_detected(self, capsys, diag12_file, monkeypatch):
        monkeypatch.setattr(
            "svbound.cli.singular_values", lambda matrix: Spectrum((5.0, 4.9))
        )
        code, _, err = run_cli(capsys, "verify", diag12_file)
        assert code == EXIT_VERIFY
        assert "verify failed:" in err

    def test_rejects_one_by_one(self, capsys, tmp_path):
        path = tmp_path / "one.csv"
        path.write_text("2\n")
        code, _, err = run_cli(capsys, "verify", str(path))
        assert code == EXIT_INPUT

    def test_rejects_oversize(self, capsys, tmp_path):
        n = 65
        rows = "\n".join(
            ", ".join("1" if i == j else "0" for j in range(n)) for i in range(n)
        )
        path = tmp_path / "big.csv"
        path.write_text(rows + "\n")
        code, _, err = run_cli(capsys, "verify", str(path))
        assert code == EXIT_INPUT
        assert "64" in err


class TestBench:
    def test_header_and_row_shape(self, capsys):
        code, out, _ = run_cli(capsys, "bench", "--samples", "3", "--rng-seed", "5")
        assert code == EXIT_OK
        lines = out.strip().splitlines()
        assert lines[0] == ",".join(BENCH_COLUMNS)
        assert len(lines) == 4
        for line in lines[1:]:
            fields = line.split(",")
            assert len(fields) == len(BENCH_COLUMNS)
            assert fields[8] in ("converged", "max-iter", "stalled-zero-correction")

    def test_spec_file(self, capsys, tmp_path):
        spec = tmp_path / "spec.json"
        spec.write_text(json.dumps({"samples": 2, "base_seed": 3}))
        code, out, _ = run_cli(capsys, "bench", "--spec-file", str(spec))
        assert code == EXIT_OK
        lines = out.strip().splitlines()
        assert [line.split(",")[0] for line in lines[1:]] == ["3", "4"]

    def test_thread_env_does_not_change_output(self, capsys, monkeypatch):
        code, serial, _ = run_cli(capsys, "bench", "--samples", "4", "--rng-seed", "11")
        assert code == EXIT_OK
        monkeypatch.setenv("SVBOUND_THREADS", "3")
        code, threaded, _ = run_cli(capsys, "bench", "--samples", "4", "--rng-seed", "11")
        assert code == EXIT_OK
        assert threaded == serial

    def test_garbage_thread_env(self, capsys, monkeypatch):
        monkeypatch.setenv("SVBOUND_THREADS", "many")
        code, _, err = run_cli(capsys, "bench", "--samples", "1")
        assert code == EXIT_INPUT
        assert "SVBOUND_THREADS" in err

    def test_bad_range_flag(self, capsys):
        code, _, err = run_cli(capsys, "bench", "--n-range", "3-5")
        assert code == EXIT_INPUT
        assert "LO:HI" in err


class TestTopLevel:
    def test_no_command_prints_help(self, capsys):
        code, out, _ = run_cli(capsys)
        assert code == EXIT_INPUT
        assert "bound" in out and "bench" in out and "verify" in out
