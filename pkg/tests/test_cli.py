import json

import numpy as np

from crchan.cli import main
from crchan.serialize import load_basis, load_centrals, load_structure


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out


class TestStructureCommand:
    def test_four_qubit_table(self, capsys):
        code, out = run(capsys, "structure", "--n", "4", "--d", "2", "--format", "json")
        assert code == 0
        payload = json.loads(out)
        assert payload["schema_version"] == 1
        rows = [(r["twice_j"], r["p"], r["q"]) for r in payload["rows"]]
        assert rows == [(0, 2, 1), (2, 3, 3), (4, 1, 5)]
        assert [w["dim"] for w in payload["weight_dims"]] == [1, 4, 6, 4, 1]
        assert payload["totals"] == {"dim": 16, "fix_dim": 14}

    def test_text_output_contains_staircase(self, capsys):
        code, out = run(capsys, "structure", "--n", "4")
        assert code == 0
        assert "j=2" in out and "dim V_m" in out

    def test_staircase_suppressed_for_large_n(self, capsys):
        code, out = run(capsys, "structure", "--n", "13")
        assert code == 0
        assert "dim V_m" not in out  # table only beyond n=12

    def test_single_qudit(self, capsys):
        code, out = run(capsys, "structure", "--n", "1", "--d", "5", "--format", "json")
        assert code == 0
        rows = [(r["twice_j"], r["p"], r["q"]) for r in json.loads(out)["rows"]]
        assert rows == [(4, 1, 5)]

    def test_three_qutrits_json(self, capsys):
        code, out = run(capsys, "structure", "--n", "3", "--d", "3", "--format", "json")
        rows = [(r["twice_j"], r["p"], r["q"]) for r in json.loads(out)["rows"]]
        assert rows == [(0, 1, 1), (2, 3, 3), (4, 2, 5), (6, 1, 7)]

    def test_csv_row_count(self, capsys):
        code, out = run(capsys, "structure", "--n", "5", "--format", "csv")
        assert code == 0
        lines = [line for line in out.strip().splitlines() if line.strip()]
        assert len(lines) == 4  # header + 3 block rows
        assert lines[1].startswith("1/2,")

    def test_deterministic_output(self, capsys):
        _, first = run(capsys, "structure", "--n", "6", "--format", "json")
        _, second = run(capsys, "structure", "--n", "6", "--format", "json")
        assert first == second

    def test_invalid_n(self, capsys):
        code, _ = run(capsys, "structure", "--n", "0")
        assert code == 2


class TestVerifyCommand:
    def test_two_qubits_pass(self, capsys):
        code, out = run(capsys, "verify", "--n", "2", "--d", "2")
        assert code == 0
        assert "commutant dim 2" in out
        assert "FAIL" not in out

    def test_single_qubit(self, capsys):
        code, out = run(capsys, "verify", "--n", "1", "--d", "2")
        assert code == 0
        assert "commutant dim 1" in out

    def test_json_format(self, capsys):
        code, out = run(capsys, "verify", "--n", "2", "--format", "json")
        assert code == 0
        payload = json.loads(out)
        statuses = {c["name"]: c["status"] for c in payload["checks"]}
        assert statuses["block_census"] == "PASS"
        assert "FAIL" not in statuses.values()

    def test_oracle_checks_skipped_above_budget(self, capsys):
        # dim 128 exceeds the oracle budget of 64: oracle checks are
        # reported as skipped, never as passed
        code, out = run(capsys, "verify", "--n", "7", "--d", "2")
        assert code == 0
        assert "SKIP" in out
        skipped = [line for line in out.splitlines() if line.startswith("SKIP")]
        assert any("fixed_point_dimension" in line for line in skipped)

    def test_budget_exit_code(self, capsys):
        code, _ = run(capsys, "verify", "--n", "13", "--d", "2")
        assert code == 3

    def test_budget_flag_lowers_limit(self, capsys):
        code, _ = run(capsys, "verify", "--n", "3", "--budget-dim", "4")
        assert code == 3

    def test_four_qubit_commutant_dim(self, capsys):
        code, out = run(capsys, "verify", "--n", "4", "--d", "2")
        assert code == 0
        assert "commutant dim 14" in out

    def test_degenerate_angle_exit_code(self, capsys):
        code, _ = run(capsys, "verify", "--n", "2", "--thetas", "0,1,1")
        assert code == 2

    def test_failure_exit_code_and_naming(self, capsys):
        # an unreachable residual bound makes real checks fail
        code, out = run(capsys, "verify", "--n", "2", "--tol-verify", "1e-30")
        assert code == 1
        assert "FAIL" in out
        assert "first failing check is" in out


class TestSimulateCommand:
    def test_protected_qubit(self, capsys):
        code, out = run(
            capsys,
            "simulate", "--n", "3", "--d", "2", "--j", "1/2",
            "--trials", "20", "--seed", "42",
        )
        assert code == 0
        assert "logical dim 2" in out
        assert "negative control" in out

    def test_trivial_block(self, capsys):
        code, out = run(
            capsys, "simulate", "--n", "2", "--d", "2", "--j", "0", "--trials", "5"
        )
        assert code == 0
        assert "logical dim 1" in out
        assert "no qudit" in out

    def test_qutrit_block(self, capsys):
        code, out = run(
            capsys, "simulate", "--n", "4", "--d", "2", "--j", "1", "--trials", "5"
        )
        assert code == 0
        assert "logical dim 3" in out

    def test_json_deterministic(self, capsys):
        argv = ("simulate", "--n", "3", "--j", "1/2", "--trials", "5",
                "--seed", "9", "--format", "json")
        _, first = run(capsys, *argv)
        _, second = run(capsys, *argv)
        assert first == second
        payload = json.loads(first)
        assert payload["reports"][0]["min_fidelity"] >= 1 - 1e-9

    def test_unknown_block_exit_code(self, capsys):
        code, _ = run(capsys, "simulate", "--n", "2", "--j", "7")
        assert code == 2

    def test_missing_block_flag(self, capsys):
        code, _ = run(capsys, "simulate", "--n", "2")
        assert code == 2

    def test_zero_trials_rejected(self, capsys):
        code, _ = run(capsys, "simulate", "--n", "2", "--j", "0", "--trials", "0")
        assert code == 2


class TestExportCommand:
    def test_round_trip(self, tmp_path, capsys, get_decomp):
        code, _ = run(
            capsys, "export", "--n", "3", "--d", "2",
            "--out", str(tmp_path), "--centrals",
        )
        assert code == 0
        structure = load_structure(tmp_path / "structure.json")
        assert structure["totals"] == {"dim": 8, "fix_dim": 5}

        basis = load_basis(tmp_path / "basis.json")
        decomp = get_decomp(3, 2)
        # bit-exact round trip at full printed precision
        assert np.array_equal(basis["unitary"], decomp.unitary())
        assert basis["labels"] == decomp.column_labels()

        centrals = load_centrals(tmp_path / "centrals.json")
        assert [tj for tj, _ in centrals] == [1, 3]
        for (tj, matrix), j in zip(centrals, (0.5, 1.5)):
            assert np.array_equal(matrix, decomp.central_projection(j))

    def test_block_map_four_qubits(self, tmp_path, capsys):
        code, _ = run(capsys, "export", "--n", "4", "--d", "2", "--out", str(tmp_path))
        assert code == 0
        basis = load_basis(tmp_path / "basis.json")
        assert basis["blocks"] == [(0, 1), (0, 2), (2, 1), (2, 2), (2, 3), (4, 1)]

    def test_csv_structure_file(self, tmp_path, capsys):
        code, _ = run(
            capsys, "export", "--n", "5", "--d", "2",
            "--out", str(tmp_path), "--format", "csv",
        )
        assert code == 0
        lines = (tmp_path / "structure.csv").read_text().strip().splitlines()
        assert len(lines) == 4  # header + 3 rows

    def test_byte_identical_reruns(self, tmp_path, capsys):
        out_a = tmp_path / "a"
        out_b = tmp_path / "b"
        run(capsys, "export", "--n", "2", "--d", "2", "--out", str(out_a))
        run(capsys, "export", "--n", "2", "--d", "2", "--out", str(out_b))
        assert (out_a / "basis.json").read_bytes() == (out_b / "basis.json").read_bytes()

    def test_io_failure_exit_code(self, tmp_path, capsys):
        blocker = tmp_path / "blocker"
        blocker.write_text("not a directory")
        code, _ = run(capsys, "export", "--n", "2", "--out", str(blocker / "sub"))
        assert code == 4
