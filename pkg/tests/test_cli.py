"""CLI surface: output shapes, exit codes, and byte determinism."""

import json
import subprocess
import sys

import pytest

from picard20.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)


class TestClassgroup:
    def test_known_group(self, capsys):
        code, blob = run_cli(capsys, "classgroup", "-d", "-84")
        assert code == 0
        assert blob["class_number"] == 4
        assert blob["elementary_divisors"] == [2, 2]
        assert blob["two_torsion"] is True
        assert blob["ambiguous_classes"] == 4
        assert len(blob["forms"]) == 4
        assert [1, 0, 21] in blob["forms"]

    def test_invalid_discriminant(self, capsys):
        code, blob = run_cli(capsys, "classgroup", "-d", "-5")
        assert code == 1
        assert blob["error"]["code"] == "PRECONDITION"


class TestClassify:
    def test_h1_bound_200(self, capsys):
        code, blob = run_cli(capsys, "classify", "--bound", "200")
        assert code == 0
        assert blob["count"] == 13
        assert blob["discriminants"][0] == -3
        assert blob["discriminants"][-1] == -163

    def test_two_torsion_carries_note(self, capsys):
        code, blob = run_cli(capsys, "classify", "--bound", "300", "--two-torsion")
        assert code == 0
        assert -120 in blob["discriminants"]
        assert "note" in blob


class TestCount:
    def test_d19_at_5(self, capsys):
        code, blob = run_cli(capsys, "count", "--model", "d19", "--p", "5")
        assert code == 0
        assert blob["surface_count"] == 117
        assert blob["trace_ap"] == -9

    def test_bad_prime_is_an_error(self, capsys):
        code, blob = run_cli(capsys, "count", "--model", "d19", "--p", "19")
        assert code == 1
        assert blob["error"]["code"] == "PRECONDITION"
        assert "not a good prime" in blob["error"]["message"]

    def test_inert_prime_counts_without_trace(self, capsys):
        code, blob = run_cli(capsys, "count", "--model", "d4", "--p", "7")
        assert code == 0
        assert blob["surface_count"] == 190
        assert blob["trace_ap"] is None


class TestFibers:
    def test_d27_table(self, capsys):
        code, blob = run_cli(capsys, "fibers", "--model", "d27")
        assert code == 0
        # conjugate places stay grouped, so tally geometric fibers by degree
        tally: dict[str, int] = {}
        for row in blob["fibers"]:
            tally[row["type"]] = tally.get(row["type"], 0) + row["degree"]
        assert tally == {"I1": 4, "I2": 1, "I9": 2}
        assert blob["euler_total"] == 24

    def test_d3_additive_table(self, capsys):
        code, blob = run_cli(capsys, "fibers", "--model", "d3")
        assert code == 0
        types = sorted(row["type"] for row in blob["fibers"])
        assert types == ["II*", "II*", "IV"]
        assert blob["euler_total"] == 24


class TestHeight:
    def test_free_section_height(self, capsys):
        code, blob = run_cli(capsys, "height", "--model", "d27", "--section", "0")
        assert code == 0
        assert blob["height"] == "3/2"
        assert blob["pole_order"] == 0
        assert blob["torsion_order"] == 0
        assert ["t=0", 1, "1/2"] in blob["corrections"]

    def test_torsion_corrections(self, capsys):
        code, blob = run_cli(capsys, "height", "--model", "d7-tate", "--section", "0")
        assert code == 0
        assert blob["height"] == "0"
        assert blob["torsion_order"] == 7
        contribs = sorted(c[2] for c in blob["corrections"])
        assert contribs == ["10/7", "12/7", "6/7"]

    def test_out_of_range_index(self, capsys):
        code, blob = run_cli(capsys, "height", "--model", "d27", "--section", "5")
        assert code == 1
        assert blob["error"]["code"] == "PRECONDITION"


class TestNsdisc:
    def test_d27(self, capsys):
        code, blob = run_cli(capsys, "nsdisc", "--model", "d27")
        assert code == 0
        assert blob["ns_discriminant"] == -27

    def test_twist_preserves_geometric_invariant(self, capsys, tmp_path):
        # a quadratic twist is a Q-form of the same surface
        from picard20.ellsurf import model_to_json, twist_model
        from picard20.models import get_model

        path = tmp_path / "d19_twist.json"
        path.write_text(json.dumps(model_to_json(twist_model(get_model("d19"), 5))))
        code, blob = run_cli(capsys, "nsdisc", "--model", str(path))
        assert code == 0
        assert blob["ns_discriminant"] == -19


class TestVerify:
    def test_verdict_block(self, capsys):
        code, blob = run_cli(capsys, "verify", "--model", "d19", "--pmax", "100")
        assert code == 0
        assert blob["twist"] == "matches_base"
        assert all(blob["verdicts"].values())
        assert blob["yp_gcd"] == "1/2"

    def test_out_file_matches_stdout(self, capsys, tmp_path):
        out_path = tmp_path / "report.json"
        code = main(
            ["verify", "--model", "d19", "--pmax", "60", "--out", str(out_path)]
        )
        stdout = capsys.readouterr().out
        assert code == 0
        assert out_path.read_bytes() == stdout.encode()


class TestModelLoading:
    def test_model_from_file(self, capsys, tmp_path):
        code, blob = run_cli(capsys, "fibers", "--model", "d4")
        path = tmp_path / "exported.json"
        from picard20.ellsurf import model_to_json
        from picard20.models import get_model

        path.write_text(json.dumps(model_to_json(get_model("d4"))))
        code2, blob2 = run_cli(capsys, "fibers", "--model", str(path))
        assert (code, code2) == (0, 0)
        assert blob == blob2

    def test_unknown_model(self, capsys):
        code, blob = run_cli(capsys, "count", "--model", "d99", "--p", "5")
        assert code == 1
        assert blob["error"]["code"] == "UNKNOWN_MODEL"


class TestArgparseContract:
    def test_usage_error_exits_2(self):
        with pytest.raises(SystemExit) as exc:
            main(["classify"])
        assert exc.value.code == 2

    def test_no_subcommand_exits_2(self):
        with pytest.raises(SystemExit) as exc:
            main([])
        assert exc.value.code == 2


def test_list_models(capsys):
    code, blob = run_cli(capsys, "list-models")
    assert code == 0
    names = [row["name"] for row in blob["models"]]
    assert names == sorted(names)
    assert {"d19", "d27", "d7-tate", "d4", "d3", "d11"} <= set(names)


def test_table_check_command(capsys):
    code, blob = run_cli(capsys, "table-check")
    assert code == 0
    assert blob["all_as_expected"] is True
    assert blob["flagged"] == [-3]


def test_lemma_r_command(capsys):
    code, blob = run_cli(capsys, "lemma-r", "-d", "-4", "-r", "2", "--bound", "10000")
    assert code == 0
    assert blob["verdict"] is True


class TestByteDeterminism:
    def test_verify_repeat_runs_identical(self):
        cmd = [
            sys.executable,
            "-m",
            "picard20.cli",
            "verify",
            "--model",
            "d19",
            "--pmax",
            "200",
        ]
        first = subprocess.run(cmd, capture_output=True, check=True)
        second = subprocess.run(cmd, capture_output=True, check=True)
        assert first.stdout == second.stdout
        assert first.stdout.endswith(b"\n")
