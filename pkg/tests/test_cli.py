"""Command-line interface: formats, reports, exit codes, schema."""

import json
from importlib import resources

import jsonschema
import numpy as np
import pytest

import linflow as lf
from linflow import formats
from linflow.cli import main


@pytest.fixture(scope="module")
def schema():
    text = resources.files("linflow").joinpath("schema/report.schema.json").read_text()
    return json.loads(text)


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, schema, *argv):
    code, out, err = run_cli(capsys, *argv, "--format", "json")
    report = json.loads(out)
    jsonschema.validate(report, schema)
    return code, report, err


class TestFormats:
    def test_scalar_tokens(self):
        cases = {
            "1": 1.0,
            "-2.5": -2.5,
            "3+4i": 3 + 4j,
            "3-4i": 3 - 4j,
            "i": 1j,
            "-i": -1j,
            "2i": 2j,
            "1e-3": 1e-3,
            "1.5e2i": 150j,
        }
        for tok, expected in cases.items():
            value, _ = formats.parse_scalar(tok)
            assert value == expected, tok

    def test_bad_token_rejected(self):
        with pytest.raises(lf.InputFormatError):
            formats.parse_scalar("2+3")
        with pytest.raises(lf.InputFormatError):
            formats.parse_scalar("abc")

    def test_text_roundtrip(self, rng):
        for _ in range(10):
            n = int(rng.integers(1, 5))
            a = rng.standard_normal((n, n))
            text = formats.emit_matrix_text(a)
            b, fld = formats.parse_matrix_text(text)
            assert fld == "real" and np.array_equal(a, b)
            c = a + 1j * rng.standard_normal((n, n))
            text = formats.emit_matrix_text(c)
            d, fld = formats.parse_matrix_text(text)
            assert fld == "complex" and np.array_equal(c, d)

    def test_json_document_roundtrip(self, rng):
        a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        doc = formats.matrix_to_document(a)
        b, fld = formats.document_to_matrix(doc)
        assert fld == "complex" and np.array_equal(a, b)

    def test_ragged_rows_rejected(self):
        with pytest.raises(lf.InputFormatError):
            formats.parse_matrix_text("1 2\n3\n")

    def test_error_carries_line_and_column(self):
        with pytest.raises(lf.InputFormatError) as info:
            formats.parse_matrix_text("1 2\n3 4x\n")
        assert "line 2" in str(info.value) and "column 2" in str(info.value)

    def test_inline_literals(self):
        a, fld, _ = formats.load_matrix("[[0,-1],[1,0]]")
        assert fld == "real" and np.array_equal(a, [[0, -1], [1, 0]])
        b, fld, _ = formats.load_matrix("[i]")
        assert fld == "complex" and b[0, 0] == 1j

    def test_missing_file(self):
        with pytest.raises(lf.InputFormatError):
            formats.load_matrix("/nonexistent/file.txt")


class TestClassify:
    def test_rotation_report(self, capsys, schema):
        code, report, _ = run_json(capsys, schema, "classify", "[[0,-1],[1,0]]")
        assert code == 0
        res = report["results"]
        assert res["dims"] == {"stable": 0, "central": 2, "unstable": 0}
        assert res["bounded"]["classes"][0]["period"] == pytest.approx(2 * np.pi)
        top = res["descriptors"]["topological"]
        assert top["dim_s"] == 0 and top["dim_u"] == 0
        assert top["central_structure"] == [{"eigenvalue": [0.0, 1.0], "sizes": [1]}]

    def test_zero_matrix_all_fixed(self, capsys, schema):
        code, report, _ = run_json(capsys, schema, "classify", "[[0,0],[0,0]]")
        assert code == 0
        res = report["results"]
        assert res["bounded"] == {"dim": 2, "fixed_dim": 2, "classes": []}

    def test_shift_block_core_table(self, capsys, schema):
        code, report, _ = run_json(
            capsys, schema, "classify", "[[0,1,0,0],[0,0,1,0],[0,0,0,1],[0,0,0,0]]"
        )
        assert code == 0
        prof = report["results"]["core_profile"]
        assert len(prof) == 1 and prof[0]["frequency"] == 0.0
        assert prof[0]["c"] == [1, 1, 1, 1, 0]
        assert prof[0]["d"] == [0, 0, 0, 1]

    def test_text_output_contains_same_numbers(self, capsys):
        code, out, _ = run_cli(capsys, "classify", "[[0,-1],[1,0]]")
        assert code == 0
        assert "stable=0 central=2 unstable=0" in out

    def test_parse_error_exit_code(self, capsys, tmp_path):
        bad = tmp_path / "bad.txt"
        bad.write_text("1 2\n3 oops\n")
        code, _, err = run_cli(capsys, "classify", str(bad))
        assert code == 2 and "line 2" in err

    def test_non_square_exit_code(self, capsys):
        code, _, err = run_cli(capsys, "classify", "[[1,2,3],[4,5,6]]")
        assert code == 2 and "square" in err


class TestCompare:
    def test_smooth_equivalent(self, capsys, schema):
        code, report, _ = run_json(
            capsys, schema, "compare", "[[0,-1],[1,0]]", "[[0,-3],[3,0]]",
            "--relation", "smooth",
        )
        assert code == 0
        res = report["results"]
        assert res["equivalent"] and res["alpha"] == pytest.approx(1 / 3)
        assert res["verification"]["passed"]

    def test_not_equivalent_exit_one(self, capsys):
        code, out, _ = run_cli(
            capsys, "compare", "[[1,1],[0,1]]", "[[-1,-1],[0,-1]]",
            "--relation", "smooth",
        )
        assert code == 1 and "not equivalent" in out

    def test_complex_split_pair(self, capsys):
        code, _, _ = run_cli(
            capsys, "compare", "[i]", "[-i]", "--relation", "topological"
        )
        assert code == 0
        code, _, _ = run_cli(capsys, "compare", "[i]", "[-i]", "--relation", "smooth")
        assert code == 1

    def test_field_mismatch_requires_realify(self, capsys):
        code, _, err = run_cli(capsys, "compare", "[i]", "[[1]]")
        assert code == 2 and "realify" in err
        code, _, _ = run_cli(capsys, "compare", "[i]", "[[1]]", "--realify")
        assert code == 1  # rotation vs source: not equivalent, but comparable

    def test_certificate_out(self, capsys, tmp_path, schema):
        path = tmp_path / "cert.json"
        code, report, _ = run_json(
            capsys, schema, "compare", "[[0,-1],[1,0]]", "[[0,-2],[2,0]]",
            "--relation", "smooth", "--certificate-out", str(path),
        )
        assert code == 0
        doc = json.loads(path.read_text())
        h, _ = formats.document_to_matrix(doc)
        a = np.array([[0.0, -1.0], [1.0, 0.0]])
        b = 2.0 * a
        alpha = report["results"]["alpha"]
        assert np.allclose(h @ a, alpha * b @ h, atol=1e-9)

    def test_batch_mode(self, capsys, tmp_path, schema):
        batch = tmp_path / "batch.txt"
        batch.write_text(
            "[[0,-1],[1,0]] [[0,-5],[5,0]]\n"
            "# comment line\n"
            "[[1,0],[0,1]] [[1,1],[0,1]]\n"
        )
        code, report, _ = run_json(
            capsys, schema, "compare", "--batch", str(batch), "--relation", "smooth"
        )
        assert code == 1  # second pair not equivalent
        comps = report["results"]["comparisons"]
        assert [c["equivalent"] for c in comps] == [True, False]

    def test_deterministic_json(self, capsys, schema):
        _, r1, _ = run_json(capsys, schema, "compare", "[[1]]", "[[2]]")
        _, r2, _ = run_json(capsys, schema, "compare", "[[1]]", "[[2]]")
        assert json.dumps(r1, sort_keys=True) == json.dumps(r2, sort_keys=True)

    def test_text_and_json_carry_the_same_alpha(self, capsys, schema):
        args = ("compare", "[[0,-1],[1,0]]", "[[0,-4],[4,0]]", "--relation", "smooth")
        _, report, _ = run_json(capsys, schema, *args)
        _, text, _ = run_cli(capsys, *args)
        alpha = report["results"]["alpha"]
        assert f"alpha={alpha:.12g}" in text

    def test_batch_line_with_wrong_token_count_is_input_error(self, capsys, tmp_path):
        batch = tmp_path / "bad.txt"
        batch.write_text("[[1]] [[2]] [[3]]\n")
        code, _, err = run_cli(capsys, "compare", "--batch", str(batch))
        assert code == 2 and "two sources" in err

    def test_compare_without_matrices_is_input_error(self, capsys):
        code, _, err = run_cli(capsys, "compare")
        assert code == 2 and "two matrices" in err


class TestEnum2:
    def test_topological_catalog_partition(self, capsys, schema):
        code, report, _ = run_json(capsys, schema, "enum2", "--relation", "topological")
        assert code == 0
        res = report["results"]
        assert res["class_count"] == 8
        assert len(res["entries"]) == 13
        assert res["catalog_check"] == "8 classes confirmed"

    def test_smooth_catalog_lists_families(self, capsys, schema):
        code, report, _ = run_json(capsys, schema, "enum2", "--relation", "smooth")
        assert code == 0
        res = report["results"]
        families = [e for e in res["entries"] if e["matrix"] is None]
        assert len(families) == 5
        assert all(e["constraint"] for e in families)


class TestSelftest:
    def test_identity_grids_pass(self, capsys, schema):
        code, report, _ = run_json(capsys, schema, "selftest")
        assert code == 0
        assert all(v["passed"] for v in report["results"].values())


class TestExitCodes:
    def test_internal_consistency_maps_to_exit_three(self, capsys, monkeypatch):
        import linflow.cli as cli

        def boom(args):
            raise lf.InternalConsistencyError("forced for the exit-code contract")

        monkeypatch.setattr(cli, "cmd_selftest", boom)
        code = cli.main(["selftest"])
        err = capsys.readouterr().err
        assert code == 3 and "internal consistency" in err


class TestToleranceFlags:
    def test_cluster_flag_changes_outcome(self, capsys):
        # two nearly equal frequencies: distinct at the default radius,
        # merged when the radius is widened
        a = "[[0,-1,0,0],[1,0,0,0],[0,0,0,-1.0000001],[0,0,1.0000001,0]]"
        code, out, _ = run_cli(capsys, "classify", a, "--format", "json")
        assert code == 0
        n_clusters = len(json.loads(out)["results"]["jordan_structure"])
        assert n_clusters == 2
        code, out, _ = run_cli(
            capsys, "classify", a, "--format", "json", "--tol-cluster", "1e-3"
        )
        n_merged = len(json.loads(out)["results"]["jordan_structure"])
        assert n_merged == 1
