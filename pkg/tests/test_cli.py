import csv
import io
import json

import numpy as np
import pytest

from lipfree.cli import main


def write_json(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


TWO_POINT = {
    "space": "l1N",
    "dim": 2,
    "terms": [
        {"point": [1.0, 0.0], "coeff": 1.0},
        {"point": [0.0, 1.0], "coeff": -1.0},
    ],
}

LINE_THREE = {
    "space": "l1N",
    "dim": 1,
    "terms": [
        {"point": [1.0], "coeff": 1.0},
        {"point": [2.0], "coeff": -2.0},
        {"point": [3.0], "coeff": 1.0},
    ],
}


class TestNorm:
    def test_two_point_value(self, tmp_path, capsys):
        path = write_json(tmp_path / "mol.json", TWO_POINT)
        code, out, _ = run(capsys, ["norm", "--input", path])
        assert code == 0
        payload = json.loads(out)
        assert payload["value"] == pytest.approx(2.0, abs=1e-9)
        assert any(e["value"] != 0.0 for e in payload["witness"])

    def test_empty_molecule(self, tmp_path, capsys):
        path = write_json(tmp_path / "mol.json", {"space": "l1", "terms": []})
        code, out, _ = run(capsys, ["norm", "--input", path])
        assert code == 0
        assert json.loads(out)["value"] == 0.0

    def test_three_term_line(self, tmp_path, capsys):
        path = write_json(tmp_path / "mol.json", LINE_THREE)
        code, out, _ = run(capsys, ["norm", "--input", path])
        assert code == 0
        assert json.loads(out)["value"] == pytest.approx(2.0, abs=1e-9)

    def test_parse_error_exits_2(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        code, _, err = run(capsys, ["norm", "--input", str(bad)])
        assert code == 2
        assert "error" in err

    def test_missing_file_exits_2(self, capsys):
        code, _, _ = run(capsys, ["norm", "--input", "/nonexistent.json"])
        assert code == 2

    def test_csv_format(self, tmp_path, capsys):
        path = write_json(tmp_path / "mol.json", TWO_POINT)
        code, out, _ = run(capsys, ["norm", "--input", path, "--format", "csv"])
        assert code == 0
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0] == ["point", "value"]
        assert float(rows[1][1]) == pytest.approx(2.0, abs=1e-9)


class TestProject:
    def test_builtin_function_rows(self, tmp_path, capsys):
        pts = write_json(tmp_path / "pts.json", {"points": [{"coords": {"1": 0.4}}, [0.25, 0.25]]})
        code, out, _ = run(capsys, ["project", "--input", pts, "--function", "l1-norm", "--n", "3"])
        assert code == 0
        payload = json.loads(out)
        assert len(payload["rows"]) == 2
        for row in payload["rows"]:
            assert set(row) == {"point", "value", "exact", "error", "bound"}
            assert row["error"] <= row["bound"] + 1e-9

    def test_coordinate_mode(self, tmp_path, capsys):
        pts = write_json(tmp_path / "pts.json", [[0.25, -0.25]])
        code, out, _ = run(
            capsys,
            ["project", "--input", pts, "--function", "l1-norm", "--n", "2", "--dim", "2"],
        )
        assert code == 0
        row = json.loads(out)["rows"][0]
        assert row["value"] == pytest.approx(0.5, abs=1e-12)
        assert row["exact"] == pytest.approx(0.5, abs=1e-12)

    def test_random_lattice_requires_seed(self, tmp_path, capsys):
        pts = write_json(tmp_path / "pts.json", [[0.5]])
        code, _, err = run(
            capsys,
            ["project", "--input", pts, "--function", "random-lattice", "--n", "2", "--dim", "1"],
        )
        assert code == 2
        assert "seed" in err

    def test_random_lattice_deterministic_given_seed(self, tmp_path, capsys):
        pts = write_json(tmp_path / "pts.json", [[0.5, 0.25]])
        argv = [
            "project", "--input", pts, "--function", "random-lattice",
            "--n", "2", "--dim", "2", "--seed", "42",
        ]
        code1, out1, _ = run(capsys, argv)
        code2, out2, _ = run(capsys, argv)
        assert code1 == code2 == 0
        assert out1 == out2

    def test_tabulated_function_file(self, tmp_path, capsys):
        fn = write_json(
            tmp_path / "fn.json",
            {"points": [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]], "values": [0.0, 1.0, -0.5]},
        )
        pts = write_json(tmp_path / "pts.json", [[0.5, 0.5]])
        code, out, _ = run(
            capsys,
            ["project", "--input", pts, "--function-file", fn, "--n", "2", "--dim", "2"],
        )
        assert code == 0
        assert json.loads(out)["rows"][0]["error"] >= 0.0


class TestFddTable:
    def test_non_dyadic_molecule_error_decays(self, tmp_path, capsys):
        mol = write_json(
            tmp_path / "mol.json",
            {"space": "l1", "terms": [{"point": {"coords": {"1": 1.0 / 3.0}}, "coeff": 1.0}]},
        )
        code, out, _ = run(capsys, ["fdd-table", "--input", mol, "--n-max", "12"])
        assert code == 0
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0] == ["n", "norm", "err", "bound", "support_size"]
        assert len(rows) == 13
        last_err = float(rows[-1][2])
        assert 0.0 < last_err < 1e-3

    def test_grid_supported_molecule_error_vanishes(self, tmp_path, capsys):
        mol = write_json(
            tmp_path / "mol.json",
            {"space": "l1N", "dim": 1, "terms": [{"point": [0.5], "coeff": 2.0}]},
        )
        code, out, _ = run(capsys, ["fdd-table", "--input", mol, "--n-max", "4", "--format", "csv"])
        assert code == 0
        rows = list(csv.reader(io.StringIO(out)))[1:]
        for row in rows:
            if int(row[0]) >= 2:
                assert float(row[2]) <= 1e-12

    def test_support_size_stays_under_rank_bound(self, tmp_path, capsys):
        mol = write_json(
            tmp_path / "mol.json",
            {
                "space": "l1N",
                "dim": 2,
                "terms": [
                    {"point": [0.3, -0.7], "coeff": 1.0},
                    {"point": [1.1, 0.2], "coeff": -2.0},
                ],
            },
        )
        code, out, _ = run(capsys, ["fdd-table", "--input", mol, "--n-max", "4"])
        assert code == 0
        for row in list(csv.reader(io.StringIO(out)))[1:]:
            n, size = int(row[0]), int(row[4])
            # cells of the coordinate mode are always 2-dimensional, so the
            # support lives in the level-n vertex grid of the plane and each
            # input point spreads over at most one cell's corners
            assert size <= ((2 ** (2 * n - 1)) + 1) ** 2
            assert size <= 2 * 2**2

    def test_json_format_carries_checks(self, tmp_path, capsys):
        mol = write_json(tmp_path / "mol.json", TWO_POINT)
        code, out, _ = run(capsys, ["fdd-table", "--input", mol, "--n-max", "3", "--format", "json"])
        assert code == 0
        payload = json.loads(out)
        assert payload["passed"] is True
        assert payload["monotone_ok"] and payload["lattice_ok"]


class TestVerify:
    def test_single_suite_runs_clean(self, capsys):
        code, out, _ = run(capsys, ["verify", "--suite", "interp-weight-simplex"])
        assert code == 0
        payload = json.loads(out)
        assert payload["passed"] is True
        assert payload["suites"][0]["name"] == "interp-weight-simplex"

    def test_unknown_suite_exits_2(self, capsys):
        code, _, _ = run(capsys, ["verify", "--suite", "no-such-suite"])
        assert code == 2

    def test_injected_weight_fault_fails_the_suite(self, capsys):
        import lipfree.interpolation as interpolation

        interpolation._WEIGHT_FAULT = True
        try:
            code, out, _ = run(capsys, ["verify", "--suite", "interp-weight-simplex"])
        finally:
            interpolation._WEIGHT_FAULT = False
        assert code == 1
        assert json.loads(out)["passed"] is False


class TestBap:
    def test_chain_rows_and_doubling_header(self, tmp_path, capsys):
        space = write_json(
            tmp_path / "space.json",
            {"embed_l1": [[0.0, 0.0], [1.0, 0.0], [0.0, 2.0], [1.5, 1.5]], "origin": 0},
        )
        code, out, _ = run(capsys, ["bap", "--input", space])
        assert code == 0
        lines = out.splitlines()
        assert lines[0].startswith("# doubling_estimate=")
        rows = list(csv.reader(io.StringIO("\n".join(lines[1:]))))
        assert rows[0] == ["n", "k_hat", "lip_ratio", "max_err"]
        assert float(rows[-1][3]) == 0.0  # full chain reproduces the function

    def test_triangle_violation_exits_2_naming_triple(self, tmp_path, capsys):
        space = write_json(
            tmp_path / "space.json",
            {
                "points": [0, 1, 2],
                "dist": [[0.0, 1.0, 9.0], [1.0, 0.0, 1.0], [9.0, 1.0, 0.0]],
                "origin": 0,
            },
        )
        code, _, err = run(capsys, ["bap", "--input", space])
        assert code == 2
        assert "triangle" in err and "(0, 1, 2)" in err

    def test_random_function_requires_seed(self, tmp_path, capsys):
        space = write_json(tmp_path / "space.json", {"embed_l1": [[0.0], [1.0]], "origin": 0})
        code, _, _ = run(capsys, ["bap", "--input", space, "--function", "random"])
        assert code == 2

    def test_uniform_metric_space_reports_finite_constants(self, tmp_path, capsys):
        k = 5
        dist = [[0.0 if i == j else 1.0 for j in range(k)] for i in range(k)]
        space = write_json(
            tmp_path / "space.json", {"points": list(range(k)), "dist": dist, "origin": 0}
        )
        code, out, _ = run(capsys, ["bap", "--input", space, "--function", "random", "--seed", "3"])
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "# doubling_estimate=5 scheme=inv-dist"
        rows = list(csv.reader(io.StringIO("\n".join(lines[1:]))))[1:]
        for row in rows:
            assert np.isfinite(float(row[1]))

    def test_json_format(self, tmp_path, capsys):
        space = write_json(
            tmp_path / "space.json", {"embed_l1": [[0.0], [1.0], [3.0]], "origin": 0}
        )
        code, out, _ = run(capsys, ["bap", "--input", space, "--format", "json"])
        assert code == 0
        payload = json.loads(out)
        assert payload["doubling_estimate"] >= 1
        assert payload["rows"][-1]["max_err"] == 0.0


class TestOutputs:
    def test_atomic_output_file(self, tmp_path, capsys):
        mol = write_json(tmp_path / "mol.json", TWO_POINT)
        target = tmp_path / "out.json"
        code, out, _ = run(capsys, ["norm", "--input", mol, "--output", str(target)])
        assert code == 0
        assert out == ""
        assert json.loads(target.read_text())["value"] == pytest.approx(2.0, abs=1e-9)
        assert not (tmp_path / "out.json.tmp").exists()

    def test_round_trip_through_own_parsers(self, tmp_path, capsys):
        from lipfree.freespace import Molecule, free_norm

        mol = write_json(tmp_path / "mol.json", LINE_THREE)
        code, out, _ = run(capsys, ["norm", "--input", mol, "--format", "json"])
        assert code == 0
        payload = json.loads(out)
        mu = Molecule.from_json(LINE_THREE)
        assert payload["value"] == pytest.approx(free_norm(mu).value, abs=1e-12)
