"""Command-line interface: reports, exit codes, determinism, dumps."""

import csv
import json
import math

import pytest

from mhroots.cli import main

BILINEAR = {"block_sizes": [1, 1], "degrees": [[1, 1], [1, 1]]}
QUARTIC = {"block_sizes": [1], "degrees": [[4]]}
MIXED = {"block_sizes": [1, 1], "degrees": [[1, 2], [2, 1]]}


def _write_shape(tmp_path, data, name="shape.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def _run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None


class TestBkkCommand:
    def test_bilinear(self, tmp_path, capsys):
        code, rep = _run(capsys, ["bkk", _write_shape(tmp_path, BILINEAR)])
        assert code == 0
        assert rep["results"]["bkk"]["value"] == 2
        assert rep["results"]["simply_reducible"] is False

    def test_k1_bezout(self, tmp_path, capsys):
        shape = {"block_sizes": [2], "degrees": [[2], [3]]}
        code, rep = _run(capsys, ["bkk", _write_shape(tmp_path, shape)])
        assert code == 0
        assert rep["results"]["bkk"]["value"] == 6
        assert rep["results"]["simply_reducible"] is True

    def test_game_unbalanced(self, tmp_path, capsys):
        shape = {"block_sizes": [1, 2], "degrees": [[0, 1], [1, 0], [1, 0]]}
        code, rep = _run(capsys, ["bkk", _write_shape(tmp_path, shape)])
        assert code == 0
        assert rep["results"]["bkk"]["value"] == 0


class TestExpectCommand:
    def test_quartic_closed_form(self, tmp_path, capsys):
        code, rep = _run(capsys, ["expect", _write_shape(tmp_path, QUARTIC)])
        assert code == 0
        res = rep["results"]["expectation"]
        assert res["value"] == pytest.approx(2.0)
        assert res["provenance"] == "closed_form"
        assert res["closed_form"]["radicand"] == 4

    def test_bilinear_closed_form(self, tmp_path, capsys):
        code, rep = _run(capsys, ["expect", _write_shape(tmp_path, BILINEAR)])
        res = rep["results"]["expectation"]
        assert res["value"] == pytest.approx(math.pi / 2)
        assert res["closed_form"] == {
            "rational": "1/2",
            "pi_sqrt_power": 2,
            "radicand": 1,
        }

    def test_mixed_shape_monte_carlo(self, tmp_path, capsys):
        code, rep = _run(
            capsys,
            ["expect", _write_shape(tmp_path, MIXED), "--samples", "20000", "--seed", "5"],
        )
        res = rep["results"]["expectation"]
        assert res["provenance"] == "monte_carlo"
        assert res["stderr"] > 0
        assert "mc" in res


class TestBoundsCommand:
    def test_bilinear(self, tmp_path, capsys):
        code, rep = _run(capsys, ["bounds", _write_shape(tmp_path, BILINEAR)])
        assert code == 0
        res = rep["results"]
        assert res["upper"]["value"] == pytest.approx(2.0)
        assert res["lower"]["value"] == pytest.approx(math.sqrt(2))
        assert res["equality"] is False
        assert res["margin_upper"] > 0 and res["margin_lower"] > 0


class TestMcDetCommand:
    def test_matches_library(self, tmp_path, capsys):
        import numpy as np

        from mhroots.gaussian import mc_abs_det

        code, rep = _run(
            capsys,
            ["mc-det", _write_shape(tmp_path, BILINEAR), "--samples", "20000", "--seed", "3"],
        )
        direct = mc_abs_det(np.ones((2, 2)), 20000, seed=3)
        assert rep["results"]["mean_abs_det"]["mean"] == direct.mean


class TestSimulateCommand:
    def test_bilinear_with_dump(self, tmp_path, capsys):
        dump = tmp_path / "counts.csv"
        code, rep = _run(
            capsys,
            [
                "simulate",
                _write_shape(tmp_path, BILINEAR),
                "--samples", "2000",
                "--seed", "7",
                "--dump", str(dump),
            ],
        )
        assert code == 0
        assert abs(rep["results"]["mean_roots"]["mean"] - math.pi / 2) < 0.15
        with open(dump, newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["sample", "root_count", "flags"]
        assert len(rows) == 2001
        assert all(row[1] in {"0", "1", "2"} for row in rows[1:])


class TestExitCodes:
    def test_invalid_json(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        assert main(["bkk", str(path)]) == 2

    def test_dimension_mismatch(self, tmp_path, capsys):
        bad = {"block_sizes": [2], "degrees": [[1]]}
        assert main(["bkk", _write_shape(tmp_path, bad)]) == 2

    def test_missing_file(self, capsys):
        assert main(["bkk", "/nonexistent/shape.json"]) == 2

    def test_resource_cap(self, tmp_path, capsys):
        big = {"block_sizes": [40], "degrees": [[1]] * 40}
        assert main(["bounds", _write_shape(tmp_path, big)]) == 3


class TestReportContract:
    def test_byte_identical_modulo_wall_time(self, tmp_path, capsys):
        argv = ["expect", _write_shape(tmp_path, MIXED), "--samples", "20000", "--seed", "9"]
        _, rep1 = _run(capsys, argv)
        _, rep2 = _run(capsys, argv)
        rep1.pop("wall_time_s")
        rep2.pop("wall_time_s")
        assert json.dumps(rep1, sort_keys=True) == json.dumps(rep2, sort_keys=True)

    def test_shape_echo_round_trips(self, tmp_path, capsys):
        _, rep = _run(capsys, ["bkk", _write_shape(tmp_path, BILINEAR)])
        assert rep["shape"] == BILINEAR

    def test_schema_and_tolerances_present(self, tmp_path, capsys):
        _, rep = _run(capsys, ["bkk", _write_shape(tmp_path, BILINEAR)])
        assert rep["schema"] == 1
        assert rep["tolerances"]["stderr_multiplier"] == 4.0
        assert rep["tolerances"]["imag_tau"] == 1e-8
        assert rep["tolerances"]["miss_budget"] == 0.05

    def test_threads_env_overrides_workers(self, tmp_path, capsys, monkeypatch):
        argv = ["expect", _write_shape(tmp_path, MIXED), "--samples", "20000", "--workers", "1"]
        _, rep1 = _run(capsys, argv)
        monkeypatch.setenv("MHROOTS_THREADS", "2")
        _, rep2 = _run(capsys, argv)
        assert rep2["workers"] == 2
        assert (
            rep1["results"]["expectation"]["value"]
            == rep2["results"]["expectation"]["value"]
        )


class TestVerifyCommand:
    def test_small_corpus_passes(self, tmp_path, capsys):
        dump = tmp_path / "checks.csv"
        code, rep = _run(
            capsys,
            [
                "verify",
                "--count", "5",
                "--samples", "4000",
                "--seed", "31",
                "--n-max", "4",
                "--dump", str(dump),
            ],
        )
        assert code == 0
        assert rep["results"]["ok"] is True
        assert rep["results"]["counts"]["fail"] == 0
        with open(dump, newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["check", "index", "status", "detail"]
        assert len(rows) == len(rep["results"]["checks"]) + 1
