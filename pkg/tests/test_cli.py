import json

import numpy as np
import pytest

from takagi.cli import EXIT_CERTIFICATE, EXIT_INPUT, EXIT_NUMERICAL, EXIT_OK, main
from takagi.io import dump_json

DISK_PROBLEM = {
    "schema": 1,
    "kind": "disk",
    "nodes": [[0.2, 0.1], [-0.4, 0.0], [0.0, 0.3]],
    "values": [[1.8, 0.0], [0.4, -0.2], [0.0, -0.9]],
}

DEGENERATE_PROBLEM = {
    "schema": 1,
    "kind": "disk",
    "nodes": [[0.0, 0.0], [0.5, 0.0], [-0.5, 0.0], [0.0, 0.5]],
    "values": [[0.0, 0.0], [1.0, 0.0], [1.0, 0.0], [1.0, 0.0]],
}

BIDISK_PROBLEM = {
    "schema": 1,
    "kind": "bidisk",
    "nodes": [[[0.1, 0.0], [0.2, 0.0]], [[0.0, 0.3], [-0.1, 0.0]]],
    "values": [[1.5, 0.0], [0.4, 0.2]],
}


@pytest.fixture
def disk_file(tmp_path):
    path = tmp_path / "disk.json"
    dump_json(DISK_PROBLEM, str(path))
    return str(path)


@pytest.fixture
def bidisk_file(tmp_path):
    path = tmp_path / "bidisk.json"
    dump_json(BIDISK_PROBLEM, str(path))
    return str(path)


class TestInertia:
    def test_disk(self, disk_file, capsys):
        assert main(["inertia", disk_file]) == EXIT_OK
        out = capsys.readouterr().out
        assert "inertia (pos,neg,zero):" in out

    def test_degenerate_reports_zeta(self, tmp_path, capsys):
        path = tmp_path / "deg.json"
        dump_json(DEGENERATE_PROBLEM, str(path))
        assert main(["inertia", str(path)]) == EXIT_OK
        out = capsys.readouterr().out
        assert "(1,1,2)" in out.replace(" ", "")

    def test_bidisk_without_pair_is_input_error(self, bidisk_file, capsys):
        assert main(["inertia", bidisk_file]) == EXIT_INPUT

    def test_shipped_pair_file(self, capsys):
        assert main(["inertia", "problems/bidisk_pair.json"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "gamma1" in out and "gamma2" in out


class TestSolve:
    def test_disk_solve_writes_result(self, disk_file, tmp_path, capsys):
        out_path = tmp_path / "result.json"
        assert main(["solve", disk_file, "--out", str(out_path), "--seed", "0"]) == EXIT_OK
        data = json.loads(out_path.read_text())
        assert data["kind"] == "disk"
        assert data["certificate"]["pass"] is True
        assert "PASS" in capsys.readouterr().out

    def test_bidisk_solve(self, bidisk_file, tmp_path, capsys):
        out_path = tmp_path / "result.json"
        assert main(["solve", bidisk_file, "--out", str(out_path), "--seed", "0"]) == EXIT_OK
        data = json.loads(out_path.read_text())
        assert data["kind"] == "bidisk"
        assert data["certificate"]["pass"] is True

    def test_deterministic_output(self, disk_file, tmp_path):
        p1, p2 = tmp_path / "r1.json", tmp_path / "r2.json"
        assert main(["solve", disk_file, "--out", str(p1), "--seed", "5"]) == EXIT_OK
        assert main(["solve", disk_file, "--out", str(p2), "--seed", "5"]) == EXIT_OK
        assert p1.read_bytes() == p2.read_bytes()

    def test_malformed_file_is_input_error(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text('{"kind": "disk", "nodes": [[0.0, 0.0]], "values": 3}\n')
        assert main(["solve", str(path)]) == EXIT_INPUT
        assert "input error" in capsys.readouterr().err

    def test_invalid_json_is_input_error(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        assert main(["solve", str(path)]) == EXIT_INPUT


class TestVerify:
    def test_roundtrip(self, disk_file, tmp_path, capsys):
        out_path = tmp_path / "result.json"
        main(["solve", disk_file, "--out", str(out_path), "--seed", "0"])
        capsys.readouterr()
        assert main(["verify", str(out_path)]) == EXIT_OK
        assert "PASS" in capsys.readouterr().out

    def test_tampered_result_fails_certificate(self, disk_file, tmp_path, capsys):
        out_path = tmp_path / "result.json"
        main(["solve", disk_file, "--out", str(out_path), "--seed", "0"])
        data = json.loads(out_path.read_text())
        data["numerator"][0][0] += 0.5  # break the interpolation conditions
        dump_json(data, str(out_path))
        capsys.readouterr()
        assert main(["verify", str(out_path)]) == EXIT_CERTIFICATE

    def test_bidisk_roundtrip(self, bidisk_file, tmp_path, capsys):
        out_path = tmp_path / "result.json"
        main(["solve", bidisk_file, "--out", str(out_path), "--seed", "0"])
        capsys.readouterr()
        assert main(["verify", str(out_path)]) == EXIT_OK


class TestBoundarySamples:
    def test_disk_csv(self, disk_file, tmp_path, capsys):
        out_path = tmp_path / "result.json"
        main(["solve", disk_file, "--out", str(out_path), "--seed", "0"])
        capsys.readouterr()
        assert main(["boundary-samples", str(out_path), "--n", "16"]) == EXIT_OK
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0].startswith("theta")
        assert len(lines) == 17
        row = lines[1].split(",")
        assert abs(float(row[1]) - 1.0) < 1e-6  # |phi| on the circle

    def test_bidisk_csv(self, bidisk_file, tmp_path, capsys):
        out_path = tmp_path / "result.json"
        main(["solve", bidisk_file, "--out", str(out_path), "--seed", "0"])
        capsys.readouterr()
        assert main(["boundary-samples", str(out_path), "--n", "8"]) == EXIT_OK
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0].startswith("theta1")
        assert len(lines) == 65


class TestLemmaCheck:
    def test_passes(self, capsys):
        assert main(["lemma-check", "--m", "2", "--n", "1", "--trials", "5", "--seed", "0"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "0 failures" in out or "failures: 0" in out
