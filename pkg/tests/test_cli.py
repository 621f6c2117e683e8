"""Command-line client: subcommands, exit codes, determinism, remote mode."""

import json
import math
from pathlib import Path

import pytest

from qincompat import cli


def run_cli(argv):
    return cli.main(argv)


@pytest.fixture()
def mub_files(tmp_path):
    assert run_cli(["mub", "--dim", "2", "--out-dir", str(tmp_path)]) == 0
    return str(tmp_path / "mub_d2_e.json"), str(tmp_path / "mub_d2_f.json")


class TestUpsilonCommand:
    def test_qubit_mub_prints_four(self, mub_files, capsys):
        e, f = mub_files
        assert run_cli(["upsilon", "--p", "1", e, f]) == 0
        out = capsys.readouterr().out.strip()
        assert abs(float(out) - 4.0) <= 1e-9

    def test_infinity_exponent(self, mub_files, capsys):
        e, f = mub_files
        assert run_cli(["upsilon", "--p", "inf", e, f]) == 0
        assert abs(float(capsys.readouterr().out) - 2.0) <= 1e-9

    def test_json_format_schema(self, mub_files, capsys):
        e, f = mub_files
        assert run_cli(["upsilon", "--p", "2", "--format", "json", e, f]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert set(doc) == {"command", "inputs", "params", "results", "residuals"}
        assert doc["command"] == "upsilon"
        assert abs(doc["results"]["value"] - 2.0 * math.sqrt(2.0)) <= 1e-9

    def test_rank1_method(self, mub_files, capsys):
        e, f = mub_files
        assert run_cli(["upsilon", "--p", "1", "--method", "rank1", e, f]) == 0
        assert abs(float(capsys.readouterr().out) - 4.0) <= 1e-9

    def test_out_file(self, mub_files, tmp_path, capsys):
        e, f = mub_files
        target = tmp_path / "value.txt"
        assert run_cli(["upsilon", "--p", "1", "--out", str(target), e, f]) == 0
        assert capsys.readouterr().out == ""
        assert abs(float(target.read_text()) - 4.0) <= 1e-9

    def test_invalid_file_exits_one(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text('{"dim": 2, "operators": [[[1.2, 0], [0, 0], [0, 0], [0, 0]], [[-0.2, 0], [0, 0], [0, 0], [1, 0]]]}')
        code = run_cli(["upsilon", "--p", "1", str(bad), str(bad)])
        assert code == 1
        assert "not a valid measurement" in capsys.readouterr().err

    def test_missing_file_exits_one(self, capsys):
        assert run_cli(["upsilon", "--p", "1", "no_such.json", "no_such.json"]) == 1


class TestUsageErrors:
    def test_unknown_subcommand_exits_64(self):
        with pytest.raises(SystemExit) as exc:
            run_cli(["frobnicate"])
        assert exc.value.code == 64

    def test_bad_flag_exits_64(self, mub_files):
        e, f = mub_files
        with pytest.raises(SystemExit) as exc:
            run_cli(["upsilon", "--nope", e, f])
        assert exc.value.code == 64

    def test_missing_required_exits_64(self):
        with pytest.raises(SystemExit) as exc:
            run_cli(["random", "--kind", "basis", "--dim", "2"])  # no --seed
        assert exc.value.code == 64


class TestEtaGCommand:
    def test_value_and_exit(self, mub_files, capsys):
        e, f = mub_files
        assert run_cli(["eta-g", e, f]) == 0
        val = float(capsys.readouterr().out)
        assert abs(val - 0.5 * (1.0 + 1.0 / math.sqrt(2.0))) <= 1e-6

    def test_json_contains_residuals(self, mub_files, capsys):
        e, f = mub_files
        assert run_cli(["eta-g", "--format", "json", e, f]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["results"]["converged"] is True
        assert doc["residuals"]["primal"]["max_violation"] <= 1e-7
        assert doc["residuals"]["dual"]["max_violation"] <= 1e-7

    def test_dump_sdp(self, mub_files, tmp_path):
        e, f = mub_files
        dump = tmp_path / "problem.json"
        assert run_cli(["eta-g", "--dump-sdp", str(dump), e, f]) == 0
        doc = json.loads(dump.read_text())
        assert doc["objective"] == "maximize eta"
        assert doc["equalities"]["rows"] == 20

    def test_non_convergence_exits_two(self, mub_files, capsys):
        e, f = mub_files
        assert run_cli(["eta-g", "--max-iterations", "1", e, f]) == 2
        assert "did not converge" in capsys.readouterr().err

    def test_output_is_byte_deterministic(self, mub_files, capsys):
        e, f = mub_files
        assert run_cli(["eta-g", e, f]) == 0
        first = capsys.readouterr().out
        assert run_cli(["eta-g", e, f]) == 0
        assert capsys.readouterr().out == first


class TestCertifyCommand:
    def test_human_output(self, mub_files, capsys):
        e, f = mub_files
        assert run_cli(["certify", "--p", "1", e, f]) == 0
        out = capsys.readouterr().out
        assert "is_maximal true" in out
        assert "max_value 4" in out


class TestFixtureCommands:
    def test_mub_writes_deterministic_files(self, tmp_path):
        d1 = tmp_path / "a"
        d2 = tmp_path / "b"
        assert run_cli(["mub", "--dim", "3", "--out-dir", str(d1)]) == 0
        assert run_cli(["mub", "--dim", "3", "--out-dir", str(d2)]) == 0
        for name in ("mub_d3_e.json", "mub_d3_f.json"):
            assert (d1 / name).read_bytes() == (d2 / name).read_bytes()

    def test_random_rank1_deterministic(self, tmp_path, capsys):
        d1 = tmp_path / "a"
        d2 = tmp_path / "b"
        args = ["random", "--kind", "rank1", "--dim", "2", "--n", "3", "--seed", "7"]
        assert run_cli(args + ["--out-dir", str(d1)]) == 0
        assert run_cli(args + ["--out-dir", str(d2)]) == 0
        name = "random_rank1_d2_n3_seed7.json"
        assert (d1 / name).read_bytes() == (d2 / name).read_bytes()

    def test_generated_files_revalidate(self, tmp_path, capsys):
        assert run_cli(["random", "--kind", "basis", "--dim", "3", "--seed", "1", "--out-dir", str(tmp_path)]) == 0
        path = tmp_path / "random_basis_d3_seed1.json"
        assert run_cli(["validate", str(path)]) == 0
        assert "ok" in capsys.readouterr().out

    def test_fixture_round_trip_preserves_bytes(self, tmp_path):
        from qincompat import serialize

        assert run_cli(["random", "--kind", "rank1", "--dim", "3", "--n", "4", "--seed", "3", "--out-dir", str(tmp_path)]) == 0
        path = tmp_path / "random_rank1_d3_n4_seed3.json"
        text = path.read_text()
        reloaded = serialize.povm_from_json(text)
        assert serialize.povm_to_json(reloaded) == text


class TestPreprocessDemoCommand:
    def test_prints_before_after(self, capsys):
        assert run_cli(["preprocess-demo", "--p", "1"]) == 0
        out = capsys.readouterr().out
        lines = dict(line.split() for line in out.strip().splitlines())
        assert float(lines["before"]) == 0.0
        assert float(lines["after"]) > 0.25

    def test_writes_builtin_fixtures(self, tmp_path, capsys):
        assert run_cli(["preprocess-demo", "--out-dir", str(tmp_path)]) == 0
        names = {p.name for p in tmp_path.iterdir()}
        assert names == {"paper-qutrit-E.json", "paper-qutrit-F.json", "paper-kraus-channel.json"}


class TestCurvesCommand:
    def test_csv_to_stdout(self, capsys):
        assert run_cli(["curves", "uncertainty", "--dim", "3", "--p", "1", "--grid-n", "5"]) == 0
        out = capsys.readouterr().out
        assert out.startswith("# kind=uncertainty d=3 p=1")
        assert len(out.strip().splitlines()) == 7

    def test_out_file_101_rows(self, tmp_path):
        target = tmp_path / "fig.csv"
        assert run_cli(["curves", "uncertainty", "--dim", "3", "--p", "1", "--out", str(target)]) == 0
        lines = target.read_text().strip().splitlines()
        assert len(lines) == 2 + 101
        first = [float(v) for v in lines[2].split(",")]
        last = [float(v) for v in lines[-1].split(",")]
        assert abs(first[0] - 1.0 / 3.0) <= 1e-15
        assert abs(first[2] - 6.0 * math.sqrt(2.0)) <= 1e-9
        assert abs(first[3] - 6.0 * math.sqrt(2.0)) <= 1e-9
        assert last == [1.0, 0.0, 0.0, 4.0]

    def test_hp_requires_valid_cbar(self, capsys):
        assert run_cli(["curves", "h_p", "--dim", "2", "--p", "1", "--cbar", "1.5"]) == 1


class TestValidateCommand:
    def test_mixed_results(self, tmp_path, mub_files, capsys):
        good, _ = mub_files
        bad = tmp_path / "bad.json"
        bad.write_text("not json")
        code = run_cli(["validate", good, str(bad)])
        assert code == 1
        out = capsys.readouterr().out
        assert f"{good} ok" in out
        assert "INVALID" in out


class TestRemoteMode:
    def test_server_flag_round_trips_through_http(self, mub_files, capsys, monkeypatch):
        from fastapi.testclient import TestClient

        from qincompat.service.app import app

        client = TestClient(app)

        def fake_post(url, json=None, timeout=None):
            path = url.replace("http://unit.test", "")
            return client.post(path, json=json)

        import httpx

        monkeypatch.setattr(httpx, "post", fake_post)
        e, f = mub_files
        assert run_cli(["--server", "http://unit.test", "upsilon", "--p", "1", e, f]) == 0
        assert abs(float(capsys.readouterr().out) - 4.0) <= 1e-9

    def test_server_error_maps_to_validation_exit(self, mub_files, capsys, monkeypatch):
        from fastapi.testclient import TestClient

        from qincompat.service.app import app

        client = TestClient(app, raise_server_exceptions=False)

        def fake_post(url, json=None, timeout=None):
            return client.post("/fixtures", json={"kind": "bogus"})

        import httpx

        monkeypatch.setattr(httpx, "post", fake_post)
        e, f = mub_files
        assert run_cli(["--server", "http://unit.test", "upsilon", "--p", "1", e, f]) == 1
