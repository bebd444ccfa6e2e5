"""Tests for the command surface: outputs and exit codes"""
import io
import json

import pytest

from catalog import boolean_sts, table_pair
from cli import main
from constants import ExitCode
from ring_core import canonical_form
from ring_io import RingRecord, emit_record, emit_triple_system


def write_record(path, pair, name=None):
    path.write_text(emit_record(RingRecord.from_pair(pair, name=name)), encoding="utf-8")
    return str(path)


@pytest.fixture
def fib_file(tmp_path, fib):
    return write_record(tmp_path / "fib.json", fib, "Fib")


@pytest.fixture
def sem_file(tmp_path, sem):
    return write_record(tmp_path / "sem.json", sem, "Sem")


def test_enumerate_json(capsys):
    assert main(["enumerate", "--rank", "2"]) == ExitCode.OK
    data = json.loads(capsys.readouterr().out)
    assert len(data) == 2
    assert {record["name"] for record in data} == {"Sem", "Fib"}


def test_enumerate_table(capsys):
    assert main(["enumerate", "--rank", "4", "--format", "table"]) == ExitCode.OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "Rank 4: 6 rings"
    assert len(lines) == 3 + 6


def test_enumerate_rank_guards(capsys):
    assert main(["enumerate", "--rank", "9"]) == ExitCode.RESOURCE_BOUND
    assert main(["enumerate", "--rank", "8"]) == ExitCode.RESOURCE_BOUND
    assert main(["enumerate", "--rank", "1"]) == ExitCode.USAGE
    assert main(["enumerate"]) == ExitCode.USAGE
    assert main(["enumerate", "--rank", "2", "--format", "xml"]) == ExitCode.USAGE
    assert capsys.readouterr().out == ""


def test_enumerate_out_directory(tmp_path):
    out = tmp_path / "results"
    assert main(["enumerate", "--rank", "3", "--format", "lines", "--out", str(out)]) == ExitCode.OK
    lines = (out / "rank3.lines").read_text(encoding="utf-8").splitlines()
    assert len(lines) == 3
    assert all(line.startswith("R:3|") for line in lines)


def test_enumerate_filters(capsys):
    assert main(["enumerate", "--rank", "4", "--empty-graph", "--format", "lines"]) == ExitCode.OK
    assert capsys.readouterr().out == "R:4|L:{}|A:{}|H:{(1,2,3)}|N:Sem^2\n"


@pytest.mark.parametrize("jobs", ["2", "8"])
def test_enumerate_is_deterministic(jobs, capsys):
    main(["enumerate", "--rank", "5", "--jobs", "1"])
    single = capsys.readouterr().out
    main(["enumerate", "--rank", "5", "--jobs", jobs])
    assert capsys.readouterr().out == single


def test_verify_valid(fib_file, capsys):
    assert main(["verify", fib_file]) == ExitCode.OK
    assert capsys.readouterr().out == "VALID\n"
    assert main(["verify", "--rules", fib_file]) == ExitCode.OK
    assert capsys.readouterr().out == "VALID\nX1 ⊗ X1 = 𝟙 + X1\n"


def test_verify_commutator(tmp_path, figure_pair, capsys):
    broken = figure_pair.with_hyperedges(figure_pair.hyperedges - {(2, 3, 4)})
    path = write_record(tmp_path / "broken.json", broken)
    assert main(["verify", path]) == ExitCode.SEMANTIC_FAILURE
    words = capsys.readouterr().out.split()
    assert words[0] == "COMMUTATOR"
    assert len(words) == 5
    assert int(words[1]) < int(words[2])


def test_verify_malformed(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"rank": 2, "loops": [1', encoding="utf-8")
    assert main(["verify", str(path)]) == ExitCode.USAGE
    assert main(["verify", str(tmp_path / "missing.json")]) == ExitCode.USAGE


def test_verify_stdin(monkeypatch, capsys, fib):
    monkeypatch.setattr("sys.stdin", io.StringIO(emit_record(RingRecord.from_pair(fib))))
    assert main(["verify", "-"]) == ExitCode.OK
    assert capsys.readouterr().out == "VALID\n"


def test_product_then_canon(tmp_path, sem_file, fib_file, capsys, monkeypatch):
    assert main(["product", sem_file, fib_file]) == ExitCode.OK
    product_json = capsys.readouterr().out
    assert json.loads(product_json)["name"] == "Sem⊠Fib"
    monkeypatch.setattr("sys.stdin", io.StringIO(product_json))
    assert main(["canon", "-"]) == ExitCode.OK
    canon = json.loads(capsys.readouterr().out)
    assert canon["key"] == canonical_form(table_pair(4, "2", "12", "123")).hex()
    assert canon["rank"] == 4


def test_product_rejects_invalid_factor(tmp_path, fib_file):
    broken = write_record(tmp_path / "broken.json", table_pair(4, "", "12", ""))
    assert main(["product", fib_file, broken]) == ExitCode.SEMANTIC_FAILURE


def test_classify(tmp_path, fib_file, sem_file, ising, capsys):
    assert main(["classify", fib_file]) == ExitCode.OK
    assert capsys.readouterr().out == "triangle-free family 1\n"
    assert main(["classify", sem_file]) == ExitCode.OK
    assert capsys.readouterr().out == "triangle-free family 4 (k=1)\n"
    directed = write_record(tmp_path / "ising.json", ising)
    assert main(["classify", directed]) == ExitCode.SEMANTIC_FAILURE
    path = write_record(tmp_path / "empty5.json", table_pair(6, "", "", ""))
    assert main(["classify", path]) == ExitCode.SEMANTIC_FAILURE
    assert capsys.readouterr().out == "not generating\n"


def test_catalog(capsys):
    assert main(["catalog", "--rank", "4"]) == ExitCode.OK
    data = json.loads(capsys.readouterr().out)
    assert len(data) == 6
    assert all(record["source"] == "rank-4 table" for record in data)
    assert main(["catalog", "--rank", "4", "--products"]) == ExitCode.OK
    data = json.loads(capsys.readouterr().out)
    assert "Fib⊠Fib" in {record.get("name") for record in data}


def test_sts(tmp_path, affine_plane, capsys):
    assert main(["sts", "--k", "3"]) == ExitCode.OK
    assert json.loads(capsys.readouterr().out)["points"] == 7
    assert main(["sts", "--k", "3", "--check"]) == ExitCode.OK
    assert capsys.readouterr().out == "STS: yes; generates ring: yes\n"
    path = tmp_path / "ag23.json"
    path.write_text(emit_triple_system(affine_plane), encoding="utf-8")
    assert main(["sts", "--check", str(path)]) == ExitCode.SEMANTIC_FAILURE
    assert capsys.readouterr().out == "STS: yes; generates ring: no\n"
    assert main(["sts"]) == ExitCode.USAGE


def test_sts_check_stdin(monkeypatch, capsys):
    monkeypatch.setattr("sys.stdin", io.StringIO(emit_triple_system(boolean_sts(2))))
    assert main(["sts", "--check", "-"]) == ExitCode.OK
    assert capsys.readouterr().out == "STS: yes; generates ring: yes\n"


def test_output_file(tmp_path, fib_file):
    out = tmp_path / "verdict.txt"
    assert main(["verify", fib_file, "--out", str(out)]) == ExitCode.OK
    assert out.read_text(encoding="utf-8") == "VALID\n"
