"""Tests for ring records, the line format, table rendering and triple-system files"""
import json

import pytest

from catalog import TripleSystem, boolean_sts, builtin_entries, entries_for_rank, table_pair
from constants import OutputFormat
from enumerator import search
from ring_io import (
    RecordFormatError,
    RingRecord,
    emit_line,
    emit_lines,
    emit_record,
    emit_triple_system,
    format_records,
    parse_line,
    parse_lines,
    parse_record,
    parse_records,
    parse_triple_system,
    read_text,
    render_table,
    result_records,
    write_rank_file,
)


def test_catalog_records_survive_json():
    for entry in builtin_entries():
        record = RingRecord.from_catalog(entry)
        assert parse_record(json.loads(emit_record(record))) == record
        assert record.to_pair() == entry.pair


def test_result_records_survive_json():
    records = result_records(search(4))
    assert len(records) == 6
    parsed = parse_records(format_records(records, OutputFormat.JSON))
    assert parsed == records
    assert all(record.fp_dims[0] == pytest.approx(1.0) for record in records)
    assert all("trace_sum" in record.invariants for record in records)


def test_parse_record_sorts():
    record = parse_record({"rank": 4, "loops": [2, 1], "arcs": [[2, 1], [1, 2]], "hyperedges": [[3, 2, 1]]})
    assert record.loops == (1, 2)
    assert record.arcs == ((1, 2), (2, 1))
    assert record.hyperedges == ((1, 2, 3),)
    assert record.to_pair() == table_pair(4, "1 2", "12 21", "123")


@pytest.mark.parametrize("data", [
    [],
    {"rank": 2, "loops": []},
    {"rank": 0, "loops": [], "arcs": [], "hyperedges": []},
    {"rank": 3, "loops": [], "arcs": [[1, 2, 3]], "hyperedges": []},
    {"rank": 3, "loops": [], "arcs": [[1, 1]], "hyperedges": []},
    {"rank": 2, "loops": [2], "arcs": [], "hyperedges": []},
    {"rank": 2, "loops": ["1"], "arcs": [], "hyperedges": []},
    {"rank": 4, "loops": [], "arcs": [], "hyperedges": [[1, 1, 2]]},
])
def test_parse_record_rejects(data):
    with pytest.raises(RecordFormatError):
        parse_record(data)


def test_parse_records_rejects_bad_text():
    with pytest.raises(RecordFormatError):
        parse_records('{"rank": 2, "loops": [1')
    with pytest.raises(RecordFormatError):
        parse_records("")
    with pytest.raises(RecordFormatError):
        parse_records("rank two, one loop")


def test_line_format(psu2_6):
    record = RingRecord.from_pair(psu2_6, name="PSU(2)_6")
    line = emit_line(record)
    assert line == "R:4|L:{1;2}|A:{(1,2);(2,1)}|H:{(1,2,3)}|N:PSU(2)_6"
    assert parse_line(line) == record
    assert emit_line(RingRecord.from_pair(table_pair(2, "", "", ""))) == "R:2|L:{}|A:{}|H:{}"


def test_lines_survive():
    records = [RingRecord.from_pair(entry.pair, name=entry.name) for entry in entries_for_rank(5)]
    text = emit_lines(records)
    assert len(text.splitlines()) == 10
    assert parse_lines(text) == records
    assert parse_records(text) == records


def test_render_table():
    records = [RingRecord.from_catalog(entry) for entry in entries_for_rank(2)]
    lines = render_table(records).splitlines()
    assert lines[0] == "Rank 2: 2 rings"
    assert lines[1] == "Loops | Arcs | Hyperedges | Name"
    assert lines[2] == "-" * 32
    assert lines[3].endswith("| Sem")
    assert lines[4] == "1     |      |            | Fib"
    assert len(lines) == 5


def test_render_table_sections():
    records = [RingRecord.from_catalog(entry) for entry in entries_for_rank(2) + entries_for_rank(3)]
    text = render_table(records)
    assert text == render_table(records)
    sections = text.split("\n\n")
    assert len(sections) == 2
    assert sections[1].startswith("Rank 3: 3 rings")
    assert "(1, 2), (2, 1)" in sections[1]


def test_write_rank_file(tmp_path):
    records = [RingRecord.from_catalog(entry) for entry in entries_for_rank(3)]
    path = write_rank_file(str(tmp_path / "out"), 3, records, OutputFormat.LINES)
    assert path.name == "rank3.lines"
    assert parse_records(path.read_text(encoding="utf-8")) == [
        RingRecord.from_pair(r.to_pair(), name=r.name) for r in records
    ]
    path = write_rank_file(str(tmp_path / "out"), 3, records, "json")
    assert path.name == "rank3.json"
    assert len(json.loads(path.read_text(encoding="utf-8"))) == 3


def test_triple_system_files(affine_plane):
    for ts in (boolean_sts(3), affine_plane, TripleSystem(points=2)):
        assert parse_triple_system(emit_triple_system(ts)) == ts
    assert json.loads(emit_triple_system(boolean_sts(2))) == {"points": 3, "triples": [[1, 2, 3]]}
    with pytest.raises(RecordFormatError):
        parse_triple_system('{"points": 3, "triples": [[1, 2, 4]]}')
    with pytest.raises(RecordFormatError):
        parse_triple_system('{"points": 3}')


def test_read_text_missing(tmp_path):
    with pytest.raises(RecordFormatError):
        read_text(str(tmp_path / "missing.json"))
