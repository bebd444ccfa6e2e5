"""
Ring records and their on-disk formats: JSON, grep-friendly lines and a
plain-text table rendered with Jinja2.
"""
import json
import logging
import os
import re
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Tuple

from jinja2 import Environment, FileSystemLoader

from catalog import CatalogEntry, TripleSystem
from constants import OutputFormat
from enumerator import EnumerationResult, RingEntry
from graph_model import GraphPair

TEMPLATE_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "templates")
FLOAT_DIGITS = 9

jinja_env = Environment(loader=FileSystemLoader(TEMPLATE_DIR), trim_blocks=True, keep_trailing_newline=True)

class RecordFormatError(Exception):
    """Custom exception for malformed ring or triple-system input"""
    pass

@dataclass(frozen=True)
class RingRecord:
    rank: int
    loops: Tuple[int, ...]
    arcs: Tuple[Tuple[int, int], ...]
    hyperedges: Tuple[Tuple[int, int, int], ...]
    name: Optional[str] = None
    invariants: Optional[Dict[str, float]] = None
    fp_dims: Optional[Tuple[float, ...]] = None
    source: Optional[str] = None
    key: Optional[str] = None

    @classmethod
    def from_pair(cls, pair: GraphPair, **extra) -> "RingRecord":
        return cls(
            rank=pair.order + 1,
            loops=tuple(sorted(pair.loops)),
            arcs=tuple(sorted(pair.arcs)),
            hyperedges=tuple(sorted(pair.hyperedges)),
            **extra,
        )

    @classmethod
    def from_ring(cls, ring: RingEntry) -> "RingRecord":
        invariants = ring.invariants.as_dict()
        if "fp_total" in invariants:
            invariants["fp_total"] = round(invariants["fp_total"], FLOAT_DIGITS)
        fp_dims = None
        if ring.invariants.fp_dims is not None:
            fp_dims = tuple(round(d, FLOAT_DIGITS) for d in ring.invariants.fp_dims)
        return cls.from_pair(ring.pair, name=ring.catalog_name, invariants=invariants, fp_dims=fp_dims)

    @classmethod
    def from_catalog(cls, entry: CatalogEntry) -> "RingRecord":
        return cls.from_pair(entry.pair, name=entry.name, source=entry.source)

    def to_pair(self) -> GraphPair:
        try:
            return GraphPair(
                order=self.rank - 1,
                loops=frozenset(self.loops),
                arcs=frozenset(self.arcs),
                hyperedges=frozenset(self.hyperedges),
            )
        except ValueError as e:
            raise RecordFormatError(f"Record does not describe a graph pair: {e}") from e

def record_to_dict(record: RingRecord) -> Dict:
    data = {
        "rank": record.rank,
        "loops": list(record.loops),
        "arcs": [list(arc) for arc in record.arcs],
        "hyperedges": [list(edge) for edge in record.hyperedges],
    }
    for field_name in ("name", "source", "key", "invariants"):
        value = getattr(record, field_name)
        if value is not None:
            data[field_name] = value
    if record.fp_dims is not None:
        data["fp_dims"] = list(record.fp_dims)
    return data

def emit_record(record: RingRecord) -> str:
    return json.dumps(record_to_dict(record), indent=2, ensure_ascii=False) + "\n"

def _int_tuples(value, width: int, field_name: str) -> Tuple:
    if not isinstance(value, list):
        raise RecordFormatError(f"Field '{field_name}' must be a list")
    items = []
    for item in value:
        if width == 1:
            if not isinstance(item, int) or isinstance(item, bool):
                raise RecordFormatError(f"Field '{field_name}' holds non-integer {item!r}")
            items.append(item)
        else:
            if not isinstance(item, list) or len(item) != width or not all(
                isinstance(v, int) and not isinstance(v, bool) for v in item
            ):
                raise RecordFormatError(f"Field '{field_name}' entry {item!r} is not a list of {width} integers")
            items.append(tuple(sorted(item)) if width == 3 else tuple(item))
    return tuple(sorted(items))

def parse_record(data) -> RingRecord:
    if not isinstance(data, dict):
        raise RecordFormatError(f"Ring record must be a JSON object, got {type(data).__name__}")
    missing = [k for k in ("rank", "loops", "arcs", "hyperedges") if k not in data]
    if missing:
        raise RecordFormatError(f"Ring record is missing {', '.join(missing)}")
    rank = data["rank"]
    if not isinstance(rank, int) or isinstance(rank, bool) or rank < 1:
        raise RecordFormatError(f"Invalid rank {rank!r}")
    fp_dims = data.get("fp_dims")
    record = RingRecord(
        rank=rank,
        loops=_int_tuples(data["loops"], 1, "loops"),
        arcs=_int_tuples(data["arcs"], 2, "arcs"),
        hyperedges=_int_tuples(data["hyperedges"], 3, "hyperedges"),
        name=data.get("name"),
        invariants=data.get("invariants"),
        fp_dims=tuple(fp_dims) if fp_dims is not None else None,
        source=data.get("source"),
        key=data.get("key"),
    )
    record.to_pair()
    return record

def _group(items: Iterable[Tuple[int, ...]], separator: str) -> str:
    return separator.join("(" + ",".join(str(v) for v in item) + ")" for item in items)

def emit_line(record: RingRecord) -> str:
    line = (
        f"R:{record.rank}|L:{{{';'.join(str(v) for v in record.loops)}}}"
        f"|A:{{{_group(record.arcs, ';')}}}|H:{{{_group(record.hyperedges, ';')}}}"
    )
    if record.name:
        line += f"|N:{record.name}"
    return line

_LINE_PATTERN = re.compile(r"^R:(\d+)\|L:\{([^}]*)\}\|A:\{([^}]*)\}\|H:\{([^}]*)\}(?:\|N:(.+))?$")

def parse_line(line: str) -> RingRecord:
    match = _LINE_PATTERN.match(line.strip())
    if not match:
        raise RecordFormatError(f"Not a ring line: {line.strip()!r}")
    rank, loops, arcs, hyperedges, name = match.groups()

    def tuples(text: str, width: int) -> List[List[int]]:
        items = []
        for token in filter(None, text.split(";")):
            values = token.strip().strip("()").split(",")
            if len(values) != width:
                raise RecordFormatError(f"Expected {width} vertices in {token!r}")
            items.append([int(v) for v in values])
        return items

    try:
        data = {
            "rank": int(rank),
            "loops": [int(v) for v in filter(None, loops.split(";"))],
            "arcs": tuples(arcs, 2),
            "hyperedges": tuples(hyperedges, 3),
        }
    except ValueError as e:
        raise RecordFormatError(f"Bad vertex in {line.strip()!r}: {e}") from e
    if name:
        data["name"] = name
    return parse_record(data)

def emit_lines(records: Iterable[RingRecord]) -> str:
    return "".join(emit_line(record) + "\n" for record in records)

def parse_lines(text: str) -> List[RingRecord]:
    return [parse_line(line) for line in text.splitlines() if line.strip()]

def parse_records(text: str) -> List[RingRecord]:
    """JSON object, JSON array or one ring line per row"""
    stripped = text.strip()
    if not stripped:
        raise RecordFormatError("Empty input")
    if stripped[0] in "[{":
        try:
            data = json.loads(stripped)
        except json.JSONDecodeError as e:
            raise RecordFormatError(f"Invalid JSON: {e}") from e
        items = data if isinstance(data, list) else [data]
        return [parse_record(item) for item in items]
    return parse_lines(stripped)

def _cell(items: Iterable[Tuple[int, ...]]) -> str:
    return ", ".join("(" + ", ".join(str(v) for v in item) + ")" for item in items)

def render_table(records: List[RingRecord]) -> str:
    """One section per rank, columns Loops | Arcs | Hyperedges | Name"""
    sections = []
    for rank in sorted({r.rank for r in records}):
        rows = [
            {
                "loops": ", ".join(str(v) for v in record.loops),
                "arcs": _cell(record.arcs),
                "hyperedges": _cell(record.hyperedges),
                "name": record.name or "",
            }
            for record in records if record.rank == rank
        ]
        widths = {
            column: max([len(title)] + [len(row[column]) for row in rows])
            for column, title in (("loops", "Loops"), ("arcs", "Arcs"), ("hyperedges", "Hyperedges"))
        }
        sections.append({"rank": rank, "rows": rows, "widths": widths})
    template = jinja_env.get_template("ring_table.txt")
    return template.render(sections=sections)

def format_records(records: List[RingRecord], fmt: OutputFormat, single: bool = False) -> str:
    fmt = OutputFormat(fmt)
    if fmt == OutputFormat.TABLE:
        return render_table(records)
    if fmt == OutputFormat.LINES:
        return emit_lines(records)
    if single:
        return emit_record(records[0])
    return json.dumps([record_to_dict(r) for r in records], indent=2, ensure_ascii=False) + "\n"

def result_records(result: EnumerationResult) -> List[RingRecord]:
    return [RingRecord.from_ring(ring) for ring in result.rings]

def write_rank_file(out_dir: str, rank: int, records: List[RingRecord], fmt: OutputFormat) -> Path:
    """Persist one rank's rings as rank<r>.json (.txt for tables, .lines for lines)"""
    fmt = OutputFormat(fmt)
    directory = Path(out_dir)
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / f"rank{rank}{fmt.extension}"
    path.write_text(format_records(records, fmt), encoding="utf-8")
    logging.info(f"Wrote {len(records)} rings to {path}")
    return path

def read_text(path: str) -> str:
    """File contents, or stdin when path is '-'"""
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise RecordFormatError(f"Cannot read {path}: {e}") from e

def emit_triple_system(ts: TripleSystem) -> str:
    data = {"points": ts.points, "triples": [list(t) for t in sorted(ts.triples)]}
    return json.dumps(data, ensure_ascii=False) + "\n"

def parse_triple_system(text: str) -> TripleSystem:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise RecordFormatError(f"Invalid JSON: {e}") from e
    if not isinstance(data, dict) or "points" not in data or "triples" not in data:
        raise RecordFormatError("Triple system needs 'points' and 'triples'")
    points = data["points"]
    if not isinstance(points, int) or isinstance(points, bool) or points < 0:
        raise RecordFormatError(f"Invalid point count {points!r}")
    triples = _int_tuples(data["triples"], 3, "triples")
    for triple in triples:
        if len(set(triple)) != 3 or not all(1 <= v <= points for v in triple):
            raise RecordFormatError(f"Triple {list(triple)} is not 3 distinct points in 1..{points}")
    return TripleSystem(points=points, triples=frozenset(triples))

def read_triple_system(path: str) -> TripleSystem:
    return parse_triple_system(read_text(path))
