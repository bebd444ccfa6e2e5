import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from catalog import (
    boolean_sts,
    builtin_entries,
    entries_for_rank,
    is_steiner,
    match_catalog,
    product_entries,
    sts_generates_ring,
)
from config import Config
from constants import ExitCode, OutputFormat
from enumerator import SearchFilter, search
from graph_model import NotTriangleFree, NotUndirected, classify_triangle_free, decode, encode
from ring_core import OrderTooLarge, canonical_form, fusion_rules, product, verify
from ring_io import (
    RecordFormatError,
    RingRecord,
    emit_triple_system,
    format_records,
    parse_records,
    read_text,
    read_triple_system,
    result_records,
    write_rank_file,
)

def _emit(text: str, out: Optional[str]):
    if out:
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        logging.info(f"Wrote {path}")
    else:
        sys.stdout.write(text)

def _read_single(path: str) -> RingRecord:
    records = parse_records(read_text(path))
    if len(records) != 1:
        raise RecordFormatError(f"{path} holds {len(records)} records, expected one")
    return records[0]

def cmd_enumerate(args) -> ExitCode:
    if args.rank < 2:
        logging.error(f"Rank must be at least 2, got {args.rank}")
        return ExitCode.USAGE
    search_filter = SearchFilter(
        undirected_only=args.undirected,
        triangle_free_only=args.triangle_free,
        empty_graph_only=args.empty_graph,
    )
    try:
        result = search(args.rank, search_filter, jobs=args.jobs, extended=args.extended)
    except OrderTooLarge as e:
        logging.error(str(e))
        return ExitCode.RESOURCE_BOUND
    records = result_records(result)
    if args.out:
        write_rank_file(args.out, args.rank, records, args.format)
    else:
        sys.stdout.write(format_records(records, args.format))
    return ExitCode.OK

def cmd_verify(args) -> ExitCode:
    records = parse_records(read_text(args.path))
    lines = []
    code = ExitCode.OK
    for record in records:
        f = decode(record.to_pair())
        verdict = verify(f)
        if verdict.is_valid:
            lines.append("VALID")
            if args.rules:
                lines.extend(fusion_rules(f))
        else:
            lines.append("COMMUTATOR " + " ".join(str(v) for v in verdict.witness))
            code = ExitCode.SEMANTIC_FAILURE
    _emit("".join(line + "\n" for line in lines), args.out)
    return code

def cmd_canon(args) -> ExitCode:
    records = []
    for record in parse_records(read_text(args.path)):
        key = canonical_form(record.to_pair())
        pair = record.to_pair().relabel(key.witness)
        records.append(RingRecord.from_pair(pair, name=record.name or match_catalog(pair), key=key.hex()))
    _emit(format_records(records, args.format, single=len(records) == 1), args.out)
    return ExitCode.OK

def cmd_product(args) -> ExitCode:
    left, right = _read_single(args.first), _read_single(args.second)
    factors = []
    for path, record in ((args.first, left), (args.second, right)):
        f = decode(record.to_pair())
        verdict = verify(f)
        if not verdict.is_valid:
            logging.error(f"{path} is not a fusion ring, commutator witness {verdict.witness}")
            return ExitCode.SEMANTIC_FAILURE
        factors.append(f)
    pair = encode(product(*factors))
    name = f"{left.name}⊠{right.name}" if left.name and right.name else match_catalog(pair)
    _emit(format_records([RingRecord.from_pair(pair, name=name)], args.format, single=True), args.out)
    return ExitCode.OK

def cmd_classify(args) -> ExitCode:
    pair = _read_single(args.path).to_pair()
    try:
        result = classify_triangle_free(pair)
    except (NotUndirected, NotTriangleFree) as e:
        logging.error(f"Cannot classify: {e}")
        return ExitCode.SEMANTIC_FAILURE
    if not result.generates:
        _emit("not generating\n", args.out)
        return ExitCode.SEMANTIC_FAILURE
    line = f"triangle-free family {result.family.value}"
    if result.k is not None:
        line += f" (k={result.k})"
    _emit(line + "\n", args.out)
    return ExitCode.OK

def cmd_catalog(args) -> ExitCode:
    entries = entries_for_rank(args.rank) if args.rank else list(builtin_entries())
    if args.products:
        limit = args.rank or Config.MAX_RANK
        entries += [e for e in product_entries(limit) if not args.rank or e.rank == args.rank]
    records = [RingRecord.from_catalog(entry) for entry in entries]
    _emit(format_records(records, args.format), args.out)
    return ExitCode.OK

def cmd_sts(args) -> ExitCode:
    if args.k is None and args.check is None:
        logging.error("sts needs --k K or --check PATH")
        return ExitCode.USAGE
    # --k supplies the system; --check alone reads it from PATH
    ts = boolean_sts(args.k) if args.k is not None else read_triple_system(args.check or "-")
    if args.check is None:
        _emit(emit_triple_system(ts), args.out)
        return ExitCode.OK
    steiner = is_steiner(ts)
    generates = steiner and sts_generates_ring(ts)
    _emit(f"STS: {'yes' if steiner else 'no'}; generates ring: {'yes' if generates else 'no'}\n", args.out)
    return ExitCode.OK if generates else ExitCode.SEMANTIC_FAILURE

def _add_output_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--format", choices=OutputFormat.choices(), default=OutputFormat.JSON.value,
                        help="Output format (default: json)")
    parser.add_argument("--out", help="Write to this path instead of stdout")

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fusion-forge",
                                     description="Enumerate and check self-dual, multiplicity-free fusion rings")
    commands = parser.add_subparsers(dest="command", required=True)

    enumerate_parser = commands.add_parser("enumerate", help="All rings of one rank up to isomorphism")
    enumerate_parser.add_argument("--rank", type=int, required=True)
    enumerate_parser.add_argument("--undirected", action="store_true", help="Only symmetric arc sets")
    enumerate_parser.add_argument("--triangle-free", action="store_true", help="Only triangle-free underlying graphs")
    enumerate_parser.add_argument("--empty-graph", action="store_true", help="Only pairs without loops or arcs")
    enumerate_parser.add_argument("--extended", action="store_true",
                                  help=f"Allow ranks up to FUSION_FORGE_EXTENDED_RANK ({Config.EXTENDED_RANK})")
    enumerate_parser.add_argument("--jobs", type=int, default=None, help="Worker processes (default: FUSION_FORGE_JOBS)")
    _add_output_flags(enumerate_parser)
    enumerate_parser.set_defaults(handler=cmd_enumerate)

    verify_parser = commands.add_parser("verify", help="Check that the fusion matrices commute")
    verify_parser.add_argument("path", help="Ring record file, '-' for stdin")
    verify_parser.add_argument("--rules", action="store_true", help="Print the fusion rules of valid rings")
    _add_output_flags(verify_parser)
    verify_parser.set_defaults(handler=cmd_verify)

    canon_parser = commands.add_parser("canon", help="Canonical representative and key")
    canon_parser.add_argument("path")
    _add_output_flags(canon_parser)
    canon_parser.set_defaults(handler=cmd_canon)

    product_parser = commands.add_parser("product", help="Deligne product of two rings")
    product_parser.add_argument("first")
    product_parser.add_argument("second")
    _add_output_flags(product_parser)
    product_parser.set_defaults(handler=cmd_product)

    classify_parser = commands.add_parser("classify", help="Triangle-free family of an undirected pair")
    classify_parser.add_argument("path")
    _add_output_flags(classify_parser)
    classify_parser.set_defaults(handler=cmd_classify)

    catalog_parser = commands.add_parser("catalog", help="Builtin named rings")
    catalog_parser.add_argument("--rank", type=int)
    catalog_parser.add_argument("--products", action="store_true", help="Include products of named rings")
    _add_output_flags(catalog_parser)
    catalog_parser.set_defaults(handler=cmd_catalog)

    sts_parser = commands.add_parser("sts", help="Boolean Steiner triple systems and STS checks")
    sts_parser.add_argument("--k", type=int, help="Emit the boolean STS on 2^k - 1 points")
    sts_parser.add_argument("--check", nargs="?", const="", default=None, metavar="PATH",
                            help="Check the system is an STS that generates a ring")
    _add_output_flags(sts_parser)
    sts_parser.set_defaults(handler=cmd_sts)
    return parser

def main(argv: Optional[List[str]] = None) -> int:
    logging.basicConfig(
        level=Config.LOG_LEVEL,
        format='%(asctime)s [%(levelname)s] %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S',
        stream=sys.stderr,
    )
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    Config.validate_config()
    try:
        return int(args.handler(args))
    except (RecordFormatError, ValueError) as e:
        logging.error(f"{args.command}: {e}")
        return int(ExitCode.USAGE)
    except OrderTooLarge as e:
        logging.error(f"{args.command}: {e}")
        return int(ExitCode.RESOURCE_BOUND)

if __name__ == "__main__":
    sys.exit(main())
