"""Command line interface: ingest, query, cpv, serve, schema."""

from __future__ import annotations

import argparse
import json
import sys

from .cpv import CpvError, bundled_sample_path, load_cpv
from .filters import (
    FilterParseError,
    SortSpec,
    evaluate,
    export_csv,
    parse_filter,
    select_page,
    sort_row_ids,
    validate,
)
from .ingest import IngestError, ingest_csv
from .schema import SchemaError, builtin_schema
from .service import DEFAULT_LINK_TEMPLATE, AppConfig, create_app
from .store import StoreFormatError, read_store, write_store


def _cmd_ingest(args) -> int:
    store, report = ingest_csv(args.input, builtin_schema())
    write_store(store, args.output)
    text = report.render()
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    print(f"wrote {store.row_count} rows to {args.output}")
    print(text)
    return 0


def _parse_sort(text: str) -> SortSpec:
    field, sep, direction = text.partition(":")
    if sep and direction not in ("asc", "desc"):
        raise SchemaError(f"sort direction must be asc or desc, got {direction!r}")
    return SortSpec(field=field, descending=direction == "desc")


def _cmd_query(args) -> int:
    store = read_store(args.store)
    with open(args.filter, "r", encoding="utf-8") as fh:
        expr = parse_filter(fh.read())
    issues = validate(expr, store.schema)
    if issues:
        for issue in issues:
            print(f"invalid filter: {issue.message}", file=sys.stderr)
        return 2
    row_ids = evaluate(expr, store)
    print(f"{len(row_ids)} matching rows")
    sort = _parse_sort(args.sort) if args.sort else None
    if args.csv:
        ordered = sort_row_ids(store, row_ids, sort) if sort else row_ids
        with open(args.csv, "wb") as fh:
            fh.write(export_csv(store, ordered))
        print(f"selection written to {args.csv}")
    if args.limit:
        page = select_page(store, row_ids, sort, args.offset, args.limit, args.link_template)
        for row in page.rows:
            cells = {k: v for k, v in row.items() if v is not None}
            print(json.dumps(cells, ensure_ascii=False))
    return 0


def _cmd_cpv(args) -> int:
    table = load_cpv(args.file if args.file else bundled_sample_path())
    if args.search is None and args.digits is None:
        print(f"{len(table)} entries")
        return 0
    hits = table.search(args.search or "", digit_limit=args.digits)
    for entry in hits:
        print(f"{entry.code}\t{entry.description}")
    print(f"{len(hits)} entries")
    return 0


def _cmd_schema(args) -> int:
    description = builtin_schema().describe()
    text = json.dumps(description, indent=2)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


def _cmd_serve(args) -> int:
    if not 1 <= args.port <= 65535:
        print(f"port must be in 1..65535, got {args.port}", file=sys.stderr)
        return 2
    store = read_store(args.store)
    table = load_cpv(args.cpv if args.cpv else bundled_sample_path())
    config = AppConfig(link_template=args.link_template, static_dir=args.static)
    app = create_app(store, table, config)

    import uvicorn

    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tedcan",
        description="Explore European contract award notices from the command line.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse CSV exports into a columnar store")
    p.add_argument("--input", nargs="+", required=True, help="CSV files, in order")
    p.add_argument("--output", required=True, help="store file to write")
    p.add_argument("--report", help="also write the ingest report here")
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("query", help="run a filter expression against a store")
    p.add_argument("--store", required=True)
    p.add_argument("--filter", required=True, help="file holding the JSON expression")
    p.add_argument("--sort", help="FIELD:asc or FIELD:desc")
    p.add_argument("--offset", type=int, default=0)
    p.add_argument("--limit", type=int, help="also print the first N rows")
    p.add_argument("--csv", help="write the full selection as CSV")
    p.add_argument("--link-template", default=DEFAULT_LINK_TEMPLATE)
    p.set_defaults(func=_cmd_query)

    p = sub.add_parser("cpv", help="search the procurement vocabulary")
    p.add_argument("--file", help="nomenclature CSV (default: bundled sample)")
    p.add_argument("--search", help="text or code-prefix query")
    p.add_argument("--digits", type=int, help="restrict results to coarser codes (2-8)")
    p.set_defaults(func=_cmd_cpv)

    p = sub.add_parser("schema", help="print the field registry as JSON")
    p.add_argument("--output", help="write to a file instead of stdout")
    p.set_defaults(func=_cmd_schema)

    p = sub.add_parser("serve", help="serve the HTTP API and web client")
    p.add_argument("--store", required=True)
    p.add_argument("--cpv", help="nomenclature CSV (default: bundled sample)")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, required=True)
    p.add_argument("--link-template", default=DEFAULT_LINK_TEMPLATE)
    p.add_argument("--static", help="directory of built web client assets")
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (IngestError, StoreFormatError, CpvError, FilterParseError, SchemaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
