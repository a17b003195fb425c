"""HTTP application binding the engine together over one store snapshot.

All endpoints are pure functions of (request, snapshot); the snapshot is
immutable, so requests may be served concurrently without locking, and a
re-ingested store can replace the old one by atomic attribute swap.

Errors are always structured: {"errors": [{"code", "message", "field"?}]}.
"""

from __future__ import annotations

import io
import csv
import os
from dataclasses import dataclass

from fastapi import FastAPI, Request
from fastapi.responses import HTMLResponse, JSONResponse, StreamingResponse
from fastapi.staticfiles import StaticFiles

from . import analytics, filters, quest as quest_mod
from .cpv import CpvError, CpvTable
from .schema import DataType, SchemaError
from .store import ColumnStore, column_distinct_values

DEFAULT_LINK_TEMPLATE = "https://ted.europa.eu/udl?uri=TED:NOTICE:{id}:TEXT:EN:HTML"


@dataclass
class AppConfig:
    link_template: str = DEFAULT_LINK_TEMPLATE
    page_size: int = 50
    max_page_size: int = 1000
    max_links: int = analytics.DEFAULT_MAX_LINKS
    max_depth: int = 10
    max_conditions: int = 200
    static_dir: str | None = None


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, field: str | None = None):
        super().__init__(message)
        self.status = status
        self.errors = [{"code": code, "message": message, "field": field}]

    @classmethod
    def from_issues(cls, issues: list[filters.ValidationIssue]) -> "ApiError":
        err = cls(400, issues[0].code, issues[0].message, issues[0].field)
        err.errors = [
            {"code": i.code, "message": i.message, "field": i.field} for i in issues
        ]
        return err


def create_app(
    store: ColumnStore, cpv_table: CpvTable, config: AppConfig | None = None
) -> FastAPI:
    config = config or AppConfig()
    app = FastAPI(title="tedcan", docs_url=None, redoc_url=None)
    app.state.store = store
    app.state.cpv = cpv_table
    app.state.config = config

    @app.exception_handler(ApiError)
    async def api_error_handler(_request: Request, exc: ApiError):
        return JSONResponse({"errors": exc.errors}, status_code=exc.status)

    async def json_body(request: Request) -> dict:
        try:
            body = await request.json()
        except Exception:
            raise ApiError(400, "bad_json", "request body is not valid JSON")
        if not isinstance(body, dict):
            raise ApiError(400, "bad_json", "request body must be a JSON object")
        return body

    def parse_body_filter(body: dict) -> filters.FilterExpr:
        if "filter" not in body:
            raise ApiError(400, "missing_filter", 'request needs a "filter"')
        raw = body["filter"]
        try:
            if isinstance(raw, str):
                expr = filters.parse_filter(raw)
            else:
                expr = filters.filter_from_obj(raw)
        except filters.FilterParseError as exc:
            raise ApiError(400, "parse", str(exc), "filter")
        depth, conditions = filters.expr_stats(expr)
        if depth > config.max_depth or conditions > config.max_conditions:
            raise ApiError(
                413,
                "expression_too_large",
                f"expression exceeds limits (depth {config.max_depth}, "
                f"{config.max_conditions} conditions)",
            )
        issues = filters.validate(expr, app.state.store.schema)
        if issues:
            raise ApiError.from_issues(issues)
        return expr

    def parse_sort(body: dict) -> filters.SortSpec | None:
        raw = body.get("sort")
        if raw is None:
            return None
        if not isinstance(raw, dict) or "field" not in raw:
            raise ApiError(400, "bad_sort", 'sort must be {"field", "direction"?}')
        direction = raw.get("direction", "asc")
        if direction not in ("asc", "desc"):
            raise ApiError(400, "bad_sort", 'sort direction must be "asc" or "desc"')
        field = raw["field"]
        if not isinstance(field, str) or field not in app.state.store.schema:
            raise ApiError(400, "bad_sort", f"unknown sort field {field!r}", "sort")
        return filters.SortSpec(field=field, descending=direction == "desc")

    def selection(body: dict) -> list[int]:
        expr = parse_body_filter(body)
        return filters.evaluate(expr, app.state.store)

    @app.get("/api/schema")
    async def get_schema():
        snapshot: ColumnStore = app.state.store
        fields = []
        for descriptor in snapshot.schema:
            entry = {
                "name": descriptor.source_name,
                "display_name": descriptor.display_name,
                "type": descriptor.data_type.value,
                "highlighted": descriptor.highlighted,
            }
            if descriptor.data_type is DataType.FACTOR:
                entry["values"] = column_distinct_values(snapshot, descriptor.source_name)
            fields.append(entry)
        return {"fields": fields}

    @app.post("/api/query")
    async def post_query(request: Request):
        body = await json_body(request)
        snapshot: ColumnStore = app.state.store
        row_ids = selection(body)
        sort = parse_sort(body)
        offset = body.get("offset", 0)
        limit = body.get("limit", config.page_size)
        if not isinstance(offset, int) or isinstance(offset, bool) or offset < 0:
            raise ApiError(400, "bad_offset", "offset must be >= 0")
        if not isinstance(limit, int) or isinstance(limit, bool) or limit < 1:
            raise ApiError(400, "bad_limit", "limit must be >= 1")
        if limit > config.max_page_size:
            raise ApiError(400, "bad_limit", f"limit must be <= {config.max_page_size}")
        page = filters.select_page(
            snapshot, row_ids, sort, offset, limit, config.link_template
        )
        return {
            "total_matches": page.total_matches,
            "offset": page.offset,
            "rows": page.rows,
        }

    @app.post("/api/export")
    async def post_export(request: Request):
        body = await json_body(request)
        snapshot: ColumnStore = app.state.store
        row_ids = selection(body)
        sort = parse_sort(body)
        if sort:
            row_ids = filters.sort_row_ids(snapshot, row_ids, sort)

        def chunks():
            out = io.StringIO()
            writer = csv.writer(out)
            writer.writerow([f.display_name for f in snapshot.schema])
            for n, row_id in enumerate(row_ids, start=1):
                writer.writerow(
                    [
                        ""
                        if (v := snapshot.columns[f.source_name].cell(row_id)) is None
                        else v
                        for f in snapshot.schema
                    ]
                )
                if n % 1000 == 0:
                    yield out.getvalue().encode("utf-8")
                    out.seek(0)
                    out.truncate()
            yield out.getvalue().encode("utf-8")

        return StreamingResponse(
            chunks(),
            media_type="text/csv; charset=utf-8",
            headers={"Content-Disposition": 'attachment; filename="selection.csv"'},
        )

    @app.post("/api/sankey")
    async def post_sankey(request: Request):
        body = await json_body(request)
        snapshot: ColumnStore = app.state.store
        row_ids = selection(body)
        max_links = body.get("max_links", config.max_links)
        if max_links is not None and (
            not isinstance(max_links, int) or isinstance(max_links, bool) or max_links < 1
        ):
            raise ApiError(400, "bad_max_links", "max_links must be >= 1 or null")
        graph = analytics.build_sankey(
            snapshot, row_ids, max_links=max_links, link_template=config.link_template
        )
        return {
            "authorities": [{"name": n, "total": t} for n, t in graph.authority_nodes],
            "contractors": [{"name": n, "total": t} for n, t in graph.contractor_nodes],
            "links": [
                {
                    "authority": link.authority,
                    "contractor": link.contractor,
                    "value": link.value,
                    "contract_count": link.contract_count,
                    "notice_links": link.notice_links,
                }
                for link in graph.links
            ],
            "stats": {
                "n_authorities": graph.stats.n_authorities,
                "n_contractors": graph.stats.n_contractors,
                "n_contracts": graph.stats.n_contracts,
                "total_value_euros": graph.stats.total_value_euros,
            },
            "rows_with_null_value": graph.rows_with_null_value,
            "truncated": graph.truncated,
        }

    @app.get("/api/cpv")
    async def get_cpv(query: str = "", digits: int | None = None,
                      offset: int = 0, limit: int = 100):
        table: CpvTable = app.state.cpv
        if offset < 0:
            raise ApiError(400, "bad_offset", "offset must be >= 0")
        if not 1 <= limit <= 1000:
            raise ApiError(400, "bad_limit", "limit must be between 1 and 1000")
        try:
            hits = table.search(query, digit_limit=digits)
        except CpvError as exc:
            raise ApiError(400, "bad_digits", str(exc), "digits")
        return {
            "total": len(hits),
            "offset": offset,
            "entries": [
                {"code": e.code, "description": e.description}
                for e in hits[offset : offset + limit]
            ],
        }

    @app.get("/api/quest")
    async def get_quest(seed: int = 0, min_support: int | None = None):
        # Clients that want a fresh quest pass a new seed; the endpoint
        # itself stays a pure function of the request.
        snapshot: ColumnStore = app.state.store
        support = min_support if min_support is not None else quest_mod.DEFAULT_MIN_SUPPORT
        if support < 1:
            raise ApiError(400, "bad_min_support", "min_support must be >= 1")
        try:
            q = quest_mod.generate_quest(snapshot, app.state.cpv, seed, support)
        except quest_mod.QuestError as exc:
            raise ApiError(404, "no_quest", str(exc))
        return {
            "seed": seed,
            "quest": {
                "cpv_division": q.cpv_division,
                "division_label": q.division_label,
                "country": q.country,
                "year": q.year,
                "title": q.title,
            },
            "filter": filters.filter_to_obj(quest_mod.solution_filter(q)),
        }

    @app.exception_handler(SchemaError)
    async def schema_error_handler(_request: Request, exc: SchemaError):
        return JSONResponse(
            {"errors": [{"code": "schema", "message": str(exc), "field": None}]},
            status_code=400,
        )

    if config.static_dir and os.path.isdir(config.static_dir):
        app.mount("/", StaticFiles(directory=config.static_dir, html=True), name="ui")
    else:

        @app.get("/", response_class=HTMLResponse)
        async def index():
            return (
                "<!doctype html><title>tedcan</title>"
                "<h1>tedcan API</h1>"
                "<p>No web client is installed. The API lives under <code>/api</code>: "
                "schema, query, export, sankey, cpv, quest.</p>"
            )

    return app
