"""HTTP service exposing queries, recommendations, statistics, and schema.

Endpoints (JSON in/out, UTF-8):
  POST /api/query                        {"text": "..."} -> query response
  GET  /api/players/<steamid>/recommendations?exclude_owned&genre=<g>&n=<k>
  GET  /api/stats/attainment?groupby=genre&bins=50
  GET  /api/schema

A query response is {"columns": [...], "rows": [[...]], "elapsed_ms": x,
"total_rows": n} where total_rows counts result rows before LIMIT. Query
text errors return 400 with {"line", "column", "message"}. The server
loads one dataset at startup and answers 503 until it is ready; the graph
is frozen afterwards, so request handling is safely concurrent.
"""
from __future__ import annotations

import json
import re
import threading
import time
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, urlparse

from . import presets
from .attainment import RATING_ATTR, annotate_graph
from .dataset import load_dataset
from .evalstats import genre_histograms, rating_histogram
from .graph import EDGE_ENDPOINTS, EdgeKind, PropertyGraph, VertexKind
from .querylang import QuerySyntaxError, QueryValidationError, parse, validate
from .queryexec import run_query


@dataclass
class AppConfig:
    data_dir: str
    host: str = "127.0.0.1"
    port: int = 8080
    default_limit: int = 5
    seed: int = 0
    cors_origin: str = "*"

    def __post_init__(self) -> None:
        if not 1 <= self.port <= 65535 and self.port != 0:
            raise ValueError(f"port {self.port} out of range")


def prepare_graph(data_dir):
    """Load a dataset, ensure ratings are present, and freeze the graph.

    Ownership records that already carry attainment ratings are trusted;
    otherwise ratings are recomputed from the achievement matrices.
    """
    graph, tables = load_dataset(data_dir)
    needs_rating = any(
        e.kind is EdgeKind.OWNS and RATING_ATTR not in e.attrs for e in graph.edges()
    )
    if needs_rating:
        annotate_graph(graph, tables)
    graph.freeze()
    return graph, tables


def format_cell(value) -> str:
    """Canonical text form of a result cell (shared by CLI and tests)."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".12g")
    if isinstance(value, tuple):
        return json.dumps(list(value))
    return str(value)


def execute_query_text(text: str, graph: PropertyGraph) -> dict:
    """Parse, validate, and run query text into a response dict."""
    started = time.perf_counter()
    typed = validate(parse(text))
    rows, total = run_query(typed, graph)
    columns = [f"{p.var}.{p.attr}" for p in typed.ast.select]
    has_avg = typed.ast.orderby is not None
    if has_avg:
        columns.append("avg")
    out_rows = []
    for row in rows:
        cells = [list(c) if isinstance(c, tuple) else c for c in row.cells]
        if has_avg:
            cells.append(row.sort_key)
        out_rows.append(cells)
    elapsed = (time.perf_counter() - started) * 1000.0
    return {
        "columns": columns,
        "rows": out_rows,
        "elapsed_ms": elapsed,
        "total_rows": total,
    }


class ServiceState:
    def __init__(self, config: AppConfig):
        self.config = config
        self.graph: PropertyGraph | None = None
        self.error: str | None = None

    def load(self) -> None:
        try:
            self.graph, _ = prepare_graph(self.config.data_dir)
        except Exception as exc:  # surfaced as 503 detail
            self.error = str(exc)


_RECO_PATH = re.compile(r"^/api/players/([^/]+)/recommendations$")


class _Handler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"
    state: ServiceState  # injected by make_server

    def log_message(self, fmt, *args):  # quiet by default
        pass

    def _send(self, status: int, payload) -> None:
        body = json.dumps(payload).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", self.state.config.cors_origin)
        self.end_headers()
        self.wfile.write(body)

    def _graph(self) -> PropertyGraph | None:
        graph = self.state.graph
        if graph is None:
            detail = self.state.error or "dataset is still loading"
            self._send(503, {"message": detail})
            return None
        return graph

    def do_OPTIONS(self):
        self.send_response(204)
        self.send_header("Access-Control-Allow-Origin", self.state.config.cors_origin)
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.send_header("Content-Length", "0")
        self.end_headers()

    def do_POST(self):
        url = urlparse(self.path)
        if url.path != "/api/query":
            self._send(404, {"message": f"no such endpoint {url.path}"})
            return
        graph = self._graph()
        if graph is None:
            return
        try:
            length = int(self.headers.get("Content-Length", "0"))
            payload = json.loads(self.rfile.read(length) or b"{}")
            text = payload["text"]
            if not isinstance(text, str):
                raise KeyError("text")
        except (ValueError, KeyError):
            self._send(400, {"line": 0, "column": 0, "message": "body must be {\"text\": str}"})
            return
        self._run_text(text, graph)

    def _run_text(self, text: str, graph: PropertyGraph) -> None:
        try:
            response = execute_query_text(text, graph)
        except QuerySyntaxError as exc:
            self._send(
                400, {"line": exc.line, "column": exc.column, "message": str(exc)}
            )
            return
        except QueryValidationError as exc:
            self._send(400, {"line": 0, "column": 0, "message": str(exc)})
            return
        self._send(200, response)

    def do_GET(self):
        url = urlparse(self.path)
        params = parse_qs(url.query)
        graph = self._graph()
        if graph is None:
            return

        match = _RECO_PATH.match(url.path)
        if match:
            steamid = match.group(1)
            if graph.player_by_steamid(steamid) is None:
                self._send(404, {"message": f"unknown player {steamid!r}"})
                return
            exclude = params.get("exclude_owned", ["0"])[0] not in ("0", "false", "")
            genre = params.get("genre", [None])[0]
            try:
                n = int(params.get("n", [self.state.config.default_limit])[0])
            except ValueError:
                self._send(400, {"message": "n must be an integer"})
                return
            if n < 1:
                self._send(400, {"message": "n must be positive"})
                return
            text = presets.recommendation_query(
                steamid, limit=n, exclude_owned=exclude, genre=genre
            )
            try:
                response = execute_query_text(text, graph)
            except (QuerySyntaxError, QueryValidationError) as exc:
                self._send(400, {"message": str(exc)})
                return
            response["query"] = text
            self._send(200, response)
            return

        if url.path == "/api/stats/attainment":
            try:
                bins = int(params.get("bins", ["50"])[0])
            except ValueError:
                self._send(400, {"message": "bins must be an integer"})
                return
            if not 1 <= bins <= 10000:
                self._send(400, {"message": "bins out of range"})
                return
            groupby = params.get("groupby", [None])[0]
            if groupby not in (None, "genre"):
                self._send(400, {"message": "groupby must be 'genre' when present"})
                return
            specs = (
                genre_histograms(graph, bins)
                if groupby == "genre"
                else [rating_histogram(graph, bins)]
            )
            self._send(
                200,
                [
                    {
                        "group": s.group,
                        "edges": list(s.edges),
                        "densities": list(s.densities),
                        "count": s.count,
                    }
                    for s in specs
                ],
            )
            return

        if url.path == "/api/schema":
            vertices = []
            for kind in VertexKind:
                attrs = set()
                for vid in graph.vertices_of_kind(kind):
                    attrs.update(graph.vertex(vid).attrs)
                vertices.append(
                    {
                        "kind": kind.value,
                        "count": graph.count(kind),
                        "attributes": sorted(attrs),
                    }
                )
            edges = []
            for kind in EdgeKind:
                attrs = set()
                for edge in graph.edges():
                    if edge.kind is kind:
                        attrs.update(edge.attrs)
                src, dst = EDGE_ENDPOINTS[kind]
                edges.append(
                    {
                        "kind": kind.value,
                        "count": graph.count(kind),
                        "endpoints": [src.value, dst.value],
                        "attributes": sorted(attrs),
                    }
                )
            self._send(200, {"vertices": vertices, "edges": edges})
            return

        self._send(404, {"message": f"no such endpoint {url.path}"})


def make_server(config: AppConfig, *, block_until_ready: bool = True) -> ThreadingHTTPServer:
    """Create the HTTP server and start loading the dataset in the
    background; callers run serve_forever()."""
    state = ServiceState(config)
    handler = type("BoundHandler", (_Handler,), {"state": state})
    server = ThreadingHTTPServer((config.host, config.port), handler)
    loader = threading.Thread(target=state.load, daemon=True)
    loader.start()
    if block_until_ready:
        loader.join()
        if state.graph is None:
            server.server_close()
            raise RuntimeError(state.error or "dataset failed to load")
    return server


def http_serve(config: AppConfig) -> None:
    """Blocking entry point used by the CLI serve subcommand."""
    server = make_server(config, block_until_ready=False)
    host, port = server.server_address[:2]
    print(f"serving on http://{host}:{port} (data: {config.data_dir})", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
