"""HTTP query service over an immutable engine-state snapshot."""

from __future__ import annotations

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlsplit

from .engine import EngineState
from .errors import SiterankError
from .fusion import FusionWeights, search
from .social import query_page_similarity
from .textindex import tokenize

_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "application/javascript",
    ".css": "text/css",
    ".json": "application/json",
    ".svg": "image/svg+xml",
    ".ico": "image/x-icon",
}


def parse_weights(raw: str) -> FusionWeights:
    """Parse a 'text,social,static' weight triple; raises ValueError."""
    parts = raw.split(",")
    if len(parts) != 3:
        raise ValueError(f"expected three comma-separated weights, got {raw!r}")
    text, social, static = (float(p) for p in parts)
    weights = FusionWeights(text, social, static)
    weights.check()
    return weights


def result_payload(query: str, k: int, results) -> dict:
    return {
        "query": query,
        "k": k,
        "results": [
            {
                "page": r.page,
                "score": r.score,
                "components": {"text": r.text, "social": r.social,
                               "static": r.static},
                "position": r.position,
            }
            for r in results
        ],
    }


class SearchService:
    """Holds the (swappable) engine snapshot and answers API queries.

    The state reference is swapped atomically; requests arriving before a
    snapshot is installed are answered 503.
    """

    def __init__(self, state: EngineState | None = None,
                 ui_dir: Path | None = None):
        self._state = state
        self._lock = threading.Lock()
        self.ui_dir = Path(ui_dir) if ui_dir else None

    @property
    def state(self) -> EngineState | None:
        with self._lock:
            return self._state

    def set_state(self, state: EngineState) -> None:
        with self._lock:
            self._state = state

    # --- endpoint implementations; each returns (status, payload dict) ---

    def handle_search(self, params: dict[str, list[str]]) -> tuple[int, dict]:
        state = self.state
        if state is None:
            return 503, {"error": "engine state still loading"}
        query = params.get("q", [""])[0]
        if not query.strip():
            return 400, {"error": "empty query"}
        try:
            k = int(params.get("k", ["10"])[0])
            if k < 1:
                raise ValueError
        except ValueError:
            return 400, {"error": f"bad k: {params.get('k')[0]!r}"}
        try:
            weights = (parse_weights(params["w"][0])
                       if "w" in params else FusionWeights())
        except ValueError as exc:
            return 400, {"error": f"bad weights: {exc}"}
        static = params.get("static", ["lpr"])[0]
        if static not in ("lpr", "pr"):
            return 400, {"error": f"bad static ranker: {static!r}"}
        try:
            results = search(state, query, k=k, weights=weights, static=static)
        except SiterankError as exc:
            return 400, {"error": str(exc)}
        return 200, result_payload(query, k, results)

    def handle_page(self, params: dict[str, list[str]]) -> tuple[int, dict]:
        state = self.state
        if state is None:
            return 503, {"error": "engine state still loading"}
        page_id = params.get("id", [""])[0]
        if state.index is None or page_id not in state.index:
            return 404, {"error": f"unknown page: {page_id!r}"}
        annotations = {}
        if state.store is not None:
            page_idx = state.store.page_index(page_id)
            if page_idx is not None:
                for a_idx in state.store.annotations_of(page_idx):
                    annotations[state.store.annotations[a_idx]] = int(
                        state.store.assoc[a_idx, page_idx])
        payload = {
            "page": page_id,
            "title": state.index.titles.get(page_id, ""),
            "length": state.index.doc_lengths[page_id],
            "annotations": annotations,
            "lpr": state.lpr.score(page_id) if state.lpr is not None else None,
        }
        return 200, payload

    def handle_stats(self) -> tuple[int, dict]:
        state = self.state
        if state is None:
            return 503, {"error": "engine state still loading"}
        stats: dict = {"config": state.config}
        if state.index is not None:
            stats["documents"] = state.index.doc_count
            stats["terms"] = len(state.index.postings)
        if state.graph is not None:
            stats["graph"] = {"pages": len(state.graph.pages),
                              "edges": state.graph.edge_count}
        if state.store is not None:
            stats["annotations"] = {"terms": state.store.num_annotations,
                                    "pages": state.store.num_pages}
        return 200, stats


class _Handler(BaseHTTPRequestHandler):
    service: SearchService  # set by make_server

    def do_GET(self):  # noqa: N802 (http.server API)
        url = urlsplit(self.path)
        params = parse_qs(url.query, keep_blank_values=True)
        if url.path == "/healthz":
            self._send(200, "ok", content_type="text/plain; charset=utf-8")
        elif url.path == "/search":
            status, payload = self.service.handle_search(params)
            self._send_json(status, payload)
        elif url.path == "/page":
            status, payload = self.service.handle_page(params)
            self._send_json(status, payload)
        elif url.path == "/stats":
            status, payload = self.service.handle_stats()
            self._send_json(status, payload)
        else:
            self._serve_static(url.path)

    def _serve_static(self, path: str) -> None:
        ui_dir = self.service.ui_dir
        if ui_dir is None:
            self._send_json(404, {"error": "not found"})
            return
        if path == "/":
            path = "/index.html"
        target = (ui_dir / path.lstrip("/")).resolve()
        if not str(target).startswith(str(ui_dir.resolve())) or not target.is_file():
            self._send_json(404, {"error": "not found"})
            return
        content_type = _CONTENT_TYPES.get(target.suffix, "application/octet-stream")
        body = target.read_bytes()
        self.send_response(200)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _send_json(self, status: int, payload: dict) -> None:
        body = json.dumps(payload, sort_keys=True)
        self._send(status, body, content_type="application/json")

    def _send(self, status: int, body: str, content_type: str) -> None:
        data = body.encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(data)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(data)

    def log_message(self, format, *args):  # silence per-request stderr noise
        pass


def make_server(service: SearchService, port: int = 0,
                host: str = "127.0.0.1") -> ThreadingHTTPServer:
    """Bind a threading HTTP server; port 0 picks an ephemeral port."""
    handler = type("BoundHandler", (_Handler,), {"service": service})
    return ThreadingHTTPServer((host, port), handler)
