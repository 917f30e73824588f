"""Local analysis service: the stateless backend the drawing editor uses.

Plain HTTP with JSON payloads in the drawing file schema.  Every request
carries the full document, so requests are independent and the threaded
server can run them concurrently.  A malformed payload gets a 4xx with
the parse error; an internal failure gets a 5xx, never a silent wrong
answer.  CORS is wide open: the service binds locally and the editor may
be served from anywhere (including file://).
"""

from __future__ import annotations

import json
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from . import __version__
from .analysis import analysis_json, analyze, bounds_json
from .bounds import BoundInput, best_lower_bound
from .fileformat import DrawingFormatError, parse_drawing_document
from .svg import render_svg

MAX_BODY = 32 * 1024 * 1024


class AnalysisHandler(BaseHTTPRequestHandler):
    server_version = "quasicross/" + __version__
    protocol_version = "HTTP/1.1"
    static_dir: Path | None = None

    def log_message(self, format, *args):  # keep test output clean
        pass

    # -- plumbing ---------------------------------------------------------

    def _send(self, status: int, payload: bytes, content_type: str) -> None:
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(payload)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.end_headers()
        self.wfile.write(payload)

    def _send_json(self, status: int, doc) -> None:
        self._send(status, json.dumps(doc, indent=2).encode("utf-8"),
                   "application/json")

    def _send_error_json(self, status: int, kind: str, message: str) -> None:
        self._send_json(status, {"error": {"kind": kind, "message": message}})

    def _read_json(self):
        length = int(self.headers.get("Content-Length", 0))
        if length > MAX_BODY:
            raise DrawingFormatError("too-large", f"body exceeds {MAX_BODY} bytes")
        raw = self.rfile.read(length)
        try:
            return json.loads(raw)
        except json.JSONDecodeError as err:
            raise DrawingFormatError("invalid-json", f"not valid JSON: {err}") from err

    # -- routes -----------------------------------------------------------

    def do_OPTIONS(self):
        self._send(204, b"", "text/plain")

    def do_GET(self):
        if self.path == "/api/health":
            self._send_json(200, {"name": "quasicross", "version": __version__})
            return
        if self.static_dir is not None:
            self._serve_static()
            return
        self._send_error_json(404, "not-found", f"no route {self.path}")

    def do_POST(self):
        try:
            if self.path == "/api/analyze":
                drawing = parse_drawing_document(self._read_json())
                self._send_json(200, analysis_json(analyze(drawing)))
            elif self.path == "/api/bounds":
                doc = self._read_json()
                try:
                    inp = BoundInput(int(doc["n"]), int(doc["e"]))
                except (KeyError, TypeError, ValueError) as err:
                    raise DrawingFormatError("bad-schema", f"bad bounds input: {err}")
                if inp.n < 4:
                    raise DrawingFormatError(
                        "bad-schema", "bounds are only stated for n >= 4")
                self._send_json(200, bounds_json(best_lower_bound(inp)))
            elif self.path == "/api/svg":
                drawing = parse_drawing_document(self._read_json())
                result = analyze(drawing)
                if not result.is_valid:
                    raise DrawingFormatError(
                        "invalid-drawing", "cannot export a non-simple drawing")
                self._send(200, render_svg(result).encode("utf-8"), "image/svg+xml")
            else:
                self._send_error_json(404, "not-found", f"no route {self.path}")
        except DrawingFormatError as err:
            self._send_error_json(400, err.kind, str(err))
        except Exception as err:  # pragma: no cover - defensive 5xx
            self._send_error_json(500, "internal", f"{type(err).__name__}: {err}")

    def _serve_static(self) -> None:
        assert self.static_dir is not None
        rel = self.path.lstrip("/") or "index.html"
        target = (self.static_dir / rel).resolve()
        if not str(target).startswith(str(self.static_dir.resolve())) \
                or not target.is_file():
            self._send_error_json(404, "not-found", f"no file {self.path}")
            return
        types = {".html": "text/html", ".js": "text/javascript",
                 ".css": "text/css", ".json": "application/json",
                 ".svg": "image/svg+xml"}
        self._send(200, target.read_bytes(),
                   types.get(target.suffix, "application/octet-stream"))


def make_server(port: int, host: str = "127.0.0.1",
                static_dir: str | None = None) -> ThreadingHTTPServer:
    handler = type("BoundHandler", (AnalysisHandler,), {
        "static_dir": Path(static_dir) if static_dir else None})
    return ThreadingHTTPServer((host, port), handler)


def serve(port: int, host: str = "127.0.0.1", static_dir: str | None = None) -> None:
    server = make_server(port, host, static_dir)
    print(f"quasicross analysis service on http://{host}:{server.server_address[1]}")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        server.shutdown()
