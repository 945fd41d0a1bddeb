"""Minimal HTTP server exposing any backend over the scoring wire protocol.

Used for loopback testing of the remote client; can also front an
in-process model for external callers.
"""

from __future__ import annotations

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from .scoring import Backend


def _make_handler(backend: Backend):
    class Handler(BaseHTTPRequestHandler):
        def _send(self, code: int, payload: dict):
            body = json.dumps(payload).encode("utf-8")
            self.send_response(code)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

        def do_GET(self):
            if self.path == "/v1/health":
                self._send(200, {"status": "ok", "model": backend.name})
            else:
                self._send(404, {"error": "not found"})

        def do_POST(self):
            if self.path != "/v1/score":
                self._send(404, {"error": "not found"})
                return
            length = int(self.headers.get("Content-Length", "0"))
            try:
                request = json.loads(self.rfile.read(length).decode("utf-8"))
                scores = backend.score_completions(
                    request["prompt"], request["completions"])
            except Exception as exc:  # surfaced to the client as a 400
                self._send(400, {"error": str(exc)})
                return
            self._send(200, {
                "results": [
                    {"completion": s.completion,
                     "token_logprobs": list(s.token_logprobs)}
                    for s in scores
                ]
            })

        def log_message(self, *args):
            pass

    return Handler


class BackendServer:
    """Threaded scoring server; use as a context manager in tests."""

    def __init__(self, backend: Backend, host: str = "127.0.0.1", port: int = 0):
        self._server = ThreadingHTTPServer((host, port), _make_handler(backend))
        self._thread = threading.Thread(target=self._server.serve_forever, daemon=True)

    @property
    def url(self) -> str:
        host, port = self._server.server_address[:2]
        return f"http://{host}:{port}"

    def __enter__(self):
        self._thread.start()
        return self

    def __exit__(self, *exc):
        self._server.shutdown()
        self._server.server_close()
        self._thread.join()
