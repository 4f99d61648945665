"""In-process mock device speaking the IFTTT webhook shape
(`POST /trigger/{event}/with/key/{key}`) for tests and demos.

Records every request and flags duplicate idempotency keys so tests can
assert each ON/OFF transition fires at most once."""

from __future__ import annotations

import json
import re
import threading
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

TRIGGER_RE = re.compile(r"^/trigger/(?P<event>[^/]+)/with/key/(?P<key>[^/]+)$")


@dataclass
class ReceivedRequest:
    event: str
    key: str
    body: dict
    idempotency_key: str | None


@dataclass
class MockDevice:
    """Wraps a ThreadingHTTPServer; use as a context manager.

    status_script: HTTP codes returned per request in order; once
    exhausted, the last entry repeats (default: always 200).
    """

    status_script: list = field(default_factory=lambda: [200])
    requests: list = field(default_factory=list)
    duplicate_keys: list = field(default_factory=list)

    def __post_init__(self):
        self._seen_keys = set()
        self._lock = threading.Lock()
        self._count = 0
        mock = self

        class Handler(BaseHTTPRequestHandler):
            def log_message(self, *args):
                pass

            def do_POST(self):
                m = TRIGGER_RE.match(self.path)
                if not m:
                    self.send_response(404)
                    self.end_headers()
                    return
                length = int(self.headers.get("Content-Length", 0))
                try:
                    body = json.loads(self.rfile.read(length) or b"{}")
                except json.JSONDecodeError:
                    body = {}
                status = mock._next_status()
                idem = self.headers.get("X-Idempotency-Key")
                with mock._lock:
                    if status < 300 and idem is not None:
                        if idem in mock._seen_keys:
                            mock.duplicate_keys.append(idem)
                        mock._seen_keys.add(idem)
                    mock.requests.append(ReceivedRequest(
                        event=m.group("event"), key=m.group("key"),
                        body=body, idempotency_key=idem))
                self.send_response(status)
                self.send_header("Content-Type", "application/json")
                self.end_headers()
                self.wfile.write(b'{"ok": true}')

        self._server = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
        self._thread = threading.Thread(target=self._server.serve_forever,
                                        daemon=True)

    def _next_status(self):
        with self._lock:
            i = min(self._count, len(self.status_script) - 1)
            self._count += 1
            return self.status_script[i]

    @property
    def base_url(self) -> str:
        host, port = self._server.server_address
        return f"http://{host}:{port}"

    def __enter__(self):
        self._thread.start()
        return self

    def __exit__(self, *exc):
        self._server.shutdown()
        self._server.server_close()
        return False
