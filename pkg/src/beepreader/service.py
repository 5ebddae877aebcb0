"""HTTP front for a session: form snapshot, key input, SSE events, audio.

Endpoints:

    GET  /api/form        form snapshot (title, focus, fields) as JSON
    POST /api/key         {"key": <name>} -> applies the key, returns events
    GET  /api/events      server-sent event stream of every UiEvent
    GET  /api/audio/last  most recent announcement as audio/wav (404 if none)
    GET  /api/transcript  full session transcript as text/plain

Mutations are applied strictly in lock-acquisition order; the event stream
fan-out is read-only. Each SSE client first receives the session's backlog,
then live events, so POST responses and the stream always agree on order.
"""

from __future__ import annotations

import json
import queue
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import urlsplit

from . import reader
from .session import LoggedEvent, Session

_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".json": "application/json",
    ".map": "application/json",
    ".svg": "image/svg+xml",
    ".png": "image/png",
    ".ico": "image/x-icon",
}


def event_payload(entry: LoggedEvent) -> dict:
    return {
        "kind": entry.event.kind,
        "field": entry.event.field_id,
        "transcript": entry.event.transcript,
        "clock_ms": entry.clock_ms,
    }


class AccessService(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(
        self,
        session: Session,
        address: tuple[str, int] = ("127.0.0.1", 0),
        ui_dir: str | Path | None = None,
    ) -> None:
        super().__init__(address, ApiHandler)
        self.session = session
        self.ui_dir = Path(ui_dir).resolve() if ui_dir else None
        self.stopping = threading.Event()
        self._listeners: list[queue.SimpleQueue] = []
        self._listeners_lock = threading.Lock()

    @property
    def port(self) -> int:
        return self.server_address[1]

    def shutdown(self) -> None:
        self.stopping.set()
        super().shutdown()

    def add_listener(self) -> queue.SimpleQueue:
        q: queue.SimpleQueue = queue.SimpleQueue()
        with self._listeners_lock:
            self._listeners.append(q)
        return q

    def remove_listener(self, q: queue.SimpleQueue) -> None:
        with self._listeners_lock:
            if q in self._listeners:
                self._listeners.remove(q)

    def broadcast(self, entries: list[LoggedEvent]) -> None:
        with self._listeners_lock:
            listeners = list(self._listeners)
        for q in listeners:
            for entry in entries:
                q.put(entry)


class ApiHandler(BaseHTTPRequestHandler):
    server: AccessService

    def log_message(self, fmt: str, *args: object) -> None:
        pass  # keep stdout deterministic for scripted use

    # -- plumbing -----------------------------------------------------------

    def _send(self, status: int, content_type: str, body: bytes) -> None:
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _send_json(self, payload: object, status: int = 200) -> None:
        body = json.dumps(payload).encode("utf-8")
        self._send(status, "application/json", body)

    def _not_found(self, message: str = "not found") -> None:
        self._send_json({"error": message}, status=404)

    # -- handlers -------------------------------------------------------------

    def do_GET(self) -> None:
        path = urlsplit(self.path).path
        session = self.server.session
        if path == "/api/form":
            with session.lock:
                snapshot = session.snapshot()
            self._send_json(snapshot)
        elif path == "/api/events":
            self._stream_events()
        elif path == "/api/audio/last":
            with session.lock:
                wav = session.last_wav
            if wav is None:
                self._not_found("no audio rendered yet")
            else:
                self._send(200, "audio/wav", wav)
        elif path == "/api/transcript":
            with session.lock:
                text = session.transcript_text()
            self._send(200, "text/plain; charset=utf-8", text.encode("utf-8"))
        else:
            self._serve_static(path)

    def do_POST(self) -> None:
        path = urlsplit(self.path).path
        if path != "/api/key":
            self._not_found()
            return
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(length) if length else b""
        try:
            payload = json.loads(raw.decode("utf-8") or "{}")
        except (json.JSONDecodeError, UnicodeDecodeError):
            self._send_json({"error": "body must be JSON"}, status=400)
            return
        key = payload.get("key") if isinstance(payload, dict) else None
        if key not in reader.KEYS:
            self._send_json({"error": f"unknown key: {key!r}"}, status=400)
            return
        session = self.server.session
        with session.lock:
            entries = session.press(key)
            self.server.broadcast(entries)
        self._send_json({"events": [event_payload(e) for e in entries]})

    def _stream_events(self) -> None:
        session = self.server.session
        with session.lock:
            backlog = list(session.log)
            q = self.server.add_listener()
        try:
            self.send_response(200)
            self.send_header("Content-Type", "text/event-stream")
            self.send_header("Cache-Control", "no-cache")
            self.end_headers()
            for entry in backlog:
                self._write_sse(entry)
            while not self.server.stopping.is_set():
                try:
                    entry = q.get(timeout=0.25)
                except queue.Empty:
                    continue
                self._write_sse(entry)
        except (BrokenPipeError, ConnectionResetError):
            pass
        finally:
            self.server.remove_listener(q)

    def _write_sse(self, entry: LoggedEvent) -> None:
        data = json.dumps(event_payload(entry)).encode("utf-8")
        self.wfile.write(b"data: " + data + b"\n\n")
        self.wfile.flush()

    def _serve_static(self, path: str) -> None:
        root = self.server.ui_dir
        if root is None:
            self._not_found()
            return
        relative = path.lstrip("/") or "index.html"
        candidate = (root / relative).resolve()
        if root not in candidate.parents and candidate != root:
            self._not_found()
            return
        if candidate.is_dir():
            candidate = candidate / "index.html"
        if not candidate.is_file():
            self._not_found()
            return
        content_type = _CONTENT_TYPES.get(candidate.suffix, "application/octet-stream")
        self._send(200, content_type, candidate.read_bytes())
