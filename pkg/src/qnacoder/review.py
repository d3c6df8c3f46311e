"""Human-verification service: list flagged events, accept corrections,
report progress.

The service is a single-process local HTTP server. Reads are concurrent;
every mutation is serialized through one lock and acknowledged only after
the correction line is durably appended to the store's log, so replaying
events.ndjson + corrections.ndjson always reconstructs the in-memory state.

API (JSON bodies):
    GET  /api/schema                  grammar schema document
    GET  /api/review?page=&size=      pending items + X-Total-Count header
    GET  /api/review/{record}/{n}     one item
    POST /api/review/{record}/{n}     resolution; 200 / 404 / 422
    GET  /api/progress                status counts
    GET  /                            review UI static assets
"""

from __future__ import annotations

import datetime as _dt
import json
import mimetypes
import threading
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

from .grammar import (
    Assignment,
    CategoryPath,
    CodedEvent,
    Violation,
    event_to_obj,
    schema_to_json,
    validate_event,
)
from .store import (
    EventStore,
    ResolutionValidationError,
    ReviewResolution,
    UnknownKeyError,
    apply_resolution_to_event,
)
from .store import append_correction as _append_correction
from .enrich import DATE_PATH, PLACE_PATH


@dataclass(frozen=True)
class ReviewItem:
    """One pending extraction: the event plus the context a verifier needs
    (source text with the mention span, flag reasons, date and place)."""

    event: CodedEvent

    def to_obj(self) -> dict:
        e = self.event
        return {
            "record_id": e.record_id,
            "ordinal": e.ordinal,
            "description": e.description,
            "span": list(e.span) if e.span else None,
            "flags": list(e.flags),
            "date": e.first_value(DATE_PATH),
            "place": e.first_value(PLACE_PATH),
            "event": event_to_obj(e),
        }


def list_pending(store: EventStore, page: int = 1, page_size: int = 20) -> tuple[list[ReviewItem], int]:
    """Flagged events in stable key order; returns (page items, total).
    A page beyond the range is empty but the total is preserved."""
    pending = [store.events[k] for k in sorted(store.events) if store.events[k].status == "flagged"]
    total = len(pending)
    start = (max(page, 1) - 1) * page_size
    return [ReviewItem(e) for e in pending[start : start + page_size]], total


def get_item(store: EventStore, record_id: int, ordinal: int) -> ReviewItem:
    key = (record_id, ordinal)
    if key not in store.events:
        raise UnknownKeyError(key)
    return ReviewItem(store.events[key])


def progress(store: EventStore) -> dict[str, int]:
    counts = store.counts()
    counts["total"] = sum(counts.values())
    return counts


def apply_resolution(
    store: EventStore,
    resolution: ReviewResolution,
    directory=None,
) -> CodedEvent:
    """Validate and apply one resolution; append it to the log (durably when
    ``directory`` is given).

    Identical resubmission is idempotent: the state does not change and one
    extra log line marked duplicate is appended. Validation failures leave
    the store untouched and carry per-field messages.
    """
    if resolution.key not in store.events:
        raise UnknownKeyError(resolution.key)
    if resolution.verdict not in ("accept_as_is", "corrected", "rejected"):
        raise ResolutionValidationError(
            [Violation("", f"unknown verdict {resolution.verdict!r}")]
        )

    is_duplicate = any(
        r.content_key() == resolution.content_key() and not r.duplicate
        for r in store.corrections
    )
    resolution = ReviewResolution(
        record_id=resolution.record_id,
        ordinal=resolution.ordinal,
        verdict=resolution.verdict,
        assignments=resolution.assignments,
        verifier_id=resolution.verifier_id,
        timestamp=resolution.timestamp or _dt.datetime.now(_dt.timezone.utc).isoformat(),
        duplicate=is_duplicate,
    )

    if not is_duplicate:
        candidate = apply_resolution_to_event(store.events[resolution.key], resolution)
        violations = validate_event(store.schema, candidate)
        if violations:
            raise ResolutionValidationError(violations)

    if directory is not None:
        _append_correction(directory, resolution)
    return store.record_correction(resolution)


# ---------------------------------------------------------------------------
# HTTP server
# ---------------------------------------------------------------------------


class ReviewServer:
    """Local HTTP front over one store directory. Reads share the store;
    writes serialize through ``mutate_lock`` and are durable before the
    response goes out."""

    def __init__(self, store: EventStore, directory, host="127.0.0.1", port=0,
                 token: str | None = None, ui_dir=None):
        self.store = store
        self.directory = directory
        self.token = token
        self.ui_dir = Path(ui_dir) if ui_dir else None
        self.mutate_lock = threading.Lock()
        handler = _make_handler(self)
        self.httpd = ThreadingHTTPServer((host, port), handler)
        self.thread: threading.Thread | None = None

    @property
    def port(self) -> int:
        return self.httpd.server_address[1]

    def start(self):
        self.thread = threading.Thread(target=self.httpd.serve_forever, daemon=True)
        self.thread.start()
        return self

    def serve_forever(self):
        self.httpd.serve_forever()

    def stop(self):
        self.httpd.shutdown()
        self.httpd.server_close()
        if self.thread:
            self.thread.join(timeout=5)


_FALLBACK_INDEX = """<!doctype html>
<html><head><meta charset="utf-8"><title>Review service</title></head>
<body><h1>Review service is running</h1>
<p>No UI bundle is installed. The JSON API is available under /api/:
/api/schema, /api/review, /api/review/{record}/{n}, /api/progress.</p>
</body></html>
"""


def _make_handler(server: ReviewServer):
    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"

        def log_message(self, fmt, *args):  # quiet by default
            pass

        def _send(self, status: int, body: bytes, content_type="application/json",
                  extra_headers=None):
            self.send_response(status)
            self.send_header("Content-Type", content_type)
            self.send_header("Content-Length", str(len(body)))
            for k, v in (extra_headers or {}).items():
                self.send_header(k, v)
            self.end_headers()
            self.wfile.write(body)

        def _send_json(self, status: int, obj, extra_headers=None):
            body = json.dumps(obj, ensure_ascii=False).encode("utf-8")
            self._send(status, body, "application/json; charset=utf-8", extra_headers)

        def _authorized(self) -> bool:
            if server.token is None:
                return True
            return self.headers.get("X-Auth-Token") == server.token

        def _review_key(self, parts: list[str]) -> tuple[int, int] | None:
            try:
                return int(parts[0]), int(parts[1])
            except (ValueError, IndexError):
                return None

        def do_GET(self):
            if not self._authorized():
                self._send_json(401, {"error": "missing or wrong token"})
                return
            url = urlparse(self.path)
            parts = [p for p in url.path.split("/") if p]
            if url.path == "/api/schema":
                self._send(200, schema_to_json(server.store.schema).encode("utf-8"),
                           "application/json; charset=utf-8")
            elif url.path == "/api/review":
                q = parse_qs(url.query)
                page = int(q.get("page", ["1"])[0])
                size = int(q.get("size", ["20"])[0])
                items, total = list_pending(server.store, page, size)
                self._send_json(200, [i.to_obj() for i in items],
                                {"X-Total-Count": str(total)})
            elif len(parts) == 4 and parts[:2] == ["api", "review"]:
                key = self._review_key(parts[2:])
                if key is None:
                    self._send_json(404, {"error": "bad key"})
                    return
                try:
                    item = get_item(server.store, *key)
                except UnknownKeyError:
                    self._send_json(404, {"error": f"no event {key}"})
                    return
                self._send_json(200, item.to_obj())
            elif url.path == "/api/progress":
                self._send_json(200, progress(server.store))
            else:
                self._serve_static(url.path)

        def _serve_static(self, path: str):
            if path in ("", "/"):
                path = "/index.html"
            if server.ui_dir is not None:
                candidate = (server.ui_dir / path.lstrip("/")).resolve()
                try:
                    candidate.relative_to(server.ui_dir.resolve())
                except ValueError:
                    self._send_json(404, {"error": "not found"})
                    return
                if candidate.is_file():
                    ctype = mimetypes.guess_type(str(candidate))[0] or "application/octet-stream"
                    self._send(200, candidate.read_bytes(), ctype)
                    return
            if path == "/index.html":
                self._send(200, _FALLBACK_INDEX.encode("utf-8"), "text/html; charset=utf-8")
            else:
                self._send_json(404, {"error": "not found"})

        def do_POST(self):
            if not self._authorized():
                self._send_json(401, {"error": "missing or wrong token"})
                return
            url = urlparse(self.path)
            parts = [p for p in url.path.split("/") if p]
            if len(parts) != 4 or parts[:2] != ["api", "review"]:
                self._send_json(404, {"error": "not found"})
                return
            key = self._review_key(parts[2:])
            if key is None:
                self._send_json(404, {"error": "bad key"})
                return
            length = int(self.headers.get("Content-Length", "0"))
            try:
                body = json.loads(self.rfile.read(length) or b"{}")
            except json.JSONDecodeError:
                self._send_json(422, {"errors": [{"path": "", "message": "body is not JSON"}]})
                return
            try:
                resolution = ReviewResolution(
                    record_id=key[0],
                    ordinal=key[1],
                    verdict=body.get("verdict", ""),
                    assignments=tuple(
                        Assignment(CategoryPath(a["path"]), a["value"], "human")
                        for a in body.get("assignments", ())
                    ),
                    verifier_id=body.get("verifier_id", ""),
                )
            except (KeyError, TypeError):
                self._send_json(422, {"errors": [{"path": "", "message": "malformed assignment"}]})
                return
            with server.mutate_lock:
                try:
                    updated = apply_resolution(server.store, resolution, server.directory)
                except UnknownKeyError:
                    self._send_json(404, {"error": f"no event {key}"})
                    return
                except ResolutionValidationError as e:
                    self._send_json(
                        422,
                        {"errors": [{"path": v.path, "message": v.message} for v in e.violations]},
                    )
                    return
            self._send_json(200, {"event": event_to_obj(updated), "progress": progress(server.store)})

    return Handler
