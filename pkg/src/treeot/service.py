"""WebSocket sync service.

One process serves one document. Frames are single JSON texts:

* client → server: ``{"type": "hello", "doc": <id>, "site": N}``
* server → client: ``{"type": "snapshot", "rev": R, "doc": <tree>}``
* client → server: ``{"type": "op", "site": N, "seq": K, "parent_rev": R, "op": <op>}``
* client → server: ``{"type": "edit", "parent_rev": R, "intent": <intent>}``
* server → client: ``{"type": "op", "rev": R, "site": N, "op": <op>}``
* server → client: ``{"type": "error", "code": ..., "msg": ...}``

``edit`` frames are for thin clients: the server translates the intent
against its current document and ingests the resulting operations on the
sender's behalf, so such clients never transform anything themselves.
The demo UI is served as static files under ``/ui``; the socket endpoint
is ``/ws``.
"""

from __future__ import annotations

import asyncio
import http
import json
import logging
from pathlib import Path
from typing import Any, Optional

from websockets.asyncio.server import ServerConnection, broadcast, serve

from . import codec, jsondoc, sync
from .ops import SiteId

log = logging.getLogger("treeot.service")

CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".mjs": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".json": "application/json",
    ".map": "application/json",
    ".svg": "image/svg+xml",
}


def error_frame(code: str, msg: str) -> str:
    return json.dumps({"type": "error", "code": code, "msg": msg})


class SyncService:
    """Wires one :class:`~treeot.sync.Server` to WebSocket connections."""

    def __init__(
        self,
        doc_id: str,
        server: sync.Server,
        op_log: Optional[sync.OpLog] = None,
        ui_dir: Optional[str] = None,
    ) -> None:
        self.doc_id = doc_id
        self.server = server
        self.op_log = op_log
        self.ui_dir = Path(ui_dir) if ui_dir else None
        self._connections: dict[SiteId, ServerConnection] = {}

    # -- frame handling --------------------------------------------------

    async def handler(self, conn: ServerConnection) -> None:
        site: Optional[SiteId] = None
        try:
            async for raw in conn:
                try:
                    frame = json.loads(raw)
                    if not isinstance(frame, dict):
                        raise ValueError("frame must be an object")
                except ValueError as exc:
                    await conn.send(error_frame("bad-frame", str(exc)))
                    continue
                ftype = frame.get("type")
                if ftype == "hello":
                    site = await self._handle_hello(conn, frame, site)
                    if site is None:
                        return
                elif site is None:
                    await conn.send(error_frame("hello-required", "send a hello frame first"))
                elif ftype == "op":
                    await self._handle_op(conn, frame, site)
                elif ftype == "edit":
                    await self._handle_edit(conn, frame, site)
                else:
                    await conn.send(error_frame("bad-frame", f"unknown frame type {ftype!r}"))
        finally:
            if site is not None and self._connections.get(site) is conn:
                del self._connections[site]
                log.info("site %s disconnected", site)

    async def _handle_hello(
        self, conn: ServerConnection, frame: dict, current: Optional[SiteId]
    ) -> Optional[SiteId]:
        doc_id = frame.get("doc")
        site = frame.get("site")
        if doc_id != self.doc_id:
            await conn.send(error_frame("unknown-doc", f"no document {doc_id!r}"))
            await conn.close()
            return None
        if not isinstance(site, int) or site < 1:
            await conn.send(error_frame("bad-site", "site must be a positive integer"))
            await conn.close()
            return None
        occupant = self._connections.get(site)
        if occupant is not None and occupant is not conn:
            await conn.send(error_frame("site-taken", f"site {site} already connected"))
            await conn.close()
            return current
        self._connections[site] = conn
        revision, doc = self.server.snapshot()
        await conn.send(
            json.dumps({"type": "snapshot", "rev": revision, "doc": codec.tree_to_obj(doc)})
        )
        log.info("site %s joined at revision %s", site, revision)
        return site

    async def _handle_op(self, conn: ServerConnection, frame: dict, site: SiteId) -> None:
        try:
            env = sync.envelope_from_obj(frame)
        except codec.CodecError as exc:
            await conn.send(error_frame("bad-frame", str(exc)))
            return
        if env.site != site:
            await conn.send(error_frame("wrong-site", f"connection belongs to site {site}"))
            return
        try:
            self._ingest_logged(env)
        except sync.EngineInvariantError as exc:
            log.error("transformation produced an invalid operation: %s", exc)
            await conn.send(error_frame(exc.code, str(exc)))
        except sync.SyncError as exc:
            await conn.send(error_frame(exc.code, str(exc)))

    async def _handle_edit(self, conn: ServerConnection, frame: dict, site: SiteId) -> None:
        try:
            intent = jsondoc.intent_from_obj(frame.get("intent"))
            ops = jsondoc.edit_to_ops(self.server.doc, intent)
        except (jsondoc.EditError, jsondoc.MalformedTreeError, ValueError, TypeError) as exc:
            # ValueError/TypeError cover payloads that are not JSON values
            # (non-finite numbers and the like)
            code = getattr(exc, "code", "edit-rejected")
            await conn.send(error_frame(code, str(exc)))
            return
        # The intent resolves against the current head and the resulting
        # operations are ingested without ever yielding to the event loop,
        # so no other connection's operation can interleave with the pair.
        try:
            for op in ops:
                env = sync.OpEnvelope(site, self.server.next_seq(site), self.server.head, op)
                self._ingest_logged(env)
        except sync.SyncError as exc:
            await conn.send(error_frame(exc.code, str(exc)))

    def _ingest_logged(self, env: sync.OpEnvelope) -> sync.AppliedOp:
        record = self.server.ingest(env)
        if self.op_log is not None:
            self.op_log.append(env)
        frame = json.dumps(
            {
                "type": "op",
                "rev": record.revision,
                "site": record.site,
                "op": codec.op_to_obj(record.op),
            }
        )
        broadcast(self._connections.values(), frame)
        return record

    # -- static assets ---------------------------------------------------

    def process_request(self, conn: ServerConnection, request: Any) -> Any:
        path = request.path.split("?", 1)[0]
        if path == "/ws":
            return None
        if path == "/":
            response = conn.respond(http.HTTPStatus.MOVED_PERMANENTLY, "see /ui/\n")
            response.headers["Location"] = "/ui/"
            return response
        if path == "/ui" or path.startswith("/ui/"):
            return self._static_response(conn, path)
        return conn.respond(http.HTTPStatus.NOT_FOUND, "not found\n")

    def _static_response(self, conn: ServerConnection, path: str) -> Any:
        if self.ui_dir is None or not self.ui_dir.is_dir():
            return conn.respond(
                http.HTTPStatus.NOT_FOUND, "demo UI not built (see frontend/README note)\n"
            )
        name = path.removeprefix("/ui").lstrip("/") or "index.html"
        target = (self.ui_dir / name).resolve()
        if not target.is_relative_to(self.ui_dir.resolve()) or not target.is_file():
            return conn.respond(http.HTTPStatus.NOT_FOUND, "not found\n")
        response = conn.respond(http.HTTPStatus.OK, target.read_text(encoding="utf-8"))
        content_type = CONTENT_TYPES.get(target.suffix, "text/plain; charset=utf-8")
        del response.headers["Content-Type"]  # respond() preset; headers are a multidict
        response.headers["Content-Type"] = content_type
        return response

    # -- lifecycle ---------------------------------------------------------

    async def run(
        self,
        host: str,
        port: int,
        *,
        ready: Optional[asyncio.Future] = None,
        stop: Optional[asyncio.Event] = None,
    ) -> None:
        """Serve until ``stop`` is set (or forever); resolves ``ready`` with the port."""
        async with serve(
            self.handler, host, port, process_request=self.process_request
        ) as ws_server:
            bound = ws_server.sockets[0].getsockname()[1]
            log.info("serving document %r on ws://%s:%s/ws", self.doc_id, host, bound)
            print(f"serving on ws://{host}:{bound}/ws (ui at http://{host}:{bound}/ui/)", flush=True)
            if ready is not None:
                ready.set_result(bound)
            if stop is None:
                await asyncio.Future()
            else:
                await stop.wait()


def load_server(doc_path: str, log_path: Optional[str]) -> sync.Server:
    """Build the server state: the document file, plus any existing log."""
    with open(doc_path, "r", encoding="utf-8") as handle:
        initial = jsondoc.json_to_tree(json.load(handle))
    if log_path and Path(log_path).exists() and Path(log_path).stat().st_size > 0:
        server = sync.log_replay(log_path, initial)
        log.info("replayed %s operations from %s", server.head, log_path)
        return server
    return sync.Server(initial)


def default_ui_dir() -> Optional[str]:
    """Locate the built demo UI when running from a source checkout."""
    candidate = Path(__file__).resolve().parents[2] / "frontend" / "dist"
    return str(candidate) if candidate.is_dir() else None
