"""Server-serialized replication of a shared tree.

The server owns the document and assigns every accepted operation a
revision, establishing one total order. Clients edit optimistically,
keep their unacknowledged operations in a pending queue, and fold every
incoming remote operation through that queue — rewriting both sides —
before applying it.

On the server, an incoming operation must be rewritten against the
operations its sender had not seen. Those cannot be taken verbatim from
history: an operation the sender *did* produce is part of the sender's
own editing context, and foreign operations that landed between two of
the sender's operations have to be re-expressed relative to the earlier
one. The server therefore keeps one small bridge per site: the suffix
of history that site has not acknowledged, with the sender's own
operations folded out. Both ends perform mirrored transform calls, so a
client's rebased pending head is always byte-equal to the operation the
server eventually applies on its behalf — which is asserted on every
acknowledgement.

Envelopes, applied records and log lines are immutable values; a server
instance must only be driven from one logical thread of control.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from typing import Any, Iterable, TextIO

from . import codec, tree, tree_transform
from .ops import SiteId, TreeOp


class SyncError(Exception):
    code = "sync-error"


class StaleSeqError(SyncError):
    """Per-site sequence numbers arrived out of order; sender must resend."""

    code = "stale-seq"


class RevisionGapError(SyncError):
    """A broadcast was skipped; receiver must request a fresh snapshot."""

    code = "revision-gap"


class BadParentError(SyncError):
    """Envelope claims a parent revision the server has never issued."""

    code = "bad-parent"


class InvalidOpError(SyncError):
    """Operation does not apply to the current document."""

    code = "invalid-op"


class EngineInvariantError(SyncError):
    """Internal transformation bookkeeping broke; never expected to happen."""

    code = "engine-invariant"


class CorruptLogError(SyncError):
    code = "corrupt-log"


class CorruptTailError(CorruptLogError):
    """The final log line is unreadable (typically a truncated write)."""

    code = "corrupt-tail"


@dataclass(frozen=True, slots=True)
class OpEnvelope:
    """A client operation as sent: stamped with its origin and context."""

    site: SiteId
    seq: int
    parent_revision: int
    op: TreeOp


@dataclass(frozen=True, slots=True)
class AppliedOp:
    """A server history entry: the operation as applied, with its revision."""

    revision: int
    site: SiteId
    seq: int
    parent_revision: int
    op: TreeOp


@dataclass(slots=True)
class _BridgeEntry:
    revision: int
    site: SiteId
    op: TreeOp


class Server:
    """Document authority: ingests envelopes, broadcasts applied records."""

    def __init__(self, doc: tree.Tree) -> None:
        self.initial_doc = doc
        self.doc = doc
        self.head = 0
        self.history: list[AppliedOp] = []
        self._seqs: dict[SiteId, int] = {}
        self._bridges: dict[SiteId, list[_BridgeEntry]] = {}

    def snapshot(self) -> tuple[int, tree.Tree]:
        return self.head, self.doc

    def next_seq(self, site: SiteId) -> int:
        return self._seqs.get(site, 0) + 1

    def doc_at(self, revision: int) -> tree.Tree:
        """Replay history up to ``revision``; for checks and tests."""
        if not 0 <= revision <= self.head:
            raise BadParentError(f"no revision {revision}")
        doc = self.initial_doc
        for record in self.history[:revision]:
            doc = tree_transform.apply_op(doc, record.op)
        return doc

    def ingest(self, env: OpEnvelope) -> AppliedOp:
        """Transform, validate and apply one envelope; returns the broadcast record.

        Rejections (stale sequence, unknown parent, invalid operation)
        leave the server untouched.
        """
        expected = self._seqs.get(env.site, 0) + 1
        if env.seq != expected:
            raise StaleSeqError(f"site {env.site}: got seq {env.seq}, expected {expected}")
        if not 0 <= env.parent_revision <= self.head:
            raise BadParentError(f"parent revision {env.parent_revision} ahead of head {self.head}")

        bridge = self._bridges.get(env.site)
        if bridge is None:
            # First contact: everything after the claimed parent is foreign
            # and untouched by this site, so history entries serve as-is.
            bridge = [
                _BridgeEntry(rec.revision, rec.site, rec.op)
                for rec in self.history[env.parent_revision :]
            ]
        else:
            while bridge and bridge[0].revision <= env.parent_revision:
                bridge.pop(0)

        op = env.op
        folded: list[_BridgeEntry] = []
        for entry in bridge:
            op, residual = tree_transform.transform(op, env.site, entry.op, entry.site)
            folded.append(_BridgeEntry(entry.revision, entry.site, residual))

        if not tree.is_valid(self.doc, op):
            if not folded:
                # nothing was transformed, so the sender's claimed context is
                # the current document: the operation arrived broken
                raise InvalidOpError(f"operation invalid at the claimed context: {env.op!r}")
            raise EngineInvariantError(f"operation invalid after transform: {op!r}")

        self.doc = tree_transform.apply_op(self.doc, op)
        self.head += 1
        record = AppliedOp(self.head, env.site, env.seq, env.parent_revision, op)
        self.history.append(record)
        self._seqs[env.site] = env.seq
        self._bridges[env.site] = folded
        for site, entries in self._bridges.items():
            if site != env.site:
                entries.append(_BridgeEntry(record.revision, record.site, record.op))
        return record


class Client:
    """Replica state machine: optimistic local edits plus a pending queue."""

    def __init__(self, site: SiteId, revision: int, doc: tree.Tree) -> None:
        self.site = site
        self.synced_revision = revision
        self.doc = doc
        self.pending: list[TreeOp] = []
        self._next_seq = 1

    def local_edit(self, op: TreeOp) -> OpEnvelope:
        """Apply ``op`` locally and return the envelope to send."""
        if not tree.is_valid(self.doc, op):
            raise InvalidOpError(f"operation invalid on local document: {op!r}")
        env = OpEnvelope(self.site, self._next_seq, self.synced_revision, op)
        self.doc = tree_transform.apply_op(self.doc, op)
        self.pending.append(op)
        self._next_seq += 1
        return env

    def ingest(self, record: AppliedOp) -> None:
        """Consume one broadcast record, in revision order."""
        if record.revision != self.synced_revision + 1:
            raise RevisionGapError(
                f"got revision {record.revision}, expected {self.synced_revision + 1}"
            )
        if record.site == self.site:
            if not self.pending:
                raise EngineInvariantError("acknowledgement with no pending operation")
            acked = self.pending.pop(0)
            if acked != record.op:
                raise EngineInvariantError(
                    f"server applied {record.op!r} for pending {acked!r}"
                )
        else:
            op = record.op
            for i, pending_op in enumerate(self.pending):
                op, self.pending[i] = tree_transform.transform(
                    op, record.site, pending_op, self.site
                )
            self.doc = tree_transform.apply_op(self.doc, op)
        self.synced_revision = record.revision


def envelope_to_obj(env: OpEnvelope) -> dict:
    return {
        "site": env.site,
        "seq": env.seq,
        "parent_rev": env.parent_revision,
        "op": codec.op_to_obj(env.op),
    }


def envelope_from_obj(obj: Any) -> OpEnvelope:
    try:
        return OpEnvelope(
            site=int(obj["site"]),
            seq=int(obj["seq"]),
            parent_revision=int(obj["parent_rev"]),
            op=codec.op_from_obj(obj["op"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise codec.CodecError(f"malformed envelope {obj!r}") from exc


class OpLog:
    """Append-only envelope log; the writer owns the file handle."""

    def __init__(self, path: str) -> None:
        self.path = path
        self._handle: TextIO = open(path, "a", encoding="utf-8")

    def append(self, env: OpEnvelope) -> None:
        line = json.dumps(envelope_to_obj(env), separators=(",", ":"))
        self._handle.write(line + "\n")
        self._handle.flush()
        os.fsync(self._handle.fileno())

    def close(self) -> None:
        self._handle.close()

    def __enter__(self) -> "OpLog":
        return self

    def __exit__(self, *exc_info: Any) -> None:
        self.close()


def log_append(path: str, env: OpEnvelope) -> None:
    """One-shot append; prefer :class:`OpLog` for a long-lived writer."""
    with OpLog(path) as log:
        log.append(env)


def read_log(path: str) -> Iterable[OpEnvelope]:
    """Yield the envelopes in a log file, in write order."""
    with open(path, "r", encoding="utf-8") as handle:
        lines = handle.read().split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    for index, line in enumerate(lines):
        try:
            yield envelope_from_obj(json.loads(line))
        except (json.JSONDecodeError, codec.CodecError) as exc:
            if index == len(lines) - 1:
                raise CorruptTailError(f"unreadable final log line {index + 1}: {exc}") from exc
            raise CorruptLogError(f"unreadable log line {index + 1}: {exc}") from exc


def log_replay(path: str, initial: tree.Tree) -> Server:
    """Rebuild a server by re-ingesting a log against the initial document.

    Ingestion is deterministic, so the result matches the writer's state
    at the moment of its final append — same document, head and history.
    """
    server = Server(initial)
    for env in read_log(path):
        try:
            server.ingest(env)
        except SyncError as exc:
            raise CorruptLogError(f"log replay rejected an envelope: {exc}") from exc
    return server
