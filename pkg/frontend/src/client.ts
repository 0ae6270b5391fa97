// The document session: socket handling, snapshot/op bookkeeping, intents.
// Transport-agnostic so the same class runs in the browser and in tests.

import { Intent, OpObj, ServerFrame, TreeObj, editFrame, helloFrame, parseServerFrame } from "./protocol.js";
import { applyOp } from "./tree.js";

export interface SocketLike {
  send(data: string): void;
  close(): void;
  onopen: ((event?: unknown) => void) | null;
  onmessage: ((event: { data: unknown }) => void) | null;
  onclose: ((event?: unknown) => void) | null;
  onerror: ((event?: unknown) => void) | null;
}

export type SessionStatus = "connecting" | "live" | "closed";

export interface SessionHooks {
  onChange?: (session: DocSession) => void;
  onServerError?: (code: string, msg: string) => void;
  onStatus?: (status: SessionStatus) => void;
}

export class DocSession {
  doc: TreeObj | null = null;
  revision = -1;
  status: SessionStatus = "connecting";
  readonly site: number;
  readonly docId: string;

  private readonly socket: SocketLike;
  private readonly hooks: SessionHooks;

  constructor(socket: SocketLike, docId: string, site: number, hooks: SessionHooks = {}) {
    this.socket = socket;
    this.docId = docId;
    this.site = site;
    this.hooks = hooks;
    socket.onopen = () => this.socket.send(helloFrame(this.docId, this.site));
    socket.onmessage = (event) => this.handleRaw(String(event.data));
    socket.onclose = () => this.setStatus("closed");
    socket.onerror = () => this.setStatus("closed");
  }

  close(): void {
    this.socket.close();
  }

  submitEdit(intent: Intent): void {
    if (this.revision < 0) throw new Error("no snapshot yet");
    this.socket.send(editFrame(this.revision, intent));
  }

  private setStatus(status: SessionStatus): void {
    if (this.status !== status) {
      this.status = status;
      this.hooks.onStatus?.(status);
    }
  }

  private handleRaw(raw: string): void {
    let frame: ServerFrame;
    try {
      frame = parseServerFrame(raw);
    } catch (err) {
      this.hooks.onServerError?.("bad-frame", String(err));
      return;
    }
    if (frame.type === "snapshot") {
      this.doc = frame.doc;
      this.revision = frame.rev;
      this.setStatus("live");
      this.hooks.onChange?.(this);
    } else if (frame.type === "op") {
      this.applyServerOp(frame.rev, frame.op);
    } else {
      this.hooks.onServerError?.(frame.code, frame.msg);
    }
  }

  private applyServerOp(rev: number, op: OpObj): void {
    if (this.doc === null) return;
    if (rev !== this.revision + 1) {
      // missed a broadcast: ask for a fresh snapshot instead of guessing
      this.socket.send(helloFrame(this.docId, this.site));
      return;
    }
    this.doc = applyOp(this.doc, op);
    this.revision = rev;
    this.hooks.onChange?.(this);
  }
}
