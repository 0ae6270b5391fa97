// Wire protocol types and frame codecs. The server is authoritative: this
// client only ever sends edit intents and applies server-ordered operations.

export type Json = null | boolean | number | string | Json[] | { [key: string]: Json };

export type MarkerValue =
  | { t: "root" }
  | { t: "scalar"; v: Json }
  | { t: "array" }
  | { t: "object" }
  | { t: "key"; k: string };

export type NodeValue = null | boolean | number | string | MarkerValue;

export interface TreeObj {
  v: NodeValue;
  c: TreeObj[];
}

export type OpObj =
  | { kind: "insert_t"; path: number[]; tree: TreeObj }
  | { kind: "delete_t"; path: number[] }
  | { kind: "no_op" };

export type PathStep = string | number;

export type Intent =
  | { kind: "set_key"; path: PathStep[]; key: string; value: Json }
  | { kind: "remove_key"; path: PathStep[]; key: string }
  | { kind: "array_insert"; path: PathStep[]; index: number; value: Json }
  | { kind: "array_remove"; path: PathStep[]; index: number };

export type ServerFrame =
  | { type: "snapshot"; rev: number; doc: TreeObj }
  | { type: "op"; rev: number; site: number; op: OpObj }
  | { type: "error"; code: string; msg: string };

function isRecord(value: unknown): value is Record<string, unknown> {
  return typeof value === "object" && value !== null && !Array.isArray(value);
}

function checkTree(value: unknown): TreeObj {
  if (!isRecord(value) || !("v" in value) || !Array.isArray(value.c)) {
    throw new Error("malformed tree");
  }
  value.c.forEach(checkTree);
  return value as unknown as TreeObj;
}

function checkOp(value: unknown): OpObj {
  if (!isRecord(value)) throw new Error("malformed op");
  if (value.kind === "no_op") return { kind: "no_op" };
  if (value.kind === "insert_t" && Array.isArray(value.path)) {
    return { kind: "insert_t", path: value.path as number[], tree: checkTree(value.tree) };
  }
  if (value.kind === "delete_t" && Array.isArray(value.path)) {
    return { kind: "delete_t", path: value.path as number[] };
  }
  throw new Error(`unknown op kind ${String(value.kind)}`);
}

export function parseServerFrame(raw: string): ServerFrame {
  const frame: unknown = JSON.parse(raw);
  if (!isRecord(frame)) throw new Error("frame must be an object");
  if (frame.type === "snapshot" && typeof frame.rev === "number") {
    return { type: "snapshot", rev: frame.rev, doc: checkTree(frame.doc) };
  }
  if (frame.type === "op" && typeof frame.rev === "number" && typeof frame.site === "number") {
    return { type: "op", rev: frame.rev, site: frame.site, op: checkOp(frame.op) };
  }
  if (frame.type === "error") {
    return { type: "error", code: String(frame.code), msg: String(frame.msg) };
  }
  throw new Error(`unknown frame type ${String(frame.type)}`);
}

export function helloFrame(doc: string, site: number): string {
  return JSON.stringify({ type: "hello", doc, site });
}

export function editFrame(parentRev: number, intent: Intent): string {
  return JSON.stringify({ type: "edit", parent_rev: parentRev, intent });
}
