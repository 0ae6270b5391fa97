// Mirror-tree operations. These mirror the server's application semantics
// exactly; the client applies server-ordered operations and nothing else.

import { MarkerValue, NodeValue, OpObj, TreeObj } from "./protocol.js";

export function insertAt(doc: TreeObj, path: number[], sub: TreeObj): TreeObj {
  if (path.length === 0) throw new Error("insert requires a non-empty path");
  const [head, ...rest] = path;
  if (rest.length === 0) {
    if (head < 0 || head > doc.c.length) throw new Error(`no insert slot ${head}`);
    const children = doc.c.slice();
    children.splice(head, 0, sub);
    return { v: doc.v, c: children };
  }
  if (head < 0 || head >= doc.c.length) throw new Error(`no node at child index ${head}`);
  const children = doc.c.slice();
  children[head] = insertAt(children[head], rest, sub);
  return { v: doc.v, c: children };
}

export function deleteAt(doc: TreeObj, path: number[]): TreeObj {
  if (path.length === 0) throw new Error("delete requires a non-empty path");
  const [head, ...rest] = path;
  if (head < 0 || head >= doc.c.length) throw new Error(`no node at child index ${head}`);
  const children = doc.c.slice();
  if (rest.length === 0) {
    children.splice(head, 1);
  } else {
    children[head] = deleteAt(children[head], rest);
  }
  return { v: doc.v, c: children };
}

export function applyOp(doc: TreeObj, op: OpObj): TreeObj {
  if (op.kind === "no_op") return doc;
  if (op.kind === "insert_t") return insertAt(doc, op.path, op.tree);
  return deleteAt(doc, op.path);
}

function isMarker(value: NodeValue): value is MarkerValue {
  return typeof value === "object" && value !== null;
}

function serializeValue(value: NodeValue): string {
  if (!isMarker(value)) return JSON.stringify(value);
  switch (value.t) {
    case "scalar":
      return `{"t":"scalar","v":${JSON.stringify(value.v)}}`;
    case "key":
      return `{"t":"key","k":${JSON.stringify(value.k)}}`;
    default:
      return `{"t":${JSON.stringify(value.t)}}`;
  }
}

// Canonical text form with a fixed key order, for convergence comparisons.
export function serialize(doc: TreeObj): string {
  return `{"v":${serializeValue(doc.v)},"c":[${doc.c.map(serialize).join(",")}]}`;
}
