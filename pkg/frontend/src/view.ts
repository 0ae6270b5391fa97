// Collapsible rendering of the mirror tree, with edit gestures that emit
// intents. The view is rebuilt from the session's tree on every change, so
// what is on screen is always exactly the last server-applied state.

import { DocSession } from "./client.js";
import { Intent, Json, MarkerValue, PathStep, TreeObj } from "./protocol.js";

export type IntentSink = (intent: Intent) => void;
export type ErrorSink = (msg: string) => void;

interface Spot {
  kind: "member" | "element" | "root";
  containerPath: PathStep[];
  key?: string;
  index?: number;
}

export function render(
  container: HTMLElement,
  session: DocSession,
  submit: IntentSink,
  complain: ErrorSink,
): void {
  container.innerHTML = "";
  if (!session.doc) {
    container.textContent = "waiting for snapshot…";
    return;
  }
  const top = session.doc.c[0];
  container.appendChild(renderValue(top, [], { kind: "root", containerPath: [] }, submit, complain));
}

function marker(node: TreeObj): MarkerValue | null {
  return typeof node.v === "object" && node.v !== null ? node.v : null;
}

function promptJson(complain: ErrorSink, label: string, initial: string): Json | undefined {
  const raw = window.prompt(`${label} (JSON)`, initial);
  if (raw === null) return undefined;
  try {
    return JSON.parse(raw) as Json;
  } catch {
    complain(`not valid JSON: ${raw}`);
    return undefined;
  }
}

function button(label: string, title: string, onClick: () => void): HTMLButtonElement {
  const element = document.createElement("button");
  element.textContent = label;
  element.title = title;
  element.addEventListener("click", onClick);
  return element;
}

function spotButtons(spot: Spot, submit: IntentSink, complain: ErrorSink): HTMLElement {
  const holder = document.createElement("span");
  holder.className = "gestures";
  if (spot.kind === "member") {
    holder.appendChild(
      button("✎", "replace value", () => {
        const value = promptJson(complain, `new value for "${spot.key}"`, "null");
        if (value !== undefined)
          submit({ kind: "set_key", path: spot.containerPath, key: spot.key!, value });
      }),
    );
    holder.appendChild(
      button("×", "remove member", () =>
        submit({ kind: "remove_key", path: spot.containerPath, key: spot.key! }),
      ),
    );
  } else if (spot.kind === "element") {
    holder.appendChild(
      button("✎", "replace element", () => {
        const value = promptJson(complain, `new value for [${spot.index}]`, "null");
        if (value === undefined) return;
        // array elements have no atomic replace intent: remove, then insert
        submit({ kind: "array_remove", path: spot.containerPath, index: spot.index! });
        submit({ kind: "array_insert", path: spot.containerPath, index: spot.index!, value });
      }),
    );
    holder.appendChild(
      button("×", "remove element", () =>
        submit({ kind: "array_remove", path: spot.containerPath, index: spot.index! }),
      ),
    );
  }
  return holder;
}

function renderValue(
  node: TreeObj,
  path: PathStep[],
  spot: Spot,
  submit: IntentSink,
  complain: ErrorSink,
): HTMLElement {
  const mark = marker(node);
  if (mark?.t === "object") return renderObject(node, path, spot, submit, complain);
  if (mark?.t === "array") return renderArray(node, path, spot, submit, complain);

  const row = document.createElement("span");
  row.className = "scalar";
  row.textContent = mark?.t === "scalar" ? JSON.stringify(mark.v) : JSON.stringify(node.v);
  row.appendChild(spotButtons(spot, submit, complain));
  return row;
}

function renderObject(
  node: TreeObj,
  path: PathStep[],
  spot: Spot,
  submit: IntentSink,
  complain: ErrorSink,
): HTMLElement {
  const details = document.createElement("details");
  details.open = true;
  const summary = document.createElement("summary");
  summary.textContent = `{…} ${node.c.length} member${node.c.length === 1 ? "" : "s"}`;
  summary.appendChild(spotButtons(spot, submit, complain));
  details.appendChild(summary);
  const body = document.createElement("div");
  body.className = "children";
  for (const child of node.c) {
    const mark = marker(child);
    const row = document.createElement("div");
    row.className = "row";
    if (mark?.t !== "key" || child.c.length !== 1) {
      row.textContent = "⚠ malformed member";
      body.appendChild(row);
      continue;
    }
    const label = document.createElement("span");
    label.className = "key";
    label.textContent = JSON.stringify(mark.k) + ":";
    row.appendChild(label);
    row.appendChild(
      renderValue(
        child.c[0],
        [...path, mark.k],
        { kind: "member", containerPath: path, key: mark.k },
        submit,
        complain,
      ),
    );
    body.appendChild(row);
  }
  body.appendChild(
    button("+ member", "add a member", () => {
      const key = window.prompt("member name");
      if (!key && key !== "") return;
      const value = promptJson(complain, `value for "${key}"`, "null");
      if (value !== undefined) submit({ kind: "set_key", path, key, value });
    }),
  );
  details.appendChild(body);
  return details;
}

function renderArray(
  node: TreeObj,
  path: PathStep[],
  spot: Spot,
  submit: IntentSink,
  complain: ErrorSink,
): HTMLElement {
  const details = document.createElement("details");
  details.open = true;
  const summary = document.createElement("summary");
  summary.textContent = `[…] ${node.c.length} element${node.c.length === 1 ? "" : "s"}`;
  summary.appendChild(spotButtons(spot, submit, complain));
  details.appendChild(summary);
  const body = document.createElement("div");
  body.className = "children";
  node.c.forEach((child, index) => {
    const row = document.createElement("div");
    row.className = "row";
    const label = document.createElement("span");
    label.className = "key";
    label.textContent = `[${index}]`;
    row.appendChild(label);
    row.appendChild(
      renderValue(
        child,
        [...path, index],
        { kind: "element", containerPath: path, index },
        submit,
        complain,
      ),
    );
    body.appendChild(row);
  });
  body.appendChild(
    button("+ element", "append an element", () => {
      const value = promptJson(complain, `element [${node.c.length}]`, "null");
      if (value !== undefined)
        submit({ kind: "array_insert", path, index: node.c.length, value });
    }),
  );
  details.appendChild(body);
  return details;
}
