import { DocSession, SocketLike } from "./client.js";
import { render } from "./view.js";

const params = new URLSearchParams(window.location.search);
const docId = params.get("doc") ?? "doc";
const site = Number(params.get("site") ?? String(1 + Math.floor(Math.random() * 1_000_000)));

const statusBox = document.getElementById("status")!;
const metaBox = document.getElementById("meta")!;
const errorBox = document.getElementById("error")!;
const docBox = document.getElementById("doc")!;

let session: DocSession | null = null;
let retryTimer: number | undefined;
let errorTimer: number | undefined;

function complain(msg: string): void {
  errorBox.textContent = msg;
  errorBox.classList.add("visible");
  window.clearTimeout(errorTimer);
  errorTimer = window.setTimeout(() => errorBox.classList.remove("visible"), 4000);
}

function redraw(): void {
  if (!session) return;
  metaBox.textContent = `doc "${session.docId}" · site ${session.site} · revision ${Math.max(
    session.revision,
    0,
  )}`;
  render(docBox, session, (intent) => session!.submitEdit(intent), complain);
}

function connect(): void {
  window.clearTimeout(retryTimer);
  statusBox.textContent = "connecting…";
  statusBox.className = "connecting";
  const scheme = window.location.protocol === "https:" ? "wss:" : "ws:";
  const socket = new WebSocket(`${scheme}//${window.location.host}/ws`);
  session = new DocSession(socket as unknown as SocketLike, docId, site, {
    onChange: redraw,
    onServerError: (code, msg) => complain(`${code}: ${msg}`),
    onStatus: (status) => {
      if (status === "live") {
        statusBox.textContent = "live";
        statusBox.className = "live";
      } else if (status === "closed") {
        statusBox.textContent = "disconnected — retrying…";
        statusBox.className = "closed";
        retryTimer = window.setTimeout(connect, 2000);
      }
      redraw();
    },
  });
}

document.getElementById("retry")!.addEventListener("click", connect);
connect();
