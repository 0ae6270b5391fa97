"""Command line entry point.

Subcommands: ``verify`` (exhaustive convergence checking), ``simulate``
(randomized end-to-end sessions), ``serve`` (the WebSocket sync service)
and ``apply`` (offline envelope replay). Reports go to the ``--report``
file or stdout as JSON; human summaries go to stderr. Exit status 0 on
success, 1 on detected violations or replay failures, 2 on bad usage or
startup errors.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import logging
import os
import sys
from pathlib import Path

from . import jsondoc, service, sync, verify

LOG_LEVELS = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="treeot",
        description="Operational transformation engine: verify, simulate, serve, apply.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="exhaustively check transformation convergence")
    p.add_argument("--target", choices=("lists", "trees"), required=True)
    p.add_argument("--max-nodes", type=int, default=6, help="tree sweep: max nodes")
    p.add_argument("--max-branch", type=int, default=3, help="tree sweep: max children per node")
    p.add_argument("--max-depth", type=int, default=3, help="tree sweep: max levels")
    p.add_argument("--max-len", type=int, default=4, help="list sweep: max list length")
    p.add_argument("--report", help="write the JSON report here instead of stdout")

    p = sub.add_parser("simulate", help="replay randomized client/server sessions")
    p.add_argument("--clients", type=int, required=True, help="max clients per session (>= 2)")
    p.add_argument("--ops", type=int, required=True, help="max operations per client")
    p.add_argument("--sessions", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--report", help="write the JSON report here instead of stdout")

    p = sub.add_parser("serve", help="serve a document over the wire protocol")
    p.add_argument("--addr", required=True, help="HOST:PORT (port 0 picks a free port)")
    p.add_argument("--doc", required=True, help="initial document, a JSON file")
    p.add_argument("--log", help="append-only operation log (replayed if present)")
    p.add_argument("--ui", help="directory of built demo UI assets (default: autodetect)")

    p = sub.add_parser("apply", help="apply an envelope log to a document offline")
    p.add_argument("--doc", required=True, help="initial document, a JSON file")
    p.add_argument("--ops", required=True, help="envelope log, one JSON envelope per line")
    p.add_argument("--out", required=True, help="output JSON file")
    return parser


def _write_report(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)


def cmd_verify(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    if args.target == "trees":
        if min(args.max_nodes, args.max_branch, args.max_depth) < 1:
            parser.error("tree bounds must be at least 1")
        report = verify.exhaustive_tp1(
            verify.EnumConfig(
                max_nodes=args.max_nodes, max_branch=args.max_branch, max_depth=args.max_depth
            )
        )
    else:
        if args.max_len < 0:
            parser.error("--max-len must be non-negative")
        report = verify.exhaustive_list_tp1(max_len=args.max_len)
    _write_report(report.to_json(), args.report)
    status = "ok" if report.ok else f"{len(report.violations)} violation(s)"
    print(
        f"{args.target}: {report.cases_total} cases, {status}, {report.elapsed_ms} ms",
        file=sys.stderr,
    )
    return 0 if report.ok else 1


def cmd_simulate(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    if args.clients < 2:
        parser.error("--clients must be at least 2")
    if args.ops < 0 or args.sessions < 0:
        parser.error("--ops and --sessions must be non-negative")
    report = verify.simulate_sessions(args.clients, args.ops, args.sessions, args.seed)
    _write_report(report.to_json(), args.report)
    print(
        f"sessions: {report.converged_count}/{len(report.sessions)} converged",
        file=sys.stderr,
    )
    return 0 if report.ok else 1


def cmd_serve(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    host, sep, port_text = args.addr.rpartition(":")
    if not sep or not port_text.isdigit():
        parser.error("--addr must look like HOST:PORT")
    try:
        server = service.load_server(args.doc, args.log)
    except (OSError, ValueError, sync.SyncError) as exc:
        print(f"cannot load document state: {exc}", file=sys.stderr)
        return 2
    op_log = None
    if args.log:
        try:
            op_log = sync.OpLog(args.log)
        except OSError as exc:
            print(f"cannot open log: {exc}", file=sys.stderr)
            return 2
    ui_dir = args.ui or service.default_ui_dir()
    svc = service.SyncService(Path(args.doc).stem, server, op_log, ui_dir)
    try:
        asyncio.run(svc.run(host, int(port_text)))
    except KeyboardInterrupt:
        print("interrupted", file=sys.stderr)
    except OSError as exc:
        print(f"cannot bind {args.addr}: {exc}", file=sys.stderr)
        return 2
    finally:
        if op_log is not None:
            op_log.close()
    return 0


def cmd_apply(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    try:
        with open(args.doc, "r", encoding="utf-8") as handle:
            initial = jsondoc.json_to_tree(json.load(handle))
    except (OSError, ValueError) as exc:
        print(f"cannot load document: {exc}", file=sys.stderr)
        return 2
    server = sync.Server(initial)
    try:
        for line_no, env in enumerate(sync.read_log(args.ops), start=1):
            try:
                server.ingest(env)
            except sync.SyncError as exc:
                print(f"line {line_no}: {exc}", file=sys.stderr)
                return 1
    except sync.CorruptLogError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"cannot read operations: {exc}", file=sys.stderr)
        return 2
    try:
        result = jsondoc.tree_to_json(server.doc)
    except jsondoc.MalformedTreeError as exc:
        print(f"resulting tree is not a JSON document: {exc}", file=sys.stderr)
        return 1
    Path(args.out).write_text(json.dumps(result, indent=2, sort_keys=True) + "\n", "utf-8")
    print(f"applied {server.head} operation(s)", file=sys.stderr)
    return 0


def main(argv: list[str] | None = None) -> int:
    level = os.environ.get("OT_LOG_LEVEL", "error").lower()
    logging.basicConfig(level=LOG_LEVELS.get(level, logging.ERROR))
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "verify": cmd_verify,
        "simulate": cmd_simulate,
        "serve": cmd_serve,
        "apply": cmd_apply,
    }
    return handlers[args.command](parser, args)


if __name__ == "__main__":
    sys.exit(main())
