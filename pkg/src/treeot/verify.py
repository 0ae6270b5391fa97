"""Mechanical convergence checking.

The transformation functions promise one thing: transforming two
same-context operations and applying them cross-wise yields the same
result in either order. This module checks that promise three ways:

* exhaustively over every small tree and every valid operation pair
  (:func:`exhaustive_tp1`),
* exhaustively over every small list (:func:`exhaustive_list_tp1`),
* end to end, by replaying randomized multi-client sessions through the
  sync engine and requiring all replicas to converge
  (:func:`simulate_sessions`).

Every reported counterexample carries enough data to replay it on its
own, and is first shrunk greedily: rightmost subtrees are dropped, then
paths shortened, until the violation disappears.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import random
import time
from collections import deque
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Sequence

from . import codec, list_transform, sync, tree, tree_transform
from .ops import ListDelete, ListInsert, ListOp, NoOp, TreeDelete, TreeInsert, TreeOp
from .tree import Tree

DEFAULT_PAYLOADS = (Tree("p"), Tree("q", (Tree("r"),)))


@dataclass(frozen=True, slots=True)
class EnumConfig:
    """Bounds for the tree state space swept by :func:`exhaustive_tp1`."""

    max_nodes: int = 6
    max_branch: int = 3
    max_depth: int = 3
    value_alphabet: tuple = ("n",)
    payload_pool: tuple[Tree, ...] = DEFAULT_PAYLOADS

    def __post_init__(self) -> None:
        if min(self.max_nodes, self.max_branch, self.max_depth) < 1:
            raise ValueError("all enumeration bounds must be at least 1")
        if not self.value_alphabet:
            raise ValueError("value alphabet must not be empty")


def _shapes(nodes: int, depth: int, branch: int) -> list[tuple]:
    """All ordered tree shapes with exactly ``nodes`` nodes, as nested tuples."""
    if depth < 1 or nodes < 1:
        return []
    if nodes == 1:
        return [()]
    return [forest for forest in _forests(nodes - 1, depth - 1, branch, branch)]


def _forests(total: int, depth: int, slots: int, branch: int) -> list[tuple]:
    if total == 0:
        return [()]
    if slots == 0:
        return []
    out: list[tuple] = []
    for first_size in range(1, total + 1):
        for first in _shapes(first_size, depth, branch):
            for rest in _forests(total - first_size, depth, slots - 1, branch):
                out.append((first,) + rest)
    return out


def _shape_size(shape: tuple) -> int:
    return 1 + sum(_shape_size(child) for child in shape)


def _fill(shape: tuple, values: list) -> Tree:
    value = values.pop(0)
    return Tree(value, tuple(_fill(child, values) for child in shape))


def enumerate_trees(cfg: EnumConfig) -> list[Tree]:
    """Every tree within the bounds, exactly once, in a fixed order.

    Ordered by node count, then shape (lexicographically on the nested
    child-shape tuples), then value assignment in preorder.
    """
    trees: list[Tree] = []
    for nodes in range(1, cfg.max_nodes + 1):
        for shape in sorted(_shapes(nodes, cfg.max_depth, cfg.max_branch)):
            for values in itertools.product(cfg.value_alphabet, repeat=nodes):
                trees.append(_fill(shape, list(values)))
    return trees


def enumerate_valid_ops(doc: Tree, payloads: Sequence[Tree]) -> list[TreeOp]:
    """Every valid insert (per payload) and delete on ``doc``, in a fixed order."""
    ops: list[TreeOp] = []
    slots = list(tree.insert_slots(doc))
    for payload in payloads:
        ops.extend(TreeInsert(payload, slot) for slot in slots)
    ops.extend(TreeDelete(path) for path in tree.node_paths(doc) if path)
    return ops


TransformFn = Callable[[Any, int, Any, int], tuple]


def _converges(
    state: Any,
    op1: Any,
    site1: int,
    op2: Any,
    site2: int,
    apply_fn: Callable,
    transform_fn: TransformFn,
) -> tuple[bool, Any, Any]:
    """Apply both composition orders; returns (equal, left result, right result).

    An application failure counts as a violation: the transform produced
    an operation that is not valid on the other operation's output.
    """
    try:
        t1, t2 = transform_fn(op1, site1, op2, site2)
        left = apply_fn(apply_fn(state, op1), t2)
        right = apply_fn(apply_fn(state, op2), t1)
    except Exception as exc:  # noqa: BLE001 - any failure is a verdict, not a crash
        return False, f"ill-formed-transform: {exc}", None
    return left == right, left, right


@dataclass(slots=True)
class Violation:
    context: Any
    op1: Any
    site1: int
    op2: Any
    site2: int
    left: Any
    right: Any

    def to_obj(self) -> dict:
        return {
            "context": self.context,
            "o1": self.op1,
            "s1": self.site1,
            "o2": self.op2,
            "s2": self.site2,
            "left": self.left,
            "right": self.right,
        }


@dataclass(slots=True)
class TP1Report:
    cases_total: int
    violations: list[Violation]
    elapsed_ms: int

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_obj(self, include_elapsed: bool = True) -> dict:
        obj: dict[str, Any] = {
            "cases_total": self.cases_total,
            "violations": [v.to_obj() for v in self.violations],
        }
        if include_elapsed:
            obj["elapsed_ms"] = self.elapsed_ms
        return obj

    def to_json(self, include_elapsed: bool = True) -> str:
        return json.dumps(self.to_obj(include_elapsed), sort_keys=True, separators=(",", ":"))


def check_tp1(
    op1: TreeOp, site1: int, op2: TreeOp, site2: int, doc: Tree
) -> bool:
    """Do the two composition orders of one transformed pair converge?"""
    equal, _, _ = _converges(
        doc, op1, site1, op2, site2, tree_transform.apply_op, tree_transform.transform
    )
    return equal


def _case_stream(ops: Sequence) -> Iterable[tuple[Any, int, Any, int]]:
    """Every unordered operation pair, in both orders, under both priorities."""
    for i in range(len(ops)):
        for j in range(i, len(ops)):
            for first, second in ((ops[i], ops[j]), (ops[j], ops[i])):
                for site1, site2 in ((1, 2), (2, 1)):
                    yield first, site1, second, site2


def exhaustive_tp1(
    cfg: EnumConfig, transform_fn: TransformFn = tree_transform.transform
) -> TP1Report:
    """Sweep every enumerated tree and valid operation pair for convergence."""
    started = time.monotonic()
    cases = 0
    violations: list[Violation] = []
    for doc in enumerate_trees(cfg):
        ops = enumerate_valid_ops(doc, cfg.payload_pool)
        for op1, s1, op2, s2 in _case_stream(ops):
            cases += 1
            equal, _, _ = _converges(
                doc, op1, s1, op2, s2, tree_transform.apply_op, transform_fn
            )
            if not equal:
                violations.append(_shrunk_tree_violation(doc, op1, s1, op2, s2, transform_fn))
    elapsed_ms = int((time.monotonic() - started) * 1000)
    return TP1Report(cases, violations, elapsed_ms)


def exhaustive_list_tp1(
    max_len: int = 4,
    alphabet: Sequence = ("a", "b"),
    transform_fn: TransformFn = list_transform.transform,
) -> TP1Report:
    """List analogue of :func:`exhaustive_tp1`, over all short lists."""
    started = time.monotonic()
    cases = 0
    violations: list[Violation] = []
    for length in range(max_len + 1):
        for items in itertools.product(alphabet, repeat=length):
            ops = _list_ops(items, alphabet)
            for op1, s1, op2, s2 in _case_stream(ops):
                cases += 1
                equal, _, _ = _converges(
                    items, op1, s1, op2, s2, list_transform.apply_op, transform_fn
                )
                if not equal:
                    violations.append(
                        _shrunk_list_violation(items, op1, s1, op2, s2, transform_fn)
                    )
    elapsed_ms = int((time.monotonic() - started) * 1000)
    return TP1Report(cases, violations, elapsed_ms)


def _list_ops(items: Sequence, alphabet: Sequence) -> list[ListOp]:
    ops: list[ListOp] = []
    for item in alphabet:
        ops.extend(ListInsert(item, pos) for pos in range(len(items) + 1))
    ops.extend(ListDelete(pos) for pos in range(len(items)))
    return ops


def _list_op_obj(op: ListOp) -> dict:
    if isinstance(op, NoOp):
        return {"kind": "no_op"}
    if isinstance(op, ListInsert):
        return {"kind": "insert_l", "pos": op.pos, "item": op.item}
    return {"kind": "delete_l", "pos": op.pos}


def _result_obj(result: Any, encode: Callable) -> Any:
    if isinstance(result, str):
        return {"error": result}
    return encode(result)


def _shrunk_tree_violation(
    doc: Tree, op1: TreeOp, s1: int, op2: TreeOp, s2: int, transform_fn: TransformFn
) -> Violation:
    def violates(state: Tree, a: TreeOp, b: TreeOp) -> bool:
        if not (tree.is_valid(state, a) and tree.is_valid(state, b)):
            return False
        equal, _, _ = _converges(state, a, s1, b, s2, tree_transform.apply_op, transform_fn)
        return not equal

    changed = True
    while changed:
        changed = False
        for candidate in _tree_reductions(doc):
            if violates(candidate, op1, op2):
                doc = candidate
                changed = True
                break
        if changed:
            continue
        for shortened, which in _path_reductions(op1, op2):
            a, b = (shortened, op2) if which == 0 else (op1, shortened)
            if violates(doc, a, b):
                op1, op2 = a, b
                changed = True
                break

    equal, left, right = _converges(doc, op1, s1, op2, s2, tree_transform.apply_op, transform_fn)
    return Violation(
        codec.tree_to_obj(doc),
        codec.op_to_obj(op1),
        s1,
        codec.op_to_obj(op2),
        s2,
        _result_obj(left, codec.tree_to_obj),
        _result_obj(right, codec.tree_to_obj) if right is not None else None,
    )


def _tree_reductions(doc: Tree) -> Iterable[Tree]:
    """Candidate smaller trees: drop the rightmost child of each node in turn."""
    for path in tree.node_paths(doc):
        node = tree.subtree(doc, path)
        if node.children:
            yield tree.delete(doc, path + (len(node.children) - 1,))


def _path_reductions(op1: TreeOp, op2: TreeOp) -> Iterable[tuple[TreeOp, int]]:
    for which, op in ((0, op1), (1, op2)):
        if isinstance(op, NoOp) or len(op.path) <= 1:
            continue
        if isinstance(op, TreeInsert):
            yield TreeInsert(op.tree, op.path[:-1]), which
        else:
            yield TreeDelete(op.path[:-1]), which


def _shrunk_list_violation(
    items: tuple, op1: ListOp, s1: int, op2: ListOp, s2: int, transform_fn: TransformFn
) -> Violation:
    def violates(state: tuple, a: ListOp, b: ListOp) -> bool:
        for op in (a, b):
            if isinstance(op, ListInsert) and op.pos > len(state):
                return False
            if isinstance(op, ListDelete) and op.pos >= len(state):
                return False
        equal, _, _ = _converges(state, a, s1, b, s2, list_transform.apply_op, transform_fn)
        return not equal

    while items and violates(items[:-1], op1, op2):
        items = items[:-1]
    equal, left, right = _converges(items, op1, s1, op2, s2, list_transform.apply_op, transform_fn)
    return Violation(
        list(items),
        _list_op_obj(op1),
        s1,
        _list_op_obj(op2),
        s2,
        _result_obj(left, list),
        _result_obj(right, list) if right is not None else None,
    )


# --- randomized end-to-end sessions -----------------------------------------

SIM_ALPHABET = "abcdef"
SIM_SIZE_CAP = 24


@dataclass(slots=True)
class SessionResult:
    session: int
    clients: int
    ops: int
    converged: bool
    digest: str
    trace: list | None = None

    def to_obj(self) -> dict:
        obj: dict[str, Any] = {
            "session": self.session,
            "clients": self.clients,
            "ops": self.ops,
            "converged": self.converged,
            "digest": self.digest,
        }
        if self.trace is not None:
            obj["trace"] = self.trace
        return obj


@dataclass(slots=True)
class SimReport:
    seed: int
    sessions: list[SessionResult]

    @property
    def converged_count(self) -> int:
        return sum(1 for s in self.sessions if s.converged)

    @property
    def ok(self) -> bool:
        return self.converged_count == len(self.sessions)

    def to_obj(self) -> dict:
        return {
            "seed": self.seed,
            "sessions_total": len(self.sessions),
            "converged": self.converged_count,
            "sessions": [s.to_obj() for s in self.sessions],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_obj(), sort_keys=True, separators=(",", ":"))


def tree_digest(doc: Tree) -> str:
    blob = json.dumps(codec.tree_to_obj(doc), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:16]


def _random_initial(rng: random.Random) -> Tree:
    children = tuple(Tree(rng.choice(SIM_ALPHABET)) for _ in range(rng.randint(1, 3)))
    return Tree("root", children)


def random_valid_op(rng: random.Random, doc: Tree) -> TreeOp:
    """Draw a random valid edit, biased to keep the tree from ballooning."""
    deletable = [path for path in tree.node_paths(doc) if path]
    crowded = tree.size(doc) > SIM_SIZE_CAP
    if deletable and (crowded or rng.random() < 0.4):
        return TreeDelete(rng.choice(deletable))
    slots = list(tree.insert_slots(doc))
    payload = rng.choice(DEFAULT_PAYLOADS)
    return TreeInsert(payload, rng.choice(slots))


def _run_session(rng: random.Random, index: int, max_clients: int, max_ops: int) -> SessionResult:
    n_clients = rng.randint(2, max_clients) if max_clients > 2 else 2
    budgets = [rng.randint(0, max_ops) for _ in range(n_clients)]
    initial = _random_initial(rng)
    server = sync.Server(initial)
    clients = [sync.Client(site, 0, initial) for site in range(1, n_clients + 1)]
    to_server: list[deque] = [deque() for _ in range(n_clients)]
    inbox: list[deque] = [deque() for _ in range(n_clients)]
    trace: list = []
    total_ops = 0

    while True:
        actions: list[tuple[str, int]] = []
        for i in range(n_clients):
            if budgets[i] > 0:
                actions.append(("edit", i))
            if to_server[i]:
                actions.append(("ingest", i))
            if inbox[i]:
                actions.append(("recv", i))
        if not actions:
            break
        kind, i = rng.choice(actions)
        if kind == "edit":
            op = random_valid_op(rng, clients[i].doc)
            env = clients[i].local_edit(op)
            to_server[i].append(env)
            budgets[i] -= 1
            total_ops += 1
            trace.append(["edit", i + 1, sync.envelope_to_obj(env)])
        elif kind == "ingest":
            env = to_server[i].popleft()
            record = server.ingest(env)
            for box in inbox:
                box.append(record)
            trace.append(["ingest", i + 1, record.revision])
        else:
            record = inbox[i].popleft()
            clients[i].ingest(record)
            trace.append(["recv", i + 1, record.revision])

    converged = all(client.doc == server.doc for client in clients) and all(
        not client.pending for client in clients
    )
    return SessionResult(
        session=index,
        clients=n_clients,
        ops=total_ops,
        converged=converged,
        digest=tree_digest(server.doc),
        trace=None if converged else trace,
    )


def simulate_sessions(n_clients: int, n_ops: int, n_sessions: int, seed: int) -> SimReport:
    """Replay randomized client/server sessions to quiescence.

    Each session draws its client count (2 up to ``n_clients``), gives
    every client up to ``n_ops`` random valid edits, and interleaves
    edits, server ingestion and delivery at random until all queues
    drain. Fully deterministic for a given seed; a diverged session
    keeps its full event trace for replay.
    """
    if n_clients < 2:
        raise ValueError("simulation needs at least 2 clients")
    if n_ops < 0 or n_sessions < 0:
        raise ValueError("operation and session counts must be non-negative")
    sessions = [
        _run_session(random.Random(f"{seed}:{index}"), index, n_clients, n_ops)
        for index in range(n_sessions)
    ]
    return SimReport(seed, sessions)
