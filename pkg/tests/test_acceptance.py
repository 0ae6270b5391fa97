"""Acceptance suite: one test per criterion, one printed line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the verdict
lines; the whole suite is self-contained and uses only the installed
package (no frontend required).
"""

import functools
import json
import random
import string

from treeot import jsondoc, sync, tree, verify
from treeot.ops import TreeDelete, TreeInsert
from treeot.tree import Tree

from conftest import t

ACCEPT_CFG = verify.EnumConfig(
    max_nodes=6,
    max_branch=3,
    max_depth=3,
    value_alphabet=("n",),
    payload_pool=(t("p"), t("q", t("r"))),
)


def criterion(number, description):
    def decorate(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                print(f"[criterion {number}] FAIL - {description}")
                raise
            print(f"[criterion {number}] PASS - {description}")

        return wrapper

    return decorate


@criterion(1, "list transform convergence, exhaustive to length 4")
def test_list_convergence_exhaustive():
    report = verify.exhaustive_list_tp1(max_len=4, alphabet=("a", "b"))
    assert report.violations == []
    assert report.cases_total > 0
    assert report.elapsed_ms < 10_000


@criterion(2, "tree transform convergence, exhaustive to 6 nodes")
def test_tree_convergence_exhaustive():
    report = verify.exhaustive_tp1(ACCEPT_CFG)
    assert report.violations == [], report.to_json()
    assert report.cases_total > 0
    assert report.elapsed_ms < 60_000


@criterion(3, "two-stage decompositions equal the direct operations")
def test_decompositions_exhaustive():
    mismatches = 0
    for doc in verify.enumerate_trees(ACCEPT_CFG):
        for slot in tree.insert_slots(doc):
            if len(slot) < 2:
                continue
            for payload in ACCEPT_CFG.payload_pool:
                direct = tree.insert(doc, slot, payload)
                for split in range(1, len(slot)):
                    if tree.decompose_insert(doc, slot, payload, split) != direct:
                        mismatches += 1
        for path in tree.node_paths(doc):
            if len(path) < 2:
                continue
            direct = tree.delete(doc, path)
            for split in range(1, len(path)):
                if tree.decompose_delete(doc, path, split) != direct:
                    mismatches += 1
    assert mismatches == 0


@criterion(4, "insert is undone by delete and retrievable by subtree access")
def test_insert_delete_identities_exhaustive():
    mismatches = 0
    for doc in verify.enumerate_trees(ACCEPT_CFG):
        for slot in tree.insert_slots(doc):
            for payload in ACCEPT_CFG.payload_pool:
                grown = tree.insert(doc, slot, payload)
                if tree.delete(grown, slot) != doc:
                    mismatches += 1
                if tree.subtree(grown, slot) != payload:
                    mismatches += 1
    assert mismatches == 0


@criterion(5, "scripted concurrent insert/delete session converges to A,X,Z")
def test_scripted_session_replay():
    initial = t("doc", t("X"), t("Y"), t("Z"))
    server = sync.Server(initial)
    one = sync.Client(1, 0, initial)
    two = sync.Client(2, 0, initial)

    env1 = one.local_edit(TreeInsert(t("A"), (0,)))
    env2 = two.local_edit(TreeDelete((1,)))
    records = [server.ingest(env1), server.ingest(env2)]
    for record in records:
        one.ingest(record)
        two.ingest(record)

    assert tuple(c.value for c in server.doc.children) == ("A", "X", "Z")
    assert one.doc == two.doc == server.doc
    assert one.pending == two.pending == []


@criterion(6, "1000 randomized sessions converge; rerun is byte-identical")
def test_randomized_convergence():
    report = verify.simulate_sessions(n_clients=4, n_ops=20, n_sessions=1000, seed=42)
    assert report.converged_count == 1000
    rerun = verify.simulate_sessions(n_clients=4, n_ops=20, n_sessions=1000, seed=42)
    assert report.to_json() == rerun.to_json()


def _random_json(rng, depth):
    kinds = ["null", "bool", "int", "float", "str"]
    if depth < 6:
        kinds += ["array", "object"] * 3
    kind = rng.choice(kinds)
    if kind == "null":
        return None
    if kind == "bool":
        return rng.random() < 0.5
    if kind == "int":
        return rng.randint(-10**6, 10**6)
    if kind == "float":
        return round(rng.uniform(-100, 100), 6)
    if kind == "str":
        alphabet = string.ascii_letters + string.digits + "_ äß€"
        return "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 10)))
    if kind == "array":
        return [_random_json(rng, depth + 1) for _ in range(rng.randint(0, 4))]
    keys = {
        "".join(rng.choice(string.ascii_lowercase) for _ in range(rng.randint(1, 5)))
        for _ in range(rng.randint(0, 4))
    }
    return {k: _random_json(rng, depth + 1) for k in keys}


@criterion(7, "JSON documents survive the tree round trip")
def test_json_round_trip_corpus():
    rng = random.Random(7)
    corpus = [
        {},
        [],
        None,
        True,
        False,
        0,
        -1,
        3.25,
        "",
        "plain",
        {"a": {"b": {"c": {"d": {"e": {"f": None}}}}}},
        [[[[[[1]]]]]],
        {"mixed": [1, "two", None, {"three": [True]}]},
    ]
    corpus += [_random_json(rng, 0) for _ in range(50)]
    assert len(corpus) >= 50
    failures = [doc for doc in corpus if jsondoc.tree_to_json(jsondoc.json_to_tree(doc)) != doc]
    assert failures == []


@criterion(8, "a 200-operation logged session replays to the identical server")
def test_log_durability(tmp_path):
    rng = random.Random(99)
    initial = jsondoc.json_to_tree({"items": ["X", "Y", "Z"], "meta": {"rev": 0}})
    server = sync.Server(initial)
    clients = {site: sync.Client(site, 0, initial) for site in (1, 2, 3)}
    inbox = {site: [] for site in clients}
    outbox = {site: [] for site in clients}
    log_path = tmp_path / "ops.jsonl"
    ops_done = 0

    with sync.OpLog(str(log_path)) as log:
        while ops_done < 200 or any(outbox.values()) or any(inbox.values()):
            choices = []
            if ops_done < 200:
                choices.append(("edit", rng.choice(list(clients))))
            choices += [("ingest", s) for s in clients if outbox[s]]
            choices += [("recv", s) for s in clients if inbox[s]]
            kind, site = rng.choice(choices)
            if kind == "edit":
                op = verify.random_valid_op(rng, clients[site].doc)
                outbox[site].append(clients[site].local_edit(op))
                ops_done += 1
            elif kind == "ingest":
                env = outbox[site].pop(0)
                server.ingest(env)
                log.append(env)
                for box in inbox.values():
                    box.append(server.history[-1])
            else:
                clients[site].ingest(inbox[site].pop(0))

    assert server.head == 200
    # the writer is gone; rebuild solely from the file
    replayed = sync.log_replay(str(log_path), initial)
    assert replayed.doc == server.doc
    assert replayed.head == server.head
    assert replayed.history == server.history
    for client in clients.values():
        assert client.doc == server.doc
